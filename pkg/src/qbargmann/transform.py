"""The q-deformed true-polyanalytic Bargmann transform.

``B[f](z) = int A(z; xi) f(xi) dxi`` with kernel

    A(z; xi) = gamma * G(z; xi) * Q~_m(sinh(kappa xi); t, tau; q) * sqrt(omega(xi)),
    gamma    = (-1)^m q^(binom(m,2)/2 + m) / sqrt((q;q)_m),
    G(z; xi) = (-c e^(kappa xi), c e^(-kappa xi); q)_inf,  c = q^((1+m)/2) sqrt(1-q) z,
    t        = i q^((m-1)/2) sqrt(1-q) z,   tau = i q^((m-3)/2) sqrt(1-q) conj(z).

The kernel equals ``sum_j h_j^{m,q}(z) phi_j(xi)``, which is
``sqrt(N) conj(Psi_{z,m,q}(xi))``, so ``B[phi_j] = h_j^{m,q}`` and ``B[f](z)``
is ``sqrt(N) <f, Psi_z>`` with the inner product linear in its first slot.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .classical import classical_hermite_function, true_polyanalytic_kernel
from .cstates import coeff_table, eigenfunction_phi, eigenfunction_table, log_weight_omega
from .qcore import (
    DEFAULT_POLICY,
    QLike,
    TruncationPolicy,
    as_q,
    log_qpoch_infinite,
    qpoch_infinite,
    qpoch_qpow,
)
from .qpolys import alsalam_chihara_x
from .quadrature import QuadratureRule, build_piecewise_rule, build_radial_rule, build_realline_rule

__all__ = [
    "SignalFunction",
    "combine",
    "gamma_constant",
    "transform_kernel",
    "level_zero_kernel",
    "bargmann_transform",
    "classical_transform",
    "transform_limit_check",
    "kernel_pointwise_limit_check",
    "hermite_coefficients",
    "isometry_defect",
    "builtin_signal",
    "signal_from_samples",
    "load_signal_csv",
    "rule_for_signal",
]

DECAY_CLASSES = ("Gaussian", "Polynomial", "Compact")


@dataclass(frozen=True, eq=False)
class SignalFunction:
    """A real-line function ``f`` fed to the transform.

    ``breakpoints`` lists points where ``f`` is not smooth (panel edges go
    there); ``support`` is set for compactly supported signals.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    decay_class: str
    label: str
    breakpoints: tuple = ()
    support: tuple | None = None
    degree_hint: int = 0

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ValueError(f"decay_class must be one of {DECAY_CLASSES}")

    def __call__(self, xi):
        return self.eval(np.asarray(xi, dtype=float))

    def __add__(self, other: "SignalFunction") -> "SignalFunction":
        return combine([(1.0, self), (1.0, other)])

    def scaled(self, c: complex) -> "SignalFunction":
        return combine([(c, self)])


def combine(parts: Sequence[tuple[complex, SignalFunction]], label: str | None = None) -> SignalFunction:
    """Linear combination ``sum c_i f_i``."""
    parts = list(parts)
    classes = {f.decay_class for _, f in parts}
    # the slowest-decaying part sets the class of the sum
    decay = next(d for d in ("Polynomial", "Gaussian", "Compact") if d in classes)
    bps = tuple(sorted({b for _, f in parts for b in f.breakpoints}))
    supports = [f.support for _, f in parts]
    support = None
    if all(s is not None for s in supports):
        support = (min(s[0] for s in supports), max(s[1] for s in supports))

    def ev(xi):
        return sum(c * f(xi) for c, f in parts)

    lab = label or " + ".join(f"{c}*{f.label}" for c, f in parts)
    return SignalFunction(ev, decay, lab, bps, support, max(f.degree_hint for _, f in parts))


def gamma_constant(m: int, q: QLike) -> float:
    qp = as_q(q)
    return ((-1) ** m * qp.q ** (0.25 * m * (m - 1) + m)
            / math.sqrt(qpoch_qpow(1, qp, m)))


def _log_G(z: np.ndarray, xi: np.ndarray, m: int, qp, policy) -> np.ndarray:
    kx = qp.kappa * xi
    c = qp.q ** ((1 + m) / 2) * math.sqrt(qp.one_minus_q) * z
    return (log_qpoch_infinite(-c * np.exp(kx), qp, policy)
            + log_qpoch_infinite(c * np.exp(-kx), qp, policy))


def transform_kernel(z, xi, m: int, q: QLike, policy: TruncationPolicy | None = None):
    """Closed-form kernel ``A_m^q(z; xi)``; broadcasts ``z`` against ``xi``."""
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=float)
    zb, xb = np.broadcast_arrays(z, xi)
    s = math.sqrt(qp.one_minus_q)
    t = 1j * qp.q ** ((m - 1) / 2) * s * zb
    tau = 1j * qp.q ** ((m - 3) / 2) * s * np.conj(zb)
    poly = alsalam_chihara_x(m, np.sinh(qp.kappa * xb), t, tau, qp)
    log_mag = _log_G(zb, xb, m, qp, policy) + 0.5 * log_weight_omega(xb, qp)
    with np.errstate(under="ignore"):
        out = gamma_constant(m, qp) * poly * np.exp(log_mag)
    return out if out.ndim else complex(out)


def level_zero_kernel(z, xi, q: QLike, policy: TruncationPolicy | None = None):
    """Level-zero product kernel
    ``(-sqrt(q(1-q)) z e^(kappa xi), sqrt(q(1-q)) z e^(-kappa xi); q)_inf sqrt(omega(xi))``."""
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=float)
    zb, xb = np.broadcast_arrays(z, xi)
    c = math.sqrt(qp.q * qp.one_minus_q) * zb
    kx = qp.kappa * xb
    prod = (np.asarray(qpoch_infinite(-c * np.exp(kx), qp, policy))
            * np.asarray(qpoch_infinite(c * np.exp(-kx), qp, policy)))
    out = prod * np.exp(0.5 * log_weight_omega(xb, qp))
    return out if out.ndim else complex(out)


def _apply(kernel_matrix: np.ndarray, f_values: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    return kernel_matrix @ (rule.weights * f_values)


def rule_for_signal(f: SignalFunction, q: QLike, tol: float = 1e-14, order: int = 20,
                    max_degree_hint: int = 0) -> QuadratureRule:
    """Real-line rule adapted to ``f``: panel edges at its breakpoints, and for
    compact signals only the support is covered."""
    hint = max(max_degree_hint, f.degree_hint)
    if f.support is not None:
        breaks = sorted({f.support[0], f.support[1], *f.breakpoints})
        return build_piecewise_rule(breaks, order)
    return build_realline_rule(q, tol, hint, order=order, breakpoints=f.breakpoints)


def bargmann_transform(f: SignalFunction, z, m: int, q: QLike, rule: QuadratureRule | None = None,
                       policy: TruncationPolicy | None = None):
    """``B_m^q[f](z)`` by quadrature; vectorized over ``z``."""
    qp = as_q(q)
    rule = rule or rule_for_signal(f, qp)
    if rule.kind != "RealLine":
        raise ValueError("bargmann_transform needs a RealLine rule")
    z = np.asarray(z, dtype=complex)
    A = transform_kernel(z.reshape(-1, 1), rule.nodes[None, :], m, qp, policy)
    out = _apply(A, np.asarray(f(rule.nodes)), rule).reshape(z.shape)
    return out if z.ndim else complex(out)


def classical_transform(f: SignalFunction, z, m: int, rule: QuadratureRule):
    """Classical true-polyanalytic transform ``B_m[f](z)`` by quadrature."""
    z = np.asarray(z, dtype=complex)
    A = np.array([true_polyanalytic_kernel(zz, rule.nodes, m) for zz in z.ravel()])
    out = _apply(A, np.asarray(f(rule.nodes)), rule).reshape(z.shape)
    return out if z.ndim else complex(out)


def transform_limit_check(f: SignalFunction, z, m: int, q_sequence: Sequence[float],
                          rule: QuadratureRule | None = None,
                          policy: TruncationPolicy | None = None) -> list[tuple[float, float]]:
    """``(q, |B_m^q[f](z) - B_m[f](z)|)`` along ``q_sequence`` on one shared rule."""
    if rule is None:
        rule = rule_for_signal(f, 0.5, max_degree_hint=0)
    target = classical_transform(f, complex(z), m, rule)
    return [(float(qv), abs(bargmann_transform(f, complex(z), m, qv, rule, policy) - target))
            for qv in q_sequence]


def kernel_pointwise_limit_check(z, xi: float, m: int, q_sequence: Sequence[float],
                                 policy: TruncationPolicy | None = None) -> list[tuple[float, float]]:
    """``(q, |A_m^q(z; xi) - classical kernel(z; xi)|)`` along ``q_sequence``."""
    target = true_polyanalytic_kernel(complex(z), float(xi), m)
    return [(float(qv), abs(transform_kernel(complex(z), float(xi), m, qv, policy) - target))
            for qv in q_sequence]


def hermite_coefficients(f: SignalFunction, q: QLike, jmax: int,
                         rule: QuadratureRule | None = None) -> np.ndarray:
    """``a_j = int f phi_j dxi`` for ``j <= jmax``."""
    rule = rule or rule_for_signal(f, q, max_degree_hint=jmax)
    phis = eigenfunction_table(jmax, rule.nodes, q)
    return phis @ (rule.weights * np.asarray(f(rule.nodes)))


def isometry_defect(f: SignalFunction, g: SignalFunction, m: int, q: QLike,
                    rules: tuple[QuadratureRule, QuadratureRule] | None = None,
                    jmax: int = 12) -> float:
    """``|<B f, B g>_{d mu_q} - <f, g>_{L^2}|`` computed in coefficient space.

    ``B f = sum_j a_j h_j^{m,q}`` with ``a_j = <f, phi_j>``; the Gram matrix of
    ``h_j^{m,q}`` under ``d mu_q`` comes from the radial rule, so the check does
    not assume orthonormality of the coefficients.
    """
    qp = as_q(q)
    if rules is None:
        hint = max(jmax, f.degree_hint, g.degree_hint)
        line = build_realline_rule(qp, 1e-14, hint,
                                   breakpoints=tuple(set(f.breakpoints) | set(g.breakpoints)))
        rules = (line, build_radial_rule(qp, m, jmax))
    line, radial = rules
    a = hermite_coefficients(f, qp, jmax, line)
    b = hermite_coefficients(g, qp, jmax, line)
    theta = 2 * math.pi * np.arange(radial.angular) / radial.angular
    zz = radial.nodes[:, None] * np.exp(1j * theta)[None, :]
    H = coeff_table(jmax, m, zz, qp)  # (J, R, T)
    gram = np.einsum("jrt,krt,r->jk", H, np.conj(H), radial.weights) / radial.angular
    lhs = np.einsum("j,k,jk->", a, np.conj(b), gram)
    rhs = line.integrate(np.asarray(f(line.nodes)) * np.conj(np.asarray(g(line.nodes))))
    return float(abs(lhs - rhs))


def builtin_signal(name: str, q: QLike | None = None) -> SignalFunction:
    """Named signals: ``hermite_q:J`` (needs ``q``), ``hermite:J`` (classical),
    ``gaussian`` and ``indicator`` (of ``[-1, 1]``)."""
    if name.startswith("hermite_q:"):
        j = int(name.split(":", 1)[1])
        if q is None:
            raise ValueError("hermite_q signals need q")
        qp = as_q(q)
        return SignalFunction(lambda xi: eigenfunction_phi(j, xi, qp), "Gaussian", name,
                              degree_hint=j)
    if name.startswith("hermite:"):
        j = int(name.split(":", 1)[1])
        return SignalFunction(lambda xi: classical_hermite_function(j, xi), "Gaussian", name,
                              degree_hint=j)
    if name == "gaussian":
        return SignalFunction(lambda xi: np.pi ** -0.25 * np.exp(-0.5 * np.asarray(xi) ** 2),
                              "Gaussian", name)
    if name == "indicator":
        return SignalFunction(lambda xi: (np.abs(np.asarray(xi)) <= 1.0).astype(float),
                              "Compact", name, breakpoints=(-1.0, 1.0), support=(-1.0, 1.0))
    if name == "zero":
        return SignalFunction(lambda xi: np.zeros_like(np.asarray(xi, dtype=float)),
                              "Compact", name, support=(-1.0, 1.0))
    raise ValueError(f"unknown built-in signal {name!r}")


def signal_from_samples(xs, fs, label: str = "samples") -> SignalFunction:
    """Linear interpolant of samples, zero outside ``[xs[0], xs[-1]]``."""
    xs = np.asarray(xs, dtype=float)
    fs = np.asarray(fs)
    if xs.ndim != 1 or xs.size < 2 or xs.shape != fs.shape:
        raise ValueError("need at least two (xi, f) samples of matching length")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")
    lo, hi = float(xs[0]), float(xs[-1])

    def ev(xi):
        xi = np.asarray(xi, dtype=float)
        inside = (xi >= lo) & (xi <= hi)
        if np.iscomplexobj(fs):
            vals = np.interp(xi, xs, fs.real) + 1j * np.interp(xi, xs, fs.imag)
        else:
            vals = np.interp(xi, xs, fs)
        return np.where(inside, vals, 0.0)

    return SignalFunction(ev, "Compact", label, breakpoints=tuple(xs.tolist()), support=(lo, hi))


def load_signal_csv(path: str) -> SignalFunction:
    """Read a two-column ``xi,f`` CSV (header row required)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty sample file")
    body = [r for r in rows[1:] if r and not r[0].lstrip().startswith("#")]
    try:
        xs = [float(r[0]) for r in body]
        fs = [float(r[1]) for r in body]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed sample row ({exc})") from exc
    return signal_from_samples(xs, fs, label=path)
