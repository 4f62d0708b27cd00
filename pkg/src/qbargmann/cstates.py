"""Coherent-state layer: coefficients, eigenfunctions, weight, normalization, measures.

Conventions used throughout the package:

* ``kappa = sqrt(ln(1/q) / 2)``, i.e. ``q = exp(-2 kappa^2)``.
* ``phi_j(xi) = sqrt(omega(xi)) (q^(j(j+1)/2) / (q;q)_j)^(1/2) h_j(sinh(kappa xi)|q)`` with
  ``omega(xi) = pi^(-1/2) q^(1/8) cosh(kappa xi) exp(-xi^2)``.  These are
  orthonormal in ``L^2(R)``.  As ``q -> 1`` the Hermite argument satisfies
  ``sinh(kappa xi) ~ sqrt((1-q)/2) xi``.
* ``N_m(x) = q^m E_q(x) (q^-1 (q-1) x; q)_m / ((q-1) x; q)_m``, which equals
  ``sum_j |h_j^{m,q}(z)|^2`` at ``x = |z|^2``.
* ``Psi_z = N^(-1/2) sum_j conj(h_j^{m,q}(z)) phi_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, TruncationExceeded
from .qcore import (
    DEFAULT_POLICY,
    ComplexPoint,
    QLike,
    QParam,
    TruncationPolicy,
    as_complex,
    as_q,
    log_qpoch_infinite,
    qpoch_finite,
)
from .qpolys import MAX_DEGREE, q_laguerre, qinv_hermite_scaled_table

__all__ = [
    "MAX_LEVEL",
    "LevelParams",
    "StateCoefficients",
    "coeff_h",
    "coeff_table",
    "state_coefficients",
    "hermite_argument",
    "log_weight_omega",
    "weight_omega",
    "eigenfunction_phi",
    "eigenfunction_table",
    "normalization_N",
    "log_measure_density_mu",
    "measure_density_mu",
    "measure_density_nu",
    "coherent_state_eval",
]

MAX_LEVEL = 64


@dataclass(frozen=True)
class LevelParams:
    """Level index ``m`` together with the deformation parameter."""

    m: int
    q: QParam

    def __post_init__(self):
        if not (0 <= int(self.m) <= MAX_LEVEL):
            raise DomainError(f"m must lie in [0, {MAX_LEVEL}], got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "q", as_q(self.q))


def _level(m: int, q: QLike) -> LevelParams:
    return LevelParams(m, as_q(q))


def _log_qq(n: int, qp: QParam) -> float:
    """``log (q; q)_n``."""
    return math.fsum(math.log(-math.expm1(l * qp.log_q)) for l in range(1, n + 1))


def coeff_h(j: int, m: int, z, q: QLike):
    """Coefficient ``h_j^{m,q}(z)`` (vectorized over ``z``).

    The modulus of the prefactor is assembled in the log domain so large
    ``j`` neither overflows nor underflows prematurely.
    """
    lp = _level(m, q)
    qp = lp.q
    if j < 0 or j > MAX_DEGREE:
        raise DomainError(f"j must lie in [0, {MAX_DEGREE}], got {j}")
    z = np.asarray(z, dtype=complex)
    lo, d = min(m, j), abs(m - j)
    r = np.abs(z)
    log_pref = (_log_qq(lo, qp) - 0.5 * (_log_qq(m, qp) + _log_qq(j, qp))
                + 0.25 * ((m - j) ** 2 + m + j) * qp.log_q
                + 0.5 * d * (math.log(qp.one_minus_q) - qp.log_q))
    with np.errstate(divide="ignore"):
        log_mod = log_pref + (d * np.log(r) if d else 0.0)
    # arg(0) = 0; the modulus already vanishes there when d > 0
    phase = np.exp(-1j * (m - j) * np.angle(z)) if d else 1.0
    lag = q_laguerre(lo, d, qp.one_minus_q / qp.q * r * r, qp)
    out = (-1) ** lo * np.exp(log_mod) * phase * lag
    return out if z.ndim else complex(out)


def coeff_table(jmax: int, m: int, z, q: QLike) -> np.ndarray:
    """Rows ``h_0 .. h_jmax`` evaluated at every ``z``; shape ``(jmax+1,) + z.shape``."""
    z = np.asarray(z, dtype=complex)
    return np.stack([np.asarray(coeff_h(j, m, z, q)) for j in range(jmax + 1)])


@dataclass(frozen=True)
class StateCoefficients:
    """Truncated coefficient sequence ``h_0^{m,q}(z) .. h_J^{m,q}(z)``."""

    params: LevelParams
    z: ComplexPoint
    coeffs: np.ndarray = field(repr=False)

    @property
    def J(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm_sq(self) -> float:
        return math.fsum(np.abs(self.coeffs) ** 2)


def state_coefficients(z, m: int, q: QLike, policy: TruncationPolicy | None = None,
                       jmin: int = 0) -> StateCoefficients:
    """Coefficients up to the first ``J > max(m + 10, jmin)`` where two consecutive
    terms satisfy ``|h_J| < rel_tol * (sum_{j<=J} |h_j|^2)^(1/2)``.

    The amplitude test (rather than one on ``|h_J|^2``) keeps pointwise sums
    such as ``Psi_z(xi)`` accurate to ``rel_tol`` and not only to its square root.
    """
    lp = _level(m, q)
    policy = policy or DEFAULT_POLICY
    zc = as_complex(z)
    coeffs = []
    total = 0.0
    quiet = 0
    cap = min(policy.max_terms, MAX_DEGREE)
    for j in range(cap + 1):
        c = coeff_h(j, lp.m, zc, lp.q)
        coeffs.append(c)
        a2 = abs(c) ** 2
        total += a2
        if a2 <= policy.rel_tol ** 2 * total or total == 0.0:
            quiet += 1
        else:
            quiet = 0
        if quiet >= 2 and j > max(lp.m + 10, jmin):
            return StateCoefficients(lp, ComplexPoint.of(zc), np.array(coeffs))
    raise TruncationExceeded(f"coefficient series at z={zc} did not settle within {cap} terms")


def hermite_argument(xi, q: QLike):
    """``sinh(kappa xi)``, the argument fed to ``h_j(.|q)``."""
    return np.sinh(as_q(q).kappa * np.asarray(xi, dtype=float))


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def log_weight_omega(xi, q: QLike):
    qp = as_q(q)
    xi = np.asarray(xi, dtype=float)
    return -0.5 * math.log(math.pi) + qp.log_q / 8.0 + _log_cosh(qp.kappa * xi) - xi * xi


def weight_omega(xi, q: QLike):
    """``omega_q(xi) = pi^(-1/2) q^(1/8) cosh(kappa xi) exp(-xi^2)``."""
    out = np.exp(log_weight_omega(xi, q))
    return out if np.ndim(xi) else float(out)


def eigenfunction_table(jmax: int, xi, q: QLike) -> np.ndarray:
    """Rows ``phi_0 .. phi_jmax`` on ``xi``; shape ``(jmax+1,) + xi.shape``."""
    xi = np.asarray(xi, dtype=float)
    return qinv_hermite_scaled_table(jmax, hermite_argument(xi, q), q,
                                     log_seed=0.5 * log_weight_omega(xi, q))


def eigenfunction_phi(j: int, xi, q: QLike):
    """``phi_j^q(xi)``, orthonormal on the real line."""
    out = eigenfunction_table(j, xi, q)[j]
    return out if np.ndim(xi) else float(out)


def normalization_N(m: int, x, q: QLike, policy: TruncationPolicy | None = None):
    """Closed-form normalization ``N_{m,q}(x)`` at ``x = |z|^2 >= 0``."""
    lp = _level(m, q)
    qp = lp.q
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("normalization_N needs x = |z|^2 >= 0")
    a = -qp.one_minus_q * x
    log_E = np.real(log_qpoch_infinite(a, qp, policy))
    ratio = np.asarray(qpoch_finite(a / qp.q, qp, lp.m)) / np.asarray(qpoch_finite(a, qp, lp.m))
    out = qp.q ** lp.m * np.exp(log_E) * ratio
    return out if x.ndim else float(out)


def log_measure_density_mu(r2, q: QLike, policy: TruncationPolicy | None = None):
    """Natural log of the ``d mu_q`` density at ``|z|^2 = r2``."""
    qp = as_q(q)
    r2 = np.asarray(r2, dtype=float)
    c = math.log(-qp.one_minus_q / (qp.q * qp.log_q))
    return c - np.real(log_qpoch_infinite(-qp.one_minus_q / qp.q * r2, qp, policy))


def measure_density_mu(z, q: QLike, policy: TruncationPolicy | None = None):
    """Density of ``d mu_q`` against ``d lambda(z) / pi``:
    ``(q - 1) / (q ln q) / E_q(|z|^2 / q)``."""
    z = np.asarray(z, dtype=complex)
    out = np.exp(log_measure_density_mu(np.abs(z) ** 2, q, policy))
    return out if z.ndim else float(out)


def measure_density_nu(z, m: int, q: QLike, policy: TruncationPolicy | None = None):
    """Density of ``d nu_{m,q} = N_{m,q}(|z|^2) d mu_q``."""
    z = np.asarray(z, dtype=complex)
    out = normalization_N(m, np.abs(z) ** 2, q, policy) * measure_density_mu(z, q, policy)
    return out if z.ndim else float(out)


def coherent_state_eval(z, m: int, q: QLike, xi, policy: TruncationPolicy | None = None):
    """``Psi_{z,m,q}(xi)`` from its truncated series (vectorized over ``xi``)."""
    st = state_coefficients(z, m, q, policy)
    xi = np.asarray(xi, dtype=float)
    phis = eigenfunction_table(st.J, xi, q)
    series = np.tensordot(np.conj(st.coeffs), phis, axes=1)
    out = series / math.sqrt(normalization_N(m, abs(st.z.z) ** 2, q, policy))
    return out if xi.ndim else complex(out)
