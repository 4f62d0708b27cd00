"""Reproducing kernel ``K_{m,q}(z, w) = sum_j h_j^{m,q}(z) conj(h_j^{m,q}(w))``.

The kernel is holomorphic in ``z`` and antiholomorphic in ``w`` in the
classical sense (it tends to ``exp(z conj(w)) L_m(|z - w|^2)``).  Two
independent evaluation paths exist: the truncated series over basis
coefficients and the closed form

    K = q^m ((q-1) z conj(w); q)_inf * sigma_{m,q}(z, w),

    sigma = sum_{k=0}^m (q^-m, q conj(w)/conj(z), q z/w; q)_k
                       / (((q-1) z conj(w); q)_k (q;q)_k^2) * (q^(m-1) (q-1) w conj(z))^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classical import classical_kernel
from .cstates import coeff_h, normalization_N, state_coefficients
from .errors import PoleError
from .qcore import (
    DEFAULT_POLICY,
    QLike,
    TruncationPolicy,
    as_complex,
    as_q,
    qpoch_infinite,
)

__all__ = [
    "KernelValue",
    "sigma_terminating",
    "overlap_series",
    "overlap_closed",
    "kernel",
    "normalized_overlap",
    "classical_kernel",
    "kernel_limit_check",
    "gram_matrix",
]

_EPS = np.finfo(float).eps
_POLE_EPS = 64 * _EPS


@dataclass(frozen=True)
class KernelValue:
    value: complex
    path: str  # "closed" or "series"
    est_error: float

    def __complex__(self) -> complex:
        return self.value


def overlap_series(z, w, m: int, q: QLike, policy: TruncationPolicy | None = None) -> KernelValue:
    """Kernel from the truncated coefficient series.

    ``est_error`` covers the first omitted term twice over (the tail decays
    faster than geometrically) plus accumulated rounding.
    """
    policy = policy or DEFAULT_POLICY
    z, w = as_complex(z), as_complex(w)
    sz = state_coefficients(z, m, q, policy)
    sw = state_coefficients(w, m, q, policy, jmin=sz.J)
    sz = state_coefficients(z, m, q, policy, jmin=sw.J) if sw.J > sz.J else sz
    J = min(sz.J, sw.J)
    terms = sz.coeffs[: J + 1] * np.conj(sw.coeffs[: J + 1])
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    nxt = abs(coeff_h(J + 1, m, z, q) * coeff_h(J + 1, m, w, q))
    est = 2.0 * nxt + 8 * _EPS * float(np.sum(np.abs(terms)))
    return KernelValue(value, "series", est)


def sigma_terminating(z: complex, w: complex, m: int, q: QLike) -> tuple[complex, float]:
    """Terminating sum ``sigma_{m,q}(z, w)`` and the sum of its term moduli.

    The upper parameters ``q conj(w)/conj(z)`` and ``q z/w`` only ever enter
    multiplied by the argument ``x = q^(m-1) (q-1) w conj(z)``, so each factor
    ``(1 - a2 q^k)(1 - a3 q^k) x`` is expanded into products that contain no
    division by ``z`` or ``w``.  The sum is therefore valid at ``z = 0`` and
    ``w = 0`` as well.

    Raises ``PoleError`` when ``((q-1) z conj(w); q)_k`` vanishes for ``k < m``.
    """
    qp = as_q(q)
    z, w = complex(z), complex(w)
    zb, wb = z.conjugate(), w.conjugate()
    c = qp.q ** m * (qp.q - 1.0)
    lam = (qp.q - 1.0) * z * wb
    x = qp.q ** (m - 1) * (qp.q - 1.0) * w * zb
    a2x = c * abs(w) ** 2  # (q conj(w)/conj(z)) * x
    a3x = c * abs(z) ** 2  # (q z/w) * x
    a23x = c * qp.q * z * wb  # (q conj(w)/conj(z)) (q z/w) * x
    term = 1.0 + 0j
    terms = [term]
    for k in range(m):
        qk = qp.q ** k
        den_lam = 1.0 - lam * qk
        if abs(den_lam) <= _POLE_EPS * max(1.0, abs(lam * qk)):
            raise PoleError(f"((q-1) z conj(w); q)_k vanishes at k={k}")
        num = -math.expm1((k - m) * qp.log_q) * (x - qk * (a2x + a3x) + qk * qk * a23x)
        den = den_lam * math.expm1((k + 1) * qp.log_q) ** 2
        term = term * num / den
        terms.append(term)
    arr = np.array(terms)
    return complex(math.fsum(arr.real), math.fsum(arr.imag)), float(np.sum(np.abs(arr)))


def overlap_closed(z, w, m: int, q: QLike, policy: TruncationPolicy | None = None) -> KernelValue:
    """Kernel from the closed product-times-terminating-sum form.

    The measure-zero pole set ``(q-1) z conj(w) q^k = 1`` (where the product
    factor vanishes and the sum has a pole) is rerouted to
    :func:`overlap_series`; the returned ``path`` says which ran.
    """
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    z, w = as_complex(z), as_complex(w)
    try:
        sigma, size = sigma_terminating(z, w, m, qp)
    except PoleError:
        return overlap_series(z, w, m, qp, policy)
    pref = qp.q ** m * complex(qpoch_infinite((qp.q - 1.0) * z * w.conjugate(), qp, policy))
    value = pref * sigma
    est = abs(pref) * (16 * (m + 1) * _EPS * size) + 4 * policy.rel_tol * abs(value)
    return KernelValue(value, "closed", est)


def kernel(z, w, m: int, q: QLike, policy: TruncationPolicy | None = None) -> complex:
    """Kernel value on the default (closed-form) path."""
    return overlap_closed(z, w, m, q, policy).value


def normalized_overlap(z, w, m: int, q: QLike, policy: TruncationPolicy | None = None) -> complex:
    """``K(z, w) / sqrt(N(|z|^2) N(|w|^2))``: the overlap of the unit states at z and w."""
    z, w = as_complex(z), as_complex(w)
    k = kernel(z, w, m, q, policy)
    return k / math.sqrt(normalization_N(m, abs(z) ** 2, q, policy)
                         * normalization_N(m, abs(w) ** 2, q, policy))


def kernel_limit_check(z, w, m: int, q_sequence: Sequence[float],
                       policy: TruncationPolicy | None = None) -> list[tuple[float, float]]:
    """``(q, |K_{m,q}(z, w) - exp(z conj(w)) L_m(|z - w|^2)|)`` along ``q_sequence``."""
    z, w = as_complex(z), as_complex(w)
    target = classical_kernel(z, w, m)
    return [(float(qv), abs(kernel(z, w, m, qv, policy) - target)) for qv in q_sequence]


def gram_matrix(points, m: int, q: QLike, policy: TruncationPolicy | None = None) -> np.ndarray:
    """Hermitian matrix ``[K(z_i, z_j)]`` over a finite point set."""
    pts = [as_complex(p) for p in points]
    n = len(pts)
    G = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = kernel(pts[i], pts[j], m, q, policy)
            G[j, i] = G[i, j].conjugate()
    return G
