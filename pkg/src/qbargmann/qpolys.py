"""Orthogonal polynomial families behind the construction.

q-Laguerre, continuous q^-1-Hermite (plain and overflow-safe scaled),
q^-1-Al-Salam-Chihara, continuous big q^-1-Hermite and the Ismail-Zhang
two-variable q-Hermite polynomials.

Conventions
-----------
``h_n(x|q)`` is the continuous q^-1-Hermite polynomial, ``h_n(x|q) =
i^-n H_n(ix|1/q)``, with recurrence

    h_{n+1} = 2x h_n - (q^-n - 1) h_{n-1}.

``alsalam_chihara(n, kappa, t, tau, q)`` is ``Q~_n(sinh kappa; t, tau; q)``.  It
equals the classical Al-Salam-Chihara polynomial ``i^-n Q_n(ix; a, b | 1/q)``
with ``a = -i t``, ``b = -i tau``, which gives the recurrence

    Q~_{n+1} = (2x + i(t + tau) q^-n) Q~_n - (q^-n - 1)(1 - t tau q^(1-n)) Q~_{n-1}.

The terminating 3phi2 representation is available as
``method="hypergeometric"``; its second denominator parameter is
``-i q^(1-n) t e^-kappa``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .classical import classical_hermite, classical_laguerre
from .errors import DomainError
from .qcore import QLike, as_q, phi21, phi32, qbinomial, qpoch_finite, qpoch_qpow

__all__ = [
    "MAX_DEGREE",
    "q_laguerre",
    "q_laguerre_phi21",
    "qinv_hermite",
    "qinv_hermite_scaled",
    "qinv_hermite_scaled_table",
    "alsalam_chihara",
    "alsalam_chihara_x",
    "big_qinv_hermite",
    "ismail_zhang_H",
    "ismail_zhang_H_laguerre",
    "classical_hermite",
    "classical_laguerre",
]

MAX_DEGREE = 256
_RESCALE = 1e100
_LOG_RESCALE = math.log(_RESCALE)


def _check_degree(n: int):
    if n < 0 or n > MAX_DEGREE:
        raise DomainError(f"degree must lie in [0, {MAX_DEGREE}], got {n}")


def q_laguerre(n: int, alpha: int, x, q: QLike):
    """q-Laguerre polynomial ``L_n^(alpha)(x; q)`` from its explicit monomial form

        sum_k (-1)^k q^(k^2 + alpha k) (q^(alpha+k+1); q)_{n-k} / ((q;q)_{n-k} (q;q)_k) x^k.

    ``alpha`` may be a negative integer.  Every term stays O(1) when
    ``x = (1 - q) X`` and ``q -> 1``, so the classical limit is evaluated
    without cancellation.
    """
    _check_degree(n)
    qp = as_q(q)
    x = np.asarray(x)
    out = np.zeros_like(x, dtype=np.result_type(x, float))
    xk = np.ones_like(out)
    for k in range(n + 1):
        c = ((-1) ** k * qp.q ** (k * k + alpha * k) * qpoch_qpow(alpha + k + 1, qp, n - k)
             / (qpoch_qpow(1, qp, n - k) * qpoch_qpow(1, qp, k)))
        out = out + c * xk
        xk = xk * x
    return out if x.ndim else out.item()


def q_laguerre_phi21(n: int, alpha: int, x, q: QLike) -> complex:
    """``L_n^(alpha)(x; q) = 2phi1(q^-n, -x; 0 | q; q^(n+alpha+1)) / (q;q)_n``."""
    qp = as_q(q)
    val = phi21(None, -complex(x), 0.0, qp, qp.q ** (n + alpha + 1), terminating_n=n)
    return val / qpoch_qpow(1, qp, n)


def qinv_hermite(n: int, x, q: QLike):
    """Continuous q^-1-Hermite polynomial ``h_n(x|q)`` (unscaled).

    Raises ``OverflowError`` once the ``q^-n`` growth leaves binary64 range; use
    :func:`qinv_hermite_scaled` for high degrees.
    """
    _check_degree(n)
    qp = as_q(q)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    cur = 2 * x if n else prev
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            prev, cur = cur, 2 * x * cur - math.expm1(-k * qp.log_q) * prev
    if not np.all(np.isfinite(cur)):
        raise OverflowError(f"h_{n}(x|q) overflows binary64 at q={qp.q}")
    return cur if x.ndim else cur.item()


def qinv_hermite_scaled_table(nmax: int, x, q: QLike, log_seed=None) -> np.ndarray:
    """Rows ``g_0 .. g_nmax`` of ``g_n = q^(n(n+1)/4) (q;q)_n^-1/2 h_n(x|q)``.

    The scaled sequence obeys

        g_{n+1} = (2x q^((n+1)/2) g_n - q^(1/2) sqrt(1 - q^n) g_{n-1}) / sqrt(1 - q^(n+1)),

    which is iterated with per-point rescaling so nothing overflows.
    ``log_seed`` (same shape as ``x``) multiplies every row by ``exp(log_seed)``
    inside the rescaled arithmetic, which avoids underflow when the seed is a
    tiny Gaussian weight.
    """
    _check_degree(nmax)
    qp = as_q(q)
    q = qp.q
    x = np.asarray(x, dtype=float)
    logscale = np.zeros_like(x) if log_seed is None else np.array(log_seed, dtype=float)
    rows = np.empty((nmax + 1,) + x.shape)
    prev = np.ones_like(x)
    rows[0] = np.exp(logscale)
    if nmax == 0:
        return rows
    cur = 2 * x * math.sqrt(q) / math.sqrt(-math.expm1(qp.log_q)) * prev
    rows[1] = cur * np.exp(logscale)
    sq = math.sqrt(q)
    for n in range(1, nmax):
        a = 2 * q ** ((n + 1) / 2)
        b = sq * math.sqrt(-math.expm1(n * qp.log_q))
        d = math.sqrt(-math.expm1((n + 1) * qp.log_q))
        prev, cur = cur, (a * x * cur - b * prev) / d
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            logscale = np.where(big, logscale + _LOG_RESCALE, logscale)
        with np.errstate(over="ignore", under="ignore"):
            rows[n + 1] = cur * np.exp(logscale)
    return rows


def qinv_hermite_scaled(n: int, x, q: QLike):
    """``q^(n(n+1)/4) (q;q)_n^-1/2 h_n(x|q)``, finite for every ``n <= MAX_DEGREE``."""
    x = np.asarray(x, dtype=float)
    out = qinv_hermite_scaled_table(n, x, q)[n]
    return out if x.ndim else out.item()


def alsalam_chihara_x(n: int, x, t: complex, tau: complex, q: QLike):
    """``Q~_n(x; t, tau; q)`` by the three-term recurrence (broadcasts over all three)."""
    _check_degree(n)
    qp = as_q(q)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    x, t, tau = np.broadcast_arrays(x, t, tau)
    s = 1j * (t + tau)
    prev = np.ones(x.shape, dtype=complex)
    if n == 0:
        return prev if x.ndim else prev.item()
    cur = 2 * x + s
    for k in range(1, n):
        qmk = math.exp(-k * qp.log_q)
        prev, cur = cur, ((2 * x + s * qmk) * cur
                          - math.expm1(-k * qp.log_q) * (1 - t * tau * qp.q * qmk) * prev)
    return cur if x.ndim else cur.item()


def _alsalam_chihara_phi32(n: int, kappa: float, t: complex, tau: complex, qp) -> complex:
    e = math.exp(kappa)
    pref = (qp.q ** (-n * (n - 1) / 2) * (1j * t) ** n
            * qpoch_finite(1j * e / t, qp, n) * qpoch_finite(-1j / (e * t), qp, n))
    series = phi32(None, qp.q ** (1 - n) * t * tau, 0.0,
                   1j * qp.q ** (1 - n) * t * e, -1j * qp.q ** (1 - n) * t / e,
                   qp, qp.q, terminating_n=n)
    return pref * series


def alsalam_chihara(n: int, kappa, t: complex, tau: complex, q: QLike,
                    method: str = "recurrence"):
    """q^-1-Al-Salam-Chihara polynomial ``Q~_n(sinh kappa; t, tau; q)``.

    ``method="hypergeometric"`` evaluates the prefactored terminating 3phi2
    directly (scalar ``kappa`` only).  That form is singular at ``t = 0`` and
    loses about ``n log10(1/|t|)`` digits for small ``t``; ``t = 0`` is always
    served by the recurrence.
    """
    qp = as_q(q)
    if method == "recurrence" or np.all(np.asarray(t) == 0):
        return alsalam_chihara_x(n, np.sinh(kappa), t, tau, qp)
    if method != "hypergeometric":
        raise ValueError(f"unknown method {method!r}")
    if np.ndim(kappa):
        return np.array([_alsalam_chihara_phi32(n, float(k), complex(t), complex(tau), qp)
                         for k in np.ravel(kappa)]).reshape(np.shape(kappa))
    return _alsalam_chihara_phi32(n, float(kappa), complex(t), complex(tau), qp)


def big_qinv_hermite(n: int, s, b: complex, q: QLike):
    """Continuous big q^-1-Hermite polynomial ``h_n(s; b|q) = Q~_n(s; 0, b; q)``."""
    return alsalam_chihara_x(n, s, 0.0, b, q)


def ismail_zhang_H(r: int, s: int, z: complex, w: complex, q: QLike) -> complex:
    """Ismail-Zhang q-analogue ``H_{r,s}(z, w|q)`` of the complex Hermite polynomials."""
    _check_degree(max(r, s))
    qp = as_q(q)
    z, w = complex(z), complex(w)
    total = 0j
    for k in range(min(r, s) + 1):
        total += (qbinomial(r, k, qp) * qbinomial(s, k, qp)
                  * qp.q ** ((r - k) * (s - k) + k * (k - 1) // 2) * (-1) ** k
                  * qpoch_qpow(1, qp, k) * z ** (r - k) * w ** (s - k))
    return total


def ismail_zhang_H_laguerre(r: int, s: int, z: complex, q: QLike) -> complex:
    """``H_{r,s}(z, conj(z)|q)`` through the q-Laguerre form

        (-1)^(r^s) (q;q)_(r^s) |z|^|r-s| e^(i(r-s) arg z) L_(r^s)^(|r-s|)(|z|^2; q),

    where ``r^s = min(r, s)``.  This agrees with :func:`ismail_zhang_H` at
    ``w = conj(z)`` only when ``min(r, s) <= 1``; from degree 2 on, each power
    ``|z|^(2j)`` in the defining sum carries an extra ``q^((n-j)(n-j-1)/2)``
    (``n = r^s``) that no rescaling of the Laguerre argument absorbs.  The
    coefficients of the coherent states are built from this form directly,
    so only this standalone cross-check is affected.
    """
    qp = as_q(q)
    z = complex(z)
    lo, d = min(r, s), abs(r - s)
    phase = cmath.exp(1j * (r - s) * cmath.phase(z)) if z != 0 else 1.0
    return ((-1) ** lo * qpoch_qpow(1, qp, lo) * abs(z) ** d * phase
            * q_laguerre(lo, d, abs(z) ** 2, qp))
