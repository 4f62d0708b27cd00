"""Registry of the algebraic identities behind the kernel and transform derivations.

Every entry draws random parameters, evaluates both sides by independent
routes and reports the scale-normalized residual
``|lhs - rhs| / (1 + |lhs| + |rhs|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import classical_laguerre
from .errors import UnknownIdentity
from .kernel import sigma_terminating
from .qcore import (
    QParam,
    phi21,
    phi32,
    qbinomial,
    qpoch_finite,
    qpoch_infinite,
    qpoch_qpow,
)
from .qpolys import (
    alsalam_chihara,
    big_qinv_hermite,
    q_laguerre,
    q_laguerre_phi21,
    qinv_hermite_scaled_table,
)

__all__ = [
    "IdentityCase",
    "IdentityReport",
    "REGISTRY",
    "CANARY",
    "AUXILIARY",
    "names",
    "check",
    "check_case",
    "residual",
]

_RESAMPLE_LIMIT = 1000
_NEAR_POLE = 1e-6


def residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))


class _Resample(Exception):
    """Raised by a sampler when the draw lands within 1e-6 of a pole set."""


class Sampler:
    """Draws parameters with the registry's default distributions."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def q(self, lo: float = 0.1, hi: float = 0.9) -> QParam:
        return QParam(float(self.rng.uniform(lo, hi)))

    def cplx(self, lo: float = 0.01, hi: float = 3.0) -> complex:
        r = math.exp(self.rng.uniform(math.log(lo), math.log(hi)))
        return complex(r * np.exp(1j * self.rng.uniform(-math.pi, math.pi)))

    def real(self, lo: float, hi: float) -> float:
        return float(self.rng.uniform(lo, hi))

    def int(self, lo: int = 0, hi: int = 8) -> int:
        return int(self.rng.integers(lo, hi + 1))


_MAX_CONDITION = 1e4


def _well_conditioned(scale: float, lhs: complex, rhs: complex):
    """Resample draws where the terms of a finite sum exceed its value by more
    than ``_MAX_CONDITION``: binary64 cannot resolve a 1e-10 residual there."""
    if scale > _MAX_CONDITION * (1.0 + abs(lhs) + abs(rhs)):
        raise _Resample


def _series_scale(upper, lower, q: QParam, x: complex, n: int) -> float:
    """``sum_k |term_k|`` of a terminating series with first parameter ``q^-n``."""
    total, term = 1.0, 1.0
    for k in range(n):
        qk = q.q ** k
        num = abs(-math.expm1((k - n) * q.log_q)) * math.prod(abs(1 - a * qk) for a in upper)
        den = abs(-math.expm1((k + 1) * q.log_q)) * math.prod(abs(1 - b * qk) for b in lower)
        term *= num / den * abs(x)
        total += term
    return total


def _away(*values: complex):
    """Resample when any value is within the pole tolerance of zero."""
    if min(abs(v) for v in values) < _NEAR_POLE:
        raise _Resample


@dataclass(frozen=True)
class IdentityCase:
    name: str
    sample: Callable[[Sampler], dict]
    sides: Callable[..., tuple[complex, complex]]
    domain: str
    tol: float = 1e-10


@dataclass(frozen=True)
class IdentityReport:
    name: str
    samples: int
    seed: int
    tol: float
    max_residual: float
    worst_params: dict
    resampled: int = 0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


# --- individual identities -------------------------------------------------

def _qbin_theorem_lhs(a: complex, qp: QParam) -> complex:
    terms, t, n = [1.0 + 0j], 1.0 + 0j, 0
    while True:
        t = t * qp.q ** n * a / -math.expm1((n + 1) * qp.log_q)
        n += 1
        terms.append(t)
        if abs(t) < 1e-18 * max(1.0, abs(sum(terms))) and n > 4:
            break
    return complex(math.fsum(x.real for x in terms), math.fsum(x.imag for x in terms))


def _s_qbin(s: Sampler) -> dict:
    return {"q": s.q(), "a": s.cplx()}


def _qbin_sides(q, a):
    return _qbin_theorem_lhs(a, q), qpoch_infinite(-a, q)


def _qbin_corrupt_sides(q, a):
    lhs, rhs = _qbin_sides(q, a)
    return lhs, q.q * rhs


def _s_ratio(s: Sampler) -> dict:
    q, a, g = s.q(), s.cplx(), s.int(0, 30)
    _away(qpoch_infinite(a * q.q ** g, q))
    return {"q": q, "a": a, "gamma": g}


def _ratio_sides(q, a, gamma):
    return qpoch_finite(a, q, gamma), qpoch_infinite(a, q) / qpoch_infinite(a * q.q ** gamma, q)


def _s_shift(s: Sampler) -> dict:
    q, a, n, r = s.q(), s.cplx(), s.int(), s.int()
    _away(qpoch_finite(a, q, n))
    return {"q": q, "a": a, "n": n, "r": r}


def _shift_sides(q, a, n, r):
    return (qpoch_finite(a * q.q ** n, q, r),
            qpoch_finite(a, q, r) * qpoch_finite(a * q.q ** r, q, n) / qpoch_finite(a, q, n))


def _s_split(s: Sampler) -> dict:
    return {"q": s.q(), "lam": s.cplx(), "m": s.int(), "k": s.int(), "l": s.int()}


def _split_sides(q, lam, m, k, l):
    a = q.q ** -m * lam
    return qpoch_finite(a, q, l + k), qpoch_finite(a, q, k) * qpoch_finite(q.q ** (k - m) * lam, q, l)


def _s_chu(s: Sampler) -> dict:
    q, b, c, n = s.q(), s.cplx(), s.cplx(), s.int()
    _away(qpoch_finite(c, q, n), b)
    return {"q": q, "b": b, "c": c, "n": n}


def _chu_sides(q, b, c, n):
    lhs = phi21(None, b, c, q, q.q, terminating_n=n)
    rhs = qpoch_finite(c / b, q, n) * b ** n / qpoch_finite(c, q, n)
    _well_conditioned(_series_scale([b], [c], q, q.q, n), lhs, rhs)
    return lhs, rhs


def _s_heine(s: Sampler) -> dict:
    q, n = s.q(), s.int()
    xi, sig, gam, tau = s.cplx(), s.cplx(), s.cplx(), s.cplx()
    _away(qpoch_finite(gam, q, n), qpoch_finite(q.q ** (1 - n) / tau, q, n),
          qpoch_finite(tau, q, n), qpoch_finite(xi * tau, q, n), sig)
    return {"q": q, "n": n, "xi": xi, "sigma": sig, "gamma": gam, "tau": tau}


def _heine_sides(q, n, xi, sigma, gamma, tau):
    lhs = phi32(None, xi, sigma, gamma, q.q ** (1 - n) / tau, q, q.q, terminating_n=n)
    rhs = (qpoch_finite(xi * tau, q, n) / qpoch_finite(tau, q, n)
           * phi32(None, gamma / sigma, xi, gamma, xi * tau, q, sigma * tau * q.q ** n,
                   terminating_n=n))
    return lhs, rhs


def _s_cancel(s: Sampler) -> dict:
    return {"q": s.q(), "m": s.int(1, 8), "z": s.cplx(), "w": s.cplx()}


def _cancel_sides(q, m, z, w):
    """Finite part of the coefficient-product sum: both sub-sums, compared."""
    a = q.one_minus_q * abs(z) ** 2 / q.q
    b = q.one_minus_q * abs(w) ** 2 / q.q
    qm = qpoch_qpow(1, q, m)
    first, second = [], []
    for j in range(m):
        qj = qpoch_qpow(1, q, j)
        pw = q.q ** (((m - j) ** 2 + m + j) / 2)
        first.append(qj * qj * pw * (1 / q.q - 1) ** (m - j) * (z.conjugate() * w) ** (m - j)
                     / (qm * qj) * q_laguerre(j, m - j, a, q) * q_laguerre(j, m - j, b, q))
        second.append(qm * qm * pw * (1 / q.q - 1) ** (j - m) * (z * w.conjugate()) ** (j - m)
                      / (qm * qj) * q_laguerre(m, j - m, a, q) * q_laguerre(m, j - m, b, q))
    return complex(sum(first)), complex(sum(second))


def _s_lag(s: Sampler) -> dict:
    return {"q": s.q(), "n": s.int(), "alpha": s.int(-8, 8), "x": s.cplx()}


def _lag_sides(q, n, alpha, x):
    lhs, rhs = complex(q_laguerre(n, alpha, x, q)), q_laguerre_phi21(n, alpha, x, q)
    scale = _series_scale([-x], [0.0], q, q.q ** (n + alpha + 1), n) / qpoch_qpow(1, q, n)
    _well_conditioned(scale, lhs, rhs)
    return lhs, rhs


def _s_genfun(s: Sampler) -> dict:
    return {"q": s.q(), "t": s.cplx(0.01, 2.0), "x": s.real(-3.0, 3.0)}


def _genfun_sides(q, t, x):
    # term_n = t^n q^(binom(n,2)) h_n / (q;q)_n = t^n q^((n^2 - 3n)/4) g_n / sqrt((q;q)_n)
    N = 200
    g = qinv_hermite_scaled_table(N, np.array(x), q)
    terms = []
    log_qq = 0.0
    for n in range(N + 1):
        if n:
            log_qq += math.log(-math.expm1(n * q.log_q))
        tn = t ** n * math.exp(0.25 * (n * n - 3 * n) * q.log_q - 0.5 * log_qq) * float(g[n])
        terms.append(tn)
        if n > 8 and abs(tn) < 1e-20 * max(1.0, abs(sum(terms))):
            break
    lhs = complex(math.fsum(v.real for v in terms), math.fsum(v.imag for v in terms))
    th = math.asinh(x)
    rhs = qpoch_infinite(-t * math.exp(th), q) * qpoch_infinite(t * math.exp(-th), q)
    _well_conditioned(sum(abs(v) for v in terms), lhs, rhs)
    return lhs, rhs


def _s_asc(s: Sampler) -> dict:
    return {"q": s.q(), "n": s.int(0, 6), "kappa": s.real(-2.0, 2.0),
            "a": s.cplx(0.3, 3.0), "b": s.cplx()}


def _asc_sides(q, n, kappa, a, b):
    lhs = alsalam_chihara(n, kappa, a, b, q, method="hypergeometric")
    x = math.sinh(kappa)
    rhs = q.q ** (-n * (n - 1) / 2) * sum(
        qbinomial(n, k, q) * q.q ** (k * (k - 1) / 2) * (1j * a) ** (n - k) * big_qinv_hermite(k, x, b, q)
        for k in range(n + 1))
    return complex(lhs), complex(rhs)


def _s_gbin(s: Sampler) -> dict:
    g = s.int(0, 8)
    return {"q": s.q(), "gamma": g, "k": s.int(0, g)}


def _gbin_sides(q, gamma, k):
    rhs = ((-1) ** k * q.q ** (k * gamma - k * (k - 1) / 2)
           * qpoch_finite(q.q ** -gamma, q, k) / qpoch_qpow(1, q, k))
    return qbinomial(gamma, k, q), rhs


def _neville_at_zero(h: np.ndarray, y: np.ndarray) -> complex:
    p = np.array(y, dtype=complex)
    n = len(h)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i])
    return complex(p[0])


def _s_sigma(s: Sampler) -> dict:
    return {"m": s.int(0, 5), "z": s.cplx(0.01, 1.5), "w": s.cplx(0.01, 1.5)}


def _sigma_sides(m, z, w):
    h = 0.1 * 2.0 ** -np.arange(8)
    vals = [sigma_terminating(z, w, m, QParam(1.0 - hk))[0] for hk in h]
    return _neville_at_zero(h, np.array(vals)), complex(classical_laguerre(m, 0, abs(z - w) ** 2))


REGISTRY: dict[str, IdentityCase] = {c.name: c for c in [
    IdentityCase("q_binomial_theorem", _s_qbin, _qbin_sides,
                 "q in [0.1,0.9]; |a| log-uniform in [0.01,3]"),
    IdentityCase("pochhammer_ratio", _s_ratio, _ratio_sides,
                 "integer gamma in [0,30]; |a| in [0.01,3]"),
    IdentityCase("pochhammer_shift", _s_shift, _shift_sides, "n, r in [0,8]"),
    IdentityCase("pochhammer_split", _s_split, _split_sides, "m, k, l in [0,8]; |lambda| in [0.01,3]"),
    IdentityCase("q_chu_vandermonde", _s_chu, _chu_sides, "n in [0,8]; |b|, |c| in [0.01,3]"),
    IdentityCase("finite_heine", _s_heine, _heine_sides, "n in [0,8]; four complex parameters"),
    IdentityCase("s_finite_cancellation", _s_cancel, _cancel_sides, "m in [1,8]; |z|, |w| in [0.01,3]"),
    IdentityCase("qlaguerre_phi21", _s_lag, _lag_sides, "n in [0,8]; alpha in [-8,8]"),
    IdentityCase("qinv_hermite_generating", _s_genfun, _genfun_sides, "|t| <= 2; x in [-3,3]"),
    IdentityCase("alsalam_chihara_big_hermite", _s_asc, _asc_sides,
                 "n in [0,6]; kappa in [-2,2]; |t| in [0.3,3]"),
    IdentityCase("gaussian_binomial_negative", _s_gbin, _gbin_sides, "0 <= k <= gamma <= 8"),
    IdentityCase("sigma_classical_limit", _s_sigma, _sigma_sides,
                 "m in [0,5]; |z|, |w| in [0.01,1.5]; Neville extrapolation in 1-q"),
]}

CANARY = IdentityCase("corrupted_q_binomial", _s_qbin, _qbin_corrupt_sides,
                      "q-binomial theorem with the right side multiplied by q")


def _s_negsup(s: Sampler) -> dict:
    n = s.int(0, 12)
    return {"q": s.q(), "n": n, "N": s.int(0, n), "x": s.cplx()}


def _negsup_sides(q, n, N, x):
    lhs = q_laguerre(n, -N, x, q)
    rhs = ((-1) ** N * x ** N * qpoch_qpow(1, q, n - N) / qpoch_qpow(1, q, n)
           * q_laguerre(n - N, N, x, q))
    return complex(lhs), complex(rhs)


# checkable by name but not part of the default suite
AUXILIARY: dict[str, IdentityCase] = {c.name: c for c in [
    IdentityCase("laguerre_negative_superscript", _s_negsup, _negsup_sides,
                 "0 <= N <= n <= 12; |x| in [0.01,3]", tol=1e-11),
]}


def names() -> list[str]:
    return list(REGISTRY)


def check_case(case: IdentityCase, samples: int = 100, seed: int = 42) -> IdentityReport:
    """Run one identity over ``samples`` draws; deterministic in ``seed``."""
    rng = np.random.default_rng([seed, sum(map(ord, case.name))])
    sampler = Sampler(rng)
    worst, worst_params = 0.0, {}
    rejected = 0
    for _ in range(samples):
        for _attempt in range(_RESAMPLE_LIMIT):
            try:
                params = case.sample(sampler)
                lhs, rhs = case.sides(**params)
                break
            except (_Resample, ZeroDivisionError):
                rejected += 1
        else:
            raise RuntimeError(f"{case.name}: could not draw a pole-free sample")
        res = residual(complex(lhs), complex(rhs))
        if math.isnan(res):
            res = math.inf
        if res > worst or not worst_params:
            worst, worst_params = res, params
    return IdentityReport(case.name, samples, seed, case.tol, worst, worst_params, rejected)


def check(name: str, samples: int = 100, seed: int = 42) -> IdentityReport:
    """Check a registered identity by name; ``UnknownIdentity`` if absent."""
    if name == CANARY.name:
        return check_case(CANARY, samples, seed)
    case = REGISTRY.get(name) or AUXILIARY.get(name)
    if case is None:
        raise UnknownIdentity(name)
    return check_case(case, samples, seed)
