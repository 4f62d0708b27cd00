"""q-series primitives: Pochhammer symbols, q-binomials and basic hypergeometric sums.

All routines work in binary64.  Infinite products are split into a short
"head" of factors with ``|a q^l| >= 1/2`` which is multiplied out directly, and
a tail whose logarithm is summed from the power series

    log (b; q)_inf = -sum_{n>=1} b^n / (n (1 - q^n)),    |b| < 1,

which stays fast as ``q -> 1`` where the plain product would need millions of
factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import Divergence, DomainError, PoleError, TruncationExceeded

__all__ = [
    "QParam",
    "TruncationPolicy",
    "ComplexPoint",
    "DEFAULT_POLICY",
    "as_q",
    "as_complex",
    "compensated_sum",
    "qpoch_finite",
    "qpoch_qpow",
    "qpoch_infinite",
    "log_qpoch_infinite",
    "qbinomial",
    "qfactorial",
    "q_exponential_E",
    "phi21",
    "phi32",
]

_HEAD_RADIUS = 0.5
_POLE_EPS = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class QParam:
    """Deformation parameter ``0 < q < 1``."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or math.isnan(q):
            raise DomainError(f"q must satisfy 0 < q < 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def one_minus_q(self) -> float:
        return -math.expm1(math.log(self.q))

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def kappa(self) -> float:
        """Scale with ``q = exp(-2 kappa^2)``; the natural real-line variable."""
        return math.sqrt(-0.5 * math.log(self.q))

    def __float__(self) -> float:
        return self.q


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule shared by every infinite sum and product."""

    rel_tol: float = 1e-13
    abs_tol: float = 1e-300
    max_terms: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_terms) < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class ComplexPoint:
    """A point of the complex plane; ``arg(0)`` is 0 by convention."""

    re: float
    im: float

    @classmethod
    def of(cls, z) -> "ComplexPoint":
        if isinstance(z, ComplexPoint):
            return z
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def argument(self) -> float:
        if self.re == 0.0 and self.im == 0.0:
            return 0.0
        return math.atan2(self.im, self.re)

    def __complex__(self) -> complex:
        return self.z


QLike = Union[QParam, float]


def as_q(q: QLike) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


def as_complex(z) -> complex:
    if isinstance(z, ComplexPoint):
        return z.z
    return complex(z)


def compensated_sum(terms: Iterable[complex]) -> complex:
    """Error-free accumulation of real and imaginary parts (``math.fsum``)."""
    terms = list(terms)
    re = math.fsum(complex(t).real for t in terms)
    im = math.fsum(complex(t).imag for t in terms)
    return complex(re, im)


def _wrap(value, like):
    """Return a Python scalar when the input was scalar."""
    if np.ndim(like) == 0:
        value = np.asarray(value).item()
    return value


def qpoch_finite(a, q: QLike, n: int):
    """``(a; q)_n``: the exact product of ``n`` factors ``1 - a q^l``."""
    q = as_q(q).q
    if n < 0:
        raise DomainError("n must be nonnegative")
    arr = np.asarray(a)
    out = np.ones_like(arr, dtype=np.result_type(arr, float))
    ql = 1.0
    for _ in range(n):
        out = out * (1.0 - arr * ql)
        ql *= q
    return _wrap(out, a)


def qpoch_qpow(s, q: QLike, n: int):
    """``(q^s; q)_n`` for real ``s``, with each factor computed as ``-expm1``.

    This keeps full relative accuracy as ``q -> 1`` and gives an exact zero
    when ``s + l == 0`` for some ``0 <= l < n``.
    """
    lq = as_q(q).log_q
    s = np.asarray(s, dtype=float)
    out = np.ones_like(s)
    for l in range(n):
        out = out * -np.expm1((s + l) * lq)
    return _wrap(out, s)


def _head_length(absa: np.ndarray, log_q: float) -> np.ndarray:
    big = absa >= _HEAD_RADIUS
    raw = np.log(np.where(big, absa, _HEAD_RADIUS) / _HEAD_RADIUS) / -log_q
    return np.where(big, np.floor(raw).astype(np.int64) + 1, 0)


def _log_tail(b: np.ndarray, qp: QParam, policy: TruncationPolicy) -> np.ndarray:
    """``log (b; q)_inf`` for ``|b| < 1/2`` by the logarithmic power series."""
    total = np.zeros_like(b, dtype=complex)
    comp = np.zeros_like(total)
    power = np.ones_like(total)
    absb = np.abs(b)
    if not np.any(absb > 0):
        return total
    for n in range(1, policy.max_terms + 1):
        power = power * b
        term = -power / (n * -math.expm1(n * qp.log_q))
        # Kahan step
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if np.max(np.abs(term)) < 0.05 * policy.rel_tol:
            return total
    raise TruncationExceeded("log-series tail of (a;q)_inf did not converge")


def log_qpoch_infinite(a, q: QLike, policy: TruncationPolicy | None = None):
    """Complex logarithm of ``(a; q)_inf`` (``-inf`` real part at a zero).

    The imaginary part is a sum of principal arguments, so only ``exp`` of the
    result is meaningful; the real part is ``log |(a; q)_inf|``.
    """
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    arr = np.asarray(a, dtype=complex)
    absa = np.abs(arr)
    L = _head_length(absa, qp.log_q)
    lmax = int(L.max()) if L.size else 0
    if lmax > policy.max_terms:
        raise TruncationExceeded(
            f"(a;q)_inf needs {lmax} direct factors (> max_terms={policy.max_terms})"
        )
    head = np.zeros_like(arr)
    ql = 1.0
    with np.errstate(divide="ignore"):
        for l in range(lmax):
            factor = 1.0 - arr * ql
            head = head + np.where(l < L, np.log(np.where(l < L, factor, 1.0)), 0.0)
            ql *= qp.q
    b = arr * np.exp(L * qp.log_q)
    out = head + _log_tail(b, qp, policy)
    return _wrap(out, a)


def qpoch_infinite(a, q: QLike, policy: TruncationPolicy | None = None):
    """``(a; q)_inf = prod_{l>=0} (1 - a q^l)``.

    The direct head keeps exact zeros (``a = q^{-l}``); the tail factor is
    ``exp`` of the log-series and is within ``policy.rel_tol`` of the true
    remaining product.
    """
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    arr = np.asarray(a)
    dtype = np.result_type(arr, float)
    carr = arr.astype(complex)
    absa = np.abs(carr)
    L = _head_length(absa, qp.log_q)
    lmax = int(L.max()) if L.size else 0
    if lmax > policy.max_terms:
        raise TruncationExceeded(
            f"(a;q)_inf needs {lmax} direct factors (> max_terms={policy.max_terms})"
        )
    head = np.ones_like(carr)
    ql = 1.0
    for l in range(lmax):
        head = np.where(l < L, head * (1.0 - carr * ql), head)
        ql *= qp.q
    b = carr * np.exp(L * qp.log_q)
    out = head * np.exp(_log_tail(b, qp, policy))
    if dtype != complex:
        out = out.real
    return _wrap(out, a)


def qbinomial(n: int, k: int, q: QLike) -> float:
    """Gaussian binomial coefficient ``[n, k]_q``."""
    qp = as_q(q)
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    out = 1.0
    for i in range(1, k + 1):
        out *= math.expm1((n - k + i) * qp.log_q) / math.expm1(i * qp.log_q)
    return out


def qfactorial(j: int, q: QLike) -> float:
    """``[j]_q! = (q; q)_j / (1 - q)^j``; tends to ``j!`` as ``q -> 1``."""
    qp = as_q(q)
    if j < 0:
        raise DomainError("j must be nonnegative")
    out = 1.0
    d = math.expm1(qp.log_q)
    for i in range(1, j + 1):
        out *= math.expm1(i * qp.log_q) / d
    return out


def q_exponential_E(x, q: QLike, policy: TruncationPolicy | None = None):
    """``E_q(x) = ((q - 1) x; q)_inf``, a q-analogue of ``exp(x)``."""
    qp = as_q(q)
    arg = -qp.one_minus_q * (np.asarray(x) if np.ndim(x) else x)
    return qpoch_infinite(arg, qp, policy)


def _check_terminating(a, n: int, qp: QParam, name: str):
    if a is None:
        return
    target = qp.q ** (-n)
    if abs(complex(a) - target) > 1e-8 * abs(target):
        raise DomainError(f"{name}={a!r} is not q^-{n} for the declared terminating_n")


def _hypergeometric(upper: Sequence[complex], lower: Sequence[complex], qp: QParam,
                    x: complex, policy: TruncationPolicy, terminating_n: int | None):
    """Sum ``sum_k prod (a;q)_k / prod (b;q)_k * x^k / (q;q)_k`` (r = s + 1 type).

    When ``terminating_n`` is given the first upper parameter is the exact
    ``q^{-n}`` and the sum stops at ``k = n``.
    """
    x = complex(x)
    if terminating_n is None and abs(x) >= 1.0:
        raise Divergence(f"nonterminating series needs |x| < 1, got |x|={abs(x):.3g}")
    terms = [1.0 + 0j]
    term = 1.0 + 0j
    kmax = terminating_n if terminating_n is not None else policy.max_terms
    quiet = 0
    k = 0
    while k < kmax:
        qk = qp.q ** k
        num = 1.0 + 0j
        if terminating_n is not None:
            num *= -math.expm1((k - terminating_n) * qp.log_q)
            rest = upper[1:]
        else:
            rest = upper
        for a in rest:
            num *= 1.0 - a * qk
        den = -math.expm1((k + 1) * qp.log_q)
        for b in lower:
            f = 1.0 - b * qk
            if abs(f) <= _POLE_EPS * max(1.0, abs(b * qk)):
                raise PoleError(f"lower parameter {b!r} gives a vanishing factor at k={k}")
            den *= f
        term = term * num / den * x
        terms.append(term)
        k += 1
        if terminating_n is None:
            s = abs(compensated_sum(terms))
            if abs(term) <= policy.rel_tol * s or abs(term) < policy.abs_tol:
                quiet += 1
                if quiet >= 2:
                    return compensated_sum(terms)
            else:
                quiet = 0
    if terminating_n is None:
        raise TruncationExceeded("basic hypergeometric series did not converge")
    return compensated_sum(terms)


def phi21(a, b, c, q: QLike, x, policy: TruncationPolicy | None = None,
          terminating_n: int | None = None) -> complex:
    """``2phi1(a, b; c | q; x)``.

    Pass ``terminating_n=n`` when ``a = q^{-n}``; ``a`` may then be ``None``.
    """
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    if terminating_n is not None:
        _check_terminating(a, terminating_n, qp, "a")
        upper = [None, complex(b)]
    else:
        upper = [complex(a), complex(b)]
    return _hypergeometric(upper, [complex(c)], qp, x, policy, terminating_n)


def phi32(a1, a2, a3, b1, b2, q: QLike, x, policy: TruncationPolicy | None = None,
          terminating_n: int | None = None) -> complex:
    """``3phi2(a1, a2, a3; b1, b2 | q; x)`` with the same terminating convention."""
    qp = as_q(q)
    policy = policy or DEFAULT_POLICY
    if terminating_n is not None:
        _check_terminating(a1, terminating_n, qp, "a1")
        upper = [None, complex(a2), complex(a3)]
    else:
        upper = [complex(a1), complex(a2), complex(a3)]
    return _hypergeometric(upper, [complex(b1), complex(b2)], qp, x, policy, terminating_n)
