"""Composite Gauss-Legendre rules for the real line and for radial complex integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .cstates import log_measure_density_mu
from .errors import QSeriesError
from .qcore import QLike, as_q

__all__ = [
    "QuadratureRule",
    "realline_cut",
    "build_realline_rule",
    "build_piecewise_rule",
    "build_radial_rule",
    "integrate_mu",
]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights.

    ``kind == "RealLine"``: ``sum(w * f(nodes))`` approximates ``int f dxi``.
    ``kind == "RadialComplex"``: nodes are radii and the weights already contain
    ``2 r`` times the ``d mu_q`` density, so ``sum(w * mean_theta F(r e^{i theta}))``
    approximates ``int F d mu_q``; ``angular`` is the number of equispaced angles
    used for the mean (exact for trigonometric polynomials of lower degree).
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    domain_cut: float
    panels: int
    angular: int = 0

    def __post_init__(self):
        for name in ("nodes", "weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def integrate(self, values) -> complex:
        return np.tensordot(np.asarray(values), self.weights, axes=([-1], [0]))


def _gl_panels(breaks: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + half * (x + 1.0)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def realline_cut(q: QLike, tol: float, max_degree_hint: int = 0) -> float:
    """Truncation radius for integrands bounded by ``|phi_j| ~ exp(j kappa |xi| - xi^2/2)``.

    Also covers the transform kernel, which decays like ``exp(-xi^2/4)``.
    """
    kappa = as_q(q).kappa
    L = math.log(1.0 / tol)
    jk = max_degree_hint * kappa
    return max(2.0 * math.sqrt(L), jk + math.sqrt(jk * jk + 2.0 * L)) + 4.0


def build_piecewise_rule(breaks: Sequence[float], order: int = 20,
                         max_width: float = 0.5) -> QuadratureRule:
    """Gauss-Legendre rule on ``[breaks[0], breaks[-1]]`` with a panel edge at every break."""
    breaks = np.asarray(breaks, dtype=float)
    if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
        raise ValueError("breaks must be strictly increasing with at least two entries")
    edges = [breaks[0]]
    for a, b in zip(breaks[:-1], breaks[1:]):
        n = max(1, int(math.ceil((b - a) / max_width)))
        edges.extend(np.linspace(a, b, n + 1)[1:])
    edges = np.array(edges)
    nodes, weights = _gl_panels(edges, order)
    cut = float(max(abs(breaks[0]), abs(breaks[-1])))
    return QuadratureRule("RealLine", nodes, weights, cut, len(edges) - 1)


def build_realline_rule(q: QLike, tol: float = 1e-14, max_degree_hint: int = 0,
                        order: int = 20, max_width: float = 0.5,
                        breakpoints: Sequence[float] = ()) -> QuadratureRule:
    """Symmetric composite Gauss-Legendre rule on ``[-Xi, Xi]``.

    Extra ``breakpoints`` inside the interval become panel edges (for piecewise
    signals).  The rule checks itself against ``int exp(-xi^2) = sqrt(pi)``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    cut = realline_cut(q, tol, max_degree_hint)
    inner = sorted({float(b) for b in breakpoints if -cut < b < cut})
    half = np.array([0.0] + [b for b in inner if b > 0] + [cut])
    right = []
    for a, b in zip(half[:-1], half[1:]):
        n = max(1, int(math.ceil((b - a) / max_width)))
        right.extend(np.linspace(a, b, n + 1)[1:])
    neg = sorted({-b for b in inner if b < 0} - set(half.tolist()))
    right = sorted(set(right) | set(neg))
    edges = np.array([-x for x in reversed(right)] + [0.0] + right)
    nodes, weights = _gl_panels(edges, order)
    rule = QuadratureRule("RealLine", nodes, weights, cut, len(edges) - 1)
    err = abs(rule.integrate(np.exp(-nodes ** 2)) - math.sqrt(math.pi))
    if err > 1e-12:
        raise QSeriesError(f"real-line rule self-test failed (error {err:.2e})")
    return rule


def build_radial_rule(q: QLike, m: int, max_j: int, tol: float = 1e-14,
                      order: int = 30, ratio: float = 1.5) -> QuadratureRule:
    """Radial rule for ``int F conj(G) d mu_q`` with ``F``, ``G`` built from ``h_j^{m,q}``, ``j <= max_j``.

    The density decays only log-normally, so panels are geometric beyond
    ``r = 1`` and the cut ``R`` is doubled until ``r^(2(m + max_j) + 1)`` times
    the density is below ``tol`` relative to the integral accumulated so far.
    """
    qp = as_q(q)
    power = 2 * (m + max_j) + 1

    def log_integrand(r):
        r = np.asarray(r, dtype=float)
        return power * np.log(r) + log_measure_density_mu(r * r, qp)

    def edges_to(R):
        n = max(1, int(math.ceil(math.log(R) / math.log(ratio))))
        return np.concatenate([[0.0, 0.5], np.geomspace(1.0, R, n + 1)])

    R = 2.0
    while True:
        nodes, weights = _gl_panels(edges_to(R), order)
        est = float(np.sum(weights * 2.0 * np.exp(log_integrand(nodes))))
        if log_integrand(R) < math.log(tol) + math.log(max(est, 1e-300)) or R > 1e12:
            break
        R *= 2.0
    edges = edges_to(R)
    nodes, weights = _gl_panels(edges, order)
    weights = weights * 2.0 * nodes * np.exp(log_measure_density_mu(nodes * nodes, qp))
    angular = 2 * (max_j + m) + 4
    return QuadratureRule("RadialComplex", nodes, weights, R, len(edges) - 1, angular)


def integrate_mu(func: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule) -> complex:
    """``int_C func(z) d mu_q(z)`` on a radial rule; ``func`` takes an array of ``z``."""
    if rule.kind != "RadialComplex":
        raise ValueError("integrate_mu needs a RadialComplex rule")
    theta = 2 * math.pi * np.arange(rule.angular) / rule.angular
    z = rule.nodes[:, None] * np.exp(1j * theta)[None, :]
    vals = np.asarray(func(z)).mean(axis=1)
    return complex(np.sum(rule.weights * vals))
