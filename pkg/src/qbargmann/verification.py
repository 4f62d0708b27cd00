"""Full numerical verification suite: identities, orthonormality, kernel and transform checks.

Every check is deterministic in the seed, so two runs with the same seed give
byte-identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import identities
from .classical import classical_kernel, true_polyanalytic_kernel
from .cstates import coeff_h, coherent_state_eval, eigenfunction_table, normalization_N
from .kernel import gram_matrix, kernel, overlap_closed, overlap_series
from .quadrature import build_radial_rule, build_realline_rule, integrate_mu
from .transform import bargmann_transform, builtin_signal, transform_kernel

__all__ = ["CheckResult", "run_suite", "format_report"]

Q_VALUES = (0.3, 0.5, 0.8)
Q_NEAR_ONE = 1.0 - 1e-5


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    tol: float
    samples: int
    seed: int
    passed: bool

    def row(self) -> list:
        return [self.name, f"{self.max_residual:.6e}", f"{self.tol:.1e}", self.samples,
                self.seed, "pass" if self.passed else "FAIL"]


def _disc(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * math.pi * rng.random(n))


def _result(name, worst, tol, samples, seed) -> CheckResult:
    return CheckResult(name, float(worst), tol, samples, seed, bool(worst <= tol))


def check_orthonormality(seed: int) -> CheckResult:
    worst = 0.0
    for q in Q_VALUES:
        rule = build_realline_rule(q, 1e-14, 10)
        P = eigenfunction_table(10, rule.nodes, q)
        worst = max(worst, float(np.max(np.abs((P * rule.weights) @ P.T - np.eye(11)))))
    return _result("phi_orthonormality", worst, 1e-8, 3 * 121, seed)


def check_kernel_dual_path(seed: int, pairs: int = 25) -> CheckResult:
    rng = np.random.default_rng([seed, 1])
    worst = 0.0
    for q in Q_VALUES:
        for m in range(6):
            zs, ws = _disc(rng, pairs, 2.0), _disc(rng, pairs, 2.0)
            for z, w in zip(zs, ws):
                a = overlap_closed(z, w, m, q).value
                b = overlap_series(z, w, m, q).value
                worst = max(worst, abs(a - b) / (1 + abs(a)))
    return _result("kernel_dual_path", worst, 1e-9, 18 * pairs, seed)


def check_kernel_diagonal(seed: int, pairs: int = 25) -> CheckResult:
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    for q in Q_VALUES:
        for m in range(6):
            for z in _disc(rng, pairs, 2.0):
                n = normalization_N(m, abs(z) ** 2, q)
                worst = max(worst, abs(kernel(z, z, m, q) - n) / (1 + n))
    return _result("kernel_diagonal_is_N", worst, 1e-10, 18 * pairs, seed)


def check_state_norm(seed: int) -> CheckResult:
    rng = np.random.default_rng([seed, 3])
    rule = build_realline_rule(0.5, 1e-14, 40)
    worst = 0.0
    for m in range(3):
        for z in _disc(rng, 9, 1.5):
            psi = coherent_state_eval(z, m, 0.5, rule.nodes)
            worst = max(worst, abs(math.sqrt(rule.integrate(np.abs(psi) ** 2)) - 1.0))
    return _result("coherent_state_norm", worst, 1e-7, 27, seed)


def check_theorem_closed_form(seed: int, samples: int = 50) -> CheckResult:
    rng = np.random.default_rng([seed, 4])
    worst = 0.0
    for _ in range(samples):
        q = float(rng.uniform(0.2, 0.9))
        m = int(rng.integers(0, 4))
        z = complex(_disc(rng, 1, 1.5)[0])
        xi = float(rng.uniform(-4, 4))
        a = transform_kernel(z, xi, m, q)
        series = math.sqrt(normalization_N(m, abs(z) ** 2, q)) * coherent_state_eval(z, m, q, xi)
        worst = max(worst, abs(a - np.conj(series)))
    return _result("transform_kernel_vs_series", worst, 1e-9, samples, seed)


def check_basis_image(seed: int) -> CheckResult:
    rng = np.random.default_rng([seed, 5])
    zs = _disc(rng, 9, 1.5)
    worst = 0.0
    for q in Q_VALUES:
        for j in range(9):
            f = builtin_signal(f"hermite_q:{j}", q)
            for m in range(4):
                b = bargmann_transform(f, zs, m, q)
                worst = max(worst, float(np.max(np.abs(b - coeff_h(j, m, zs, q)))))
    return _result("basis_image", worst, 1e-7, 3 * 9 * 4 * 9, seed)


def check_measure_orthogonality(seed: int) -> CheckResult:
    worst = 0.0
    q = 0.5
    for m in range(3):
        rule = build_radial_rule(q, m, 6)
        for j in range(7):
            for k in range(7):
                v = integrate_mu(lambda z: coeff_h(j, m, z, q) * np.conj(coeff_h(k, m, z, q)), rule)
                worst = max(worst, abs(v - (j == k)))
    return _result("measure_orthogonality", worst, 1e-6, 3 * 49, seed)


def check_classical_limits(seed: int) -> CheckResult:
    rng = np.random.default_rng([seed, 6])
    worst = 0.0
    for m in range(3):
        for z, w in zip(_disc(rng, 5, 1.2), _disc(rng, 5, 1.2)):
            xi = float(rng.uniform(-2, 2))
            worst = max(worst, abs(kernel(z, w, m, Q_NEAR_ONE) - classical_kernel(z, w, m)),
                        abs(transform_kernel(z, xi, m, Q_NEAR_ONE) - true_polyanalytic_kernel(z, xi, m)))
    return _result("classical_limits", worst, 1e-3, 30, seed)


def check_positivity(seed: int, sets: int = 20) -> CheckResult:
    rng = np.random.default_rng([seed, 7])
    worst = 0.0
    for i in range(sets):
        q = Q_VALUES[i % 3]
        m = i % 4
        G = gram_matrix(_disc(rng, 4, 2.0), m, q)
        ev = np.linalg.eigvalsh(G)
        worst = max(worst, max(0.0, -ev.min()) / np.trace(G).real)
    return _result("kernel_positivity", worst, 1e-8, sets, seed)


def run_suite(seed: int = 42, inject_corruption: bool = False) -> list[CheckResult]:
    """Run every check.  ``inject_corruption`` swaps the q-binomial entry for
    its corrupted twin, which must make the suite fail."""
    results = []
    for name, case in identities.REGISTRY.items():
        if inject_corruption and name == "q_binomial_theorem":
            case = identities.CANARY
        worst = 0.0
        for s in (seed, seed + 1, seed + 2):
            worst = max(worst, identities.check_case(case, 100, s).max_residual)
        results.append(_result(f"identity:{case.name}", worst, case.tol, 300, seed))
    canary = identities.check_case(identities.CANARY, 100, seed)
    results.append(CheckResult("canary_detected", canary.max_residual, canary.tol, 100, seed,
                               not canary.passed))
    for fn in (check_orthonormality, check_kernel_dual_path, check_kernel_diagonal,
               check_state_norm, check_theorem_closed_form, check_basis_image,
               check_measure_orthogonality, check_classical_limits, check_positivity):
        results.append(fn(seed))
    return results


REPORT_COLUMNS = ["check", "max_residual", "tol", "samples", "seed", "status"]


def format_report(results: list[CheckResult]) -> list[list]:
    return [r.row() for r in results]
