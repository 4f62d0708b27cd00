"""The eleven acceptance criteria, each at its stated tolerance and sample size.

Every test records a one-line verdict (printed in the terminal summary and to
stdout) before asserting, so a failing criterion is reported rather than hidden.
"""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from qbargmann.classical import bargmann_kernel, classical_kernel, true_polyanalytic_kernel
from qbargmann.cli import main
from qbargmann.cstates import (
    coeff_h,
    coherent_state_eval,
    eigenfunction_table,
    normalization_N,
)
from qbargmann.identities import CANARY, REGISTRY, check_case
from qbargmann.kernel import gram_matrix, kernel, kernel_limit_check, overlap_closed, overlap_series
from qbargmann.quadrature import build_radial_rule, build_realline_rule, integrate_mu
from qbargmann.transform import (
    bargmann_transform,
    builtin_signal,
    combine,
    level_zero_kernel,
    isometry_defect,
    kernel_pointwise_limit_check,
    transform_kernel,
)

Q_SET = (0.3, 0.5, 0.8)
Q_NEAR_ONE = 1 - 1e-5


def verdict(number, title, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def disc(rng, n, radius):
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * math.pi * rng.random(n))


def test_criterion_01_kernel_dual_path():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for q in Q_SET:
        for m in range(6):
            for z, w in zip(disc(rng, 25, 2.0), disc(rng, 25, 2.0)):
                a = overlap_closed(z, w, m, q)
                b = overlap_series(z, w, m, q)
                worst = max(worst, abs(a.value - b.value) / (1 + abs(a.value)))
    dt = time.perf_counter() - t0
    verdict(1, "closed vs series kernel", worst < 1e-9 and dt < 10,
            f"max rel diff {worst:.2e} < 1e-9, {dt:.1f}s < 10s")


def test_criterion_02_normalization_consistency():
    rng = np.random.default_rng(102)
    worst_diag = 0.0
    for q in Q_SET:
        for m in range(6):
            for z in disc(rng, 25, 2.0):
                n = normalization_N(m, abs(z) ** 2, q)
                worst_diag = max(worst_diag, abs(kernel(z, z, m, q) - n) / (1 + n))
    rule = build_realline_rule(0.5, 1e-14, 40)
    worst_norm = 0.0
    for m in range(3):
        for z in disc(rng, 9, 1.5):
            psi = coherent_state_eval(z, m, 0.5, rule.nodes)
            worst_norm = max(worst_norm, abs(math.sqrt(rule.integrate(np.abs(psi) ** 2)) - 1))
    verdict(2, "K(z,z) = N and unit-norm states", worst_diag < 1e-10 and worst_norm < 1e-7,
            f"diag {worst_diag:.2e} < 1e-10, norm {worst_norm:.2e} < 1e-7")


def test_criterion_03_eigenfunction_orthonormality():
    t0 = time.perf_counter()
    worst = 0.0
    for q in Q_SET:
        rule = build_realline_rule(q, 1e-14, 10)
        P = eigenfunction_table(10, rule.nodes, q)
        worst = max(worst, float(np.max(np.abs((P * rule.weights) @ P.T - np.eye(11)))))
    dt = time.perf_counter() - t0
    verdict(3, "phi_j orthonormal, j,k <= 10", worst < 1e-8 and dt < 30,
            f"max defect {worst:.2e} < 1e-8, {dt:.2f}s < 30s")


def test_criterion_04_kernel_closed_form_vs_series():
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(50):
        q = float(rng.uniform(0.2, 0.9))
        m = int(rng.integers(0, 4))
        z = complex(disc(rng, 1, 1.5)[0])
        xi = float(rng.uniform(-4, 4))
        series = math.sqrt(normalization_N(m, abs(z) ** 2, q)) * coherent_state_eval(z, m, q, xi)
        worst = max(worst, abs(transform_kernel(z, xi, m, q) - np.conj(series)))
    verdict(4, "transform kernel = conj(sqrt(N) Psi)", worst < 1e-9, f"max diff {worst:.2e} < 1e-9")


def test_criterion_05_basis_image_and_isometry():
    rng = np.random.default_rng(105)
    zs = disc(rng, 9, 1.5)
    worst_img = 0.0
    for q in Q_SET:
        for j in range(9):
            f = builtin_signal(f"hermite_q:{j}", q)
            for m in range(4):
                worst_img = max(worst_img, float(np.max(np.abs(bargmann_transform(f, zs, m, q)
                                                               - coeff_h(j, m, zs, q)))))
    worst_iso = 0.0
    for _ in range(10):
        q = float(rng.choice(Q_SET))
        m = int(rng.integers(0, 4))

        def combo():
            j1, j2 = rng.choice(9, size=2, replace=False)
            c1, c2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            return combine([(c1, builtin_signal(f"hermite_q:{j1}", q)),
                            (c2, builtin_signal(f"hermite_q:{j2}", q))])

        worst_iso = max(worst_iso, isometry_defect(combo(), combo(), m, q))
    verdict(5, "basis image and isometry", worst_img < 1e-7 and worst_iso < 1e-7,
            f"image {worst_img:.2e} < 1e-7, isometry {worst_iso:.2e} < 1e-7")


def test_criterion_06_classical_limits():
    rng = np.random.default_rng(106)
    sweep = [1 - 2.0 ** -k for k in range(4, 15)]
    worst, monotone = 0.0, True
    for m in range(3):
        for z, w in zip(disc(rng, 5, 1.2), disc(rng, 5, 1.2)):
            xi = float(rng.uniform(-2, 2))
            worst = max(worst, abs(kernel(z, w, m, Q_NEAR_ONE) - classical_kernel(z, w, m)),
                        abs(transform_kernel(z, xi, m, Q_NEAR_ONE) - true_polyanalytic_kernel(z, xi, m)))
            for table in (kernel_limit_check(z, w, m, sweep),
                          kernel_pointwise_limit_check(z, xi, m, sweep)):
                errs = [e for _, e in table]
                monotone &= all(b < a for a, b in zip(errs, errs[1:]))
    verdict(6, "q -> 1 limits of both kernels", worst < 1e-3 and monotone,
            f"max error {worst:.2e} < 1e-3 at q=1-1e-5, monotone k=4..14: {monotone}")


def test_criterion_07_level_zero_product_form():
    rng = np.random.default_rng(107)
    worst_prod, worst_lim = 0.0, 0.0
    for _ in range(20):
        q = float(rng.uniform(0.2, 0.9))
        z = complex(disc(rng, 1, 1.5)[0])
        xi = float(rng.uniform(-3, 3))
        a = transform_kernel(z, xi, 0, q)
        worst_prod = max(worst_prod, abs(a - level_zero_kernel(z, xi, q)) / (1 + abs(a)))
        worst_lim = max(worst_lim, abs(level_zero_kernel(z, xi, Q_NEAR_ONE) - bargmann_kernel(z, xi)))
    verdict(7, "level-zero product kernel", worst_prod < 1e-12 and worst_lim < 1e-3,
            f"product {worst_prod:.2e} < 1e-12, Bargmann limit {worst_lim:.2e} < 1e-3")


def test_criterion_08_identity_registry():
    t0 = time.perf_counter()
    worst, failing = 0.0, []
    for name, case in REGISTRY.items():
        for seed in (42, 43, 44):
            rep = check_case(case, 100, seed)
            worst = max(worst, rep.max_residual)
            if rep.max_residual >= 1e-10:
                failing.append(name)
    canary = check_case(CANARY, 100, 42)
    dt = time.perf_counter() - t0
    ok = len(REGISTRY) == 12 and not failing and not canary.passed and dt < 20
    verdict(8, "twelve identities and canary", ok,
            f"max residual {worst:.2e} < 1e-10, canary residual {canary.max_residual:.2e}, "
            f"{dt:.1f}s < 20s" + (f", failing: {sorted(set(failing))}" if failing else ""))


def test_criterion_09_measure_orthogonality():
    q = 0.5
    worst = 0.0
    for m in range(3):
        rule = build_radial_rule(q, m, 6)
        for j in range(7):
            for k in range(7):
                v = integrate_mu(lambda z: coeff_h(j, m, z, q) * np.conj(coeff_h(k, m, z, q)), rule)
                worst = max(worst, abs(v - (j == k)))
    verdict(9, "coefficients orthonormal under d mu_q", worst < 1e-6, f"max defect {worst:.2e} < 1e-6")


def test_criterion_10_kernel_positivity():
    rng = np.random.default_rng(110)
    worst = 0.0
    for i in range(20):
        q = float(rng.uniform(0.2, 0.9))
        m = int(rng.integers(0, 6))
        G = gram_matrix(disc(rng, 4, 2.0), m, q)
        worst = max(worst, max(0.0, -float(np.linalg.eigvalsh(G).min())) / float(np.trace(G).real))
    verdict(10, "4x4 Gram matrices positive", worst <= 1e-8,
            f"worst -lambda_min/trace {worst:.2e} <= 1e-8")


def test_criterion_11_cli_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    t0 = time.perf_counter()
    code_a = main(["verify", "--seed", "42", "--out", str(a)])
    dt = time.perf_counter() - t0
    code_b = main(["verify", "--seed", "42", "--out", str(b)])
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    verdict(11, "verify report byte-identical", same and code_a == code_b == 0 and dt < 120,
            f"identical={same}, exit codes {code_a}/{code_b}, {dt:.1f}s < 120s")
