import time

import pytest

from qbargmann.errors import UnknownIdentity
from qbargmann.identities import AUXILIARY, CANARY, REGISTRY, check, check_case, names, residual

EXPECTED = [
    "q_binomial_theorem", "pochhammer_ratio", "pochhammer_shift", "pochhammer_split",
    "q_chu_vandermonde", "finite_heine", "s_finite_cancellation", "qlaguerre_phi21",
    "qinv_hermite_generating", "alsalam_chihara_big_hermite", "gaussian_binomial_negative",
    "sigma_classical_limit",
]


def test_registry_has_twelve_named_entries():
    assert names() == EXPECTED
    assert all(case.domain for case in REGISTRY.values())


@pytest.mark.parametrize("name", EXPECTED)
def test_identity_passes(name):
    rep = check(name, 100, 42)
    assert rep.samples == 100 and rep.seed == 42
    assert rep.max_residual < rep.tol <= 1e-10, rep.worst_params


def test_reference_examples():
    assert check("q_binomial_theorem", 100, 42).max_residual < 1e-11
    assert check("finite_heine", 100, 42).max_residual < 1e-10
    assert check("laguerre_negative_superscript", 100, 42).max_residual < 1e-11


def test_auxiliary_not_in_default_suite():
    assert "laguerre_negative_superscript" in AUXILIARY
    assert "laguerre_negative_superscript" not in REGISTRY


def test_canary_fails():
    rep = check("corrupted_q_binomial", 100, 42)
    assert not rep.passed
    assert rep.max_residual > 1e-3


def test_unknown_identity():
    with pytest.raises(UnknownIdentity):
        check("no_such_identity")
    assert issubclass(UnknownIdentity, KeyError)


def test_deterministic_in_seed():
    a = check("finite_heine", 50, 7)
    b = check("finite_heine", 50, 7)
    c = check("finite_heine", 50, 8)
    assert a == b
    assert a.worst_params != c.worst_params


def test_residual_is_relative():
    assert residual(1.0, 1.0) == 0.0
    assert residual(1e10, 1e10 * (1 + 1e-12)) < 2e-12
    assert residual(0.0, 1e-20) < 1e-19


def test_resampling_is_reported():
    rep = check("q_chu_vandermonde", 100, 42)
    assert rep.resampled > 0


def test_registry_runtime():
    t0 = time.perf_counter()
    for case in REGISTRY.values():
        for seed in (42, 43, 44):
            check_case(case, 100, seed)
    check_case(CANARY, 100, 42)
    assert time.perf_counter() - t0 < 20
