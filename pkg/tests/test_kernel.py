import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

import oracles
from qbargmann.classical import classical_kernel
from qbargmann.cstates import normalization_N
from qbargmann.errors import PoleError
from qbargmann.kernel import (
    gram_matrix,
    kernel,
    kernel_limit_check,
    normalized_overlap,
    overlap_closed,
    overlap_series,
    sigma_terminating,
)
from qbargmann.qcore import qpoch_infinite

points = st.complex_numbers(max_magnitude=2.0)
Q_SWEEP = [1 - 2.0 ** -k for k in range(4, 17)]


def test_origin_level_zero():
    assert overlap_closed(0, 0, 0, 0.5).value == 1.0
    assert overlap_series(0, 0, 0, 0.5).value == 1.0


def test_diagonal_is_normalization():
    z = 0.6 + 0.2j
    assert_allclose(kernel(z, z, 1, 0.5), normalization_N(1, abs(z) ** 2, 0.5), rtol=1e-10)
    assert_allclose(overlap_closed(0.9, 0.9, 2, 0.5).value, normalization_N(2, 0.81, 0.5), rtol=1e-10)


def test_level_zero_is_q_exponential():
    z, w, q = 1.0, 0.5j, 0.5
    ref = qpoch_infinite((q - 1) * z * np.conj(w), q)
    assert_allclose(overlap_closed(z, w, 0, q).value, ref, rtol=1e-14)
    assert_allclose(overlap_series(z, w, 0, q).value, ref, rtol=1e-12)


def test_frozen_kernel_value():
    z, w = 1 + 0.5j, 0.7 - 0.2j
    ref = 0.073506141255809318363 - 0.12665218306912870981j
    assert abs(overlap_closed(z, w, 3, 0.4).value - ref) < 1e-14
    assert abs(overlap_series(z, w, 3, 0.4).value - ref) < 1e-9


@settings(max_examples=40, deadline=None)
@given(q=st.floats(0.15, 0.9), m=st.integers(0, 6), z=points, w=points)
def test_dual_path_agreement(q, m, z, w):
    a = overlap_closed(z, w, m, q)
    b = overlap_series(z, w, m, q)
    assert abs(a.value - b.value) <= 1e-9 * (1 + abs(a.value))
    assert a.path == "closed"
    assert b.path == "series"


@settings(max_examples=15, deadline=None)
@given(q=st.floats(0.2, 0.8), m=st.integers(0, 3), z=points, w=points)
def test_closed_form_matches_mpmath_series(q, m, z, w):
    ref = oracles.c(oracles.kernel_series(z, w, m, q, terms=120))
    assert abs(kernel(z, w, m, q) - ref) <= 1e-11 * (1 + abs(ref))


def test_series_error_estimate_is_honest():
    for z, w, m, q in [(1.5 + 1j, -1.2, 2, 0.8), (0.3j, 1.9, 4, 0.3)]:
        ref = oracles.c(oracles.kernel_series(z, w, m, q, terms=160))
        kv = overlap_series(z, w, m, q)
        assert abs(kv.value - ref) <= max(kv.est_error, 1e-15)


def test_sigma_level_zero_is_one():
    s, size = sigma_terminating(0.4 + 0.1j, -0.3j, 0, 0.5)
    assert s == 1 and size == 1


def test_closed_path_at_origin_and_tiny_points():
    for z, w in [(0.7, 0.0), (0.0, -0.3j), (1.0, 5e-324), (1e-200j, 0.8)]:
        kv = overlap_closed(z, w, 2, 0.5)
        assert kv.path == "closed"
        assert_allclose(kv.value, overlap_series(z, w, 2, 0.5).value, rtol=1e-12)


def test_sigma_raises_pole_error_and_closed_path_reroutes():
    # (q - 1) z conj(w) = 1 at q = 0.5, z = 1, w = -2
    with pytest.raises(PoleError):
        sigma_terminating(1.0, -2.0, 2, 0.5)
    kv = overlap_closed(1.0, -2.0, 2, 0.5)
    assert kv.path == "series"
    # the product's zero cancels the pole of the sum; the series value is finite
    ref = oracles.c(oracles.kernel_series(1.0, -2.0, 2, 0.5, terms=120))
    assert abs(kv.value - ref) < 1e-12


@settings(max_examples=40, deadline=None)
@given(q=st.floats(0.15, 0.9), m=st.integers(0, 5), z=points, w=points)
def test_hermitian_symmetry(q, m, z, w):
    a = kernel(z, w, m, q)
    b = kernel(w, z, m, q)
    assert abs(a - np.conj(b)) <= 1e-11 * (1 + abs(a))


@settings(max_examples=40, deadline=None)
@given(q=st.floats(0.15, 0.9), m=st.integers(0, 5), z=points, w=points)
def test_normalized_overlap_bounded(q, m, z, w):
    assert abs(normalized_overlap(z, w, m, q)) <= 1 + 1e-9
    assert_allclose(normalized_overlap(z, z, m, q), 1.0, rtol=1e-12)


def test_classical_kernel_targets():
    assert kernel_limit_check(0, 0, 0, Q_SWEEP) == [(q, 0.0) for q in Q_SWEEP]
    err = kernel_limit_check(0.5, 0.2j, 1, [1 - 1e-5])[0][1]
    assert err < 1e-3


@pytest.mark.parametrize("m", [0, 1, 2])
def test_kernel_limit_monotone(m):
    errs = [e for _, e in kernel_limit_check(0.5 + 0.3j, -0.4 + 0.6j, m, Q_SWEEP)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert abs(kernel(0.5 + 0.3j, -0.4 + 0.6j, m, 1 - 1e-5)
               - classical_kernel(0.5 + 0.3j, -0.4 + 0.6j, m)) < 1e-3


def test_gram_matrix_positive_semidefinite():
    rng = np.random.default_rng(7)
    for m in range(4):
        pts = 2 * (rng.random(5) - 0.5) + 2j * (rng.random(5) - 0.5)
        G = gram_matrix(pts, m, 0.5)
        assert_allclose(G, G.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(G).min() >= -1e-8 * np.trace(G).real
