import cmath

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hst_cellfree.ici import ici_coefficient, ici_kernel, ici_row, ici_tensor, normalized_dfo


def mp_kernel(x, M):
    """Eq.-free reference: the DFT of a rotated tone, summed in 40-digit arithmetic."""
    mp.mp.dps = 40
    x = mp.mpf(x)
    total = mp.fsum(mp.e ** (2j * mp.pi * x * n / M) for n in range(M)) / M
    return complex(total)


@pytest.mark.parametrize("w,cos,expected", [(0.27778, 0.0, 0.0), (0.27778, 1.0, 0.27778),
                                            (0.27778, 0.6, 0.166668)])
def test_normalized_dfo(w, cos, expected):
    assert normalized_dfo(w, cos) == pytest.approx(expected, abs=1e-15)


def test_no_offset_diagonal_is_exactly_one():
    assert ici_coefficient(0.0, 5, 5, 64) == 1 + 0j


def test_no_offset_off_diagonal_vanishes():
    for m in range(1, 9):
        if m != 3:
            assert abs(ici_coefficient(0.0, m, 3, 8)) < 1e-15


def test_hand_value_eps_0p1():
    # frozen from a 40-digit evaluation of the Dirichlet ratio and phase
    c = ici_coefficient(0.1, 7, 7, 64)
    assert abs(c) == pytest.approx(0.98363559331234156, rel=1e-13)
    assert cmath.phase(c) == pytest.approx(0.30925052683774527, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.integers(1, 32), st.integers(0, 31), st.integers(0, 31))
def test_matches_dft_of_rotated_tone(eps, M, m0, s0):
    m, s = m0 % M + 1, s0 % M + 1
    assert abs(ici_coefficient(eps, m, s, M) - mp_kernel(m + eps - s, M)) < 1e-12


def test_identity_row():
    row = ici_row(0.0, 3, 8)
    expected = np.zeros(8)
    expected[2] = 1
    np.testing.assert_allclose(row.coeffs, expected, atol=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(-0.45, 0.45), st.integers(1, 64))
def test_power_sum_unit_m64(eps, s):
    assert abs(ici_row(eps, s, 64).power_sum() - 1) < 1e-10


def test_rows_are_cyclic_shifts():
    a = np.abs(ici_row(0.2778, 1, 64).coeffs)
    b = np.abs(ici_row(0.2778, 33, 64).coeffs)
    np.testing.assert_allclose(b, np.roll(a, 32), atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.5, 0.5), st.integers(1, 40), st.integers(0, 39), st.integers(0, 39))
def test_magnitude_even(eps, M, m0, s0):
    m, s = m0 % M + 1, s0 % M + 1
    assert abs(ici_coefficient(eps, m, s, M)) == pytest.approx(
        abs(ici_coefficient(-eps, s, m, M)), abs=1e-13)


@pytest.mark.parametrize("M", [1, 2, 3, 8, 63, 64])
@pytest.mark.parametrize("t", [-1, 0, 1])
def test_continuous_at_singular_points(M, t):
    x0 = t * M
    limit = ici_kernel(x0, M)
    assert abs(limit) == pytest.approx(1.0, abs=1e-15)
    for dx in (1e-9, -1e-9):
        assert abs(ici_kernel(x0 + dx, M) - limit) < 1e-6


def test_diagonal_magnitude_monotone():
    eps = np.linspace(0, 0.5, 201)
    mag = np.abs(ici_kernel(eps, 64))
    assert np.all(np.diff(mag) <= 0)
    np.testing.assert_allclose(mag, np.abs(ici_kernel(-eps, 64)), atol=1e-15)


def test_tensor_layout():
    eps = np.array([[0.1, -0.3]])
    T = ici_tensor(eps, 8)
    assert T.shape == (1, 2, 8, 8)
    assert T[0, 1, 4, 2] == pytest.approx(ici_coefficient(-0.3, 5, 3, 8), abs=1e-15)


def test_index_validation():
    with pytest.raises(IndexError):
        ici_coefficient(0.1, 0, 1, 8)
    with pytest.raises(IndexError):
        ici_row(0.1, 9, 8)
