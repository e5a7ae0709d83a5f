import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect, j0_series, y0_series
from phaserec import DomainError, bessel_j0, bessel_y0, hankel1_0
from phaserec.special_functions import SWITCHOVER


def test_oracle_reference_values():
    # the oracle itself against the classical tabulated values
    assert j0_series(1.0) == pytest.approx(0.7651976865579666, abs=1e-15)
    assert y0_series(1.0) == pytest.approx(0.08825696421567696, abs=1e-15)


def test_j0_examples():
    assert bessel_j0(0.0) == 1.0
    assert bessel_j0(1.0) == pytest.approx(0.76519769, abs=1e-8)
    zero = bisect(j0_series, 2.0, 3.0)
    assert zero == pytest.approx(2.40482556, abs=1e-8)
    assert abs(bessel_j0(2.40482556)) < 1e-7


def test_y0_examples():
    assert bessel_y0(1.0) == pytest.approx(0.08825696, abs=1e-8)
    assert bessel_y0(10.0) == pytest.approx(0.05567117, abs=1e-8)
    assert bessel_y0(10.0) == pytest.approx(y0_series(10.0), abs=1e-10)


def test_hankel_examples():
    h = hankel1_0(1.0)
    assert h.real == pytest.approx(0.76519769, abs=1e-8)
    assert h.imag == pytest.approx(0.08825696, abs=1e-8)
    h = hankel1_0(2.40482556)
    assert abs(h.real) < 1e-7
    assert h.imag == pytest.approx(y0_series(2.40482556), abs=1e-8)
    assert h.imag == pytest.approx(0.50992438, abs=1e-8)


@pytest.mark.parametrize("fn", [bessel_y0, hankel1_0])
@pytest.mark.parametrize("x", [0.0, -1.0])
def test_singular_domain(fn, x):
    with pytest.raises(DomainError):
        fn(x)


@pytest.mark.parametrize("x", [-0.5, math.nan, math.inf])
def test_j0_domain(x):
    with pytest.raises(DomainError):
        bessel_j0(x)


def test_accuracy_against_series_oracle():
    xs = np.linspace(0.0, 100.0, 401)[1:]
    # the extended-precision series stays exact at large x; only the tolerance matters
    j_err = max(abs(bessel_j0(x) - j0_series(x)) for x in xs)
    y_err = max(abs(bessel_y0(x) - y0_series(x)) for x in xs)
    assert j_err < 1e-8
    assert y_err < 1e-8


def test_branches_agree_at_switchover():
    lo = np.nextafter(SWITCHOVER, 0)
    for fn in (bessel_j0, bessel_y0):
        assert abs(fn(lo) - fn(SWITCHOVER)) < 1e-10
    # the series branch evaluated just past the switch still matches
    assert abs(bessel_j0(SWITCHOVER) - j0_series(SWITCHOVER)) < 1e-10


def test_asymptotic_modulus():
    xs = np.linspace(20.0, 50.0, 300)
    modulus = bessel_j0(xs) ** 2 + bessel_y0(xs) ** 2
    target = 2.0 / (np.pi * xs)
    assert np.max(np.abs(modulus - target) / target) < 1e-3
    # deviation shrinks with x
    xs = np.linspace(0.05, 50.0, 1000)
    dev = np.abs(bessel_j0(xs) ** 2 + bessel_y0(xs) ** 2 - 2 / (np.pi * xs))
    assert dev[xs > 40].max() < dev[xs < 1].min()


def test_hankel_components_are_identical():
    xs = np.linspace(0.05, 60.0, 997)
    h = hankel1_0(xs)
    assert np.array_equal(h.real, bessel_j0(xs))
    assert np.array_equal(h.imag, bessel_y0(xs))


def test_wronskian():
    xs = np.linspace(0.5, 30.0, 120)
    step = 1e-5
    dj = (bessel_j0(xs + step) - bessel_j0(xs - step)) / (2 * step)
    dy = (bessel_y0(xs + step) - bessel_y0(xs - step)) / (2 * step)
    wronskian = bessel_j0(xs) * dy - dj * bessel_y0(xs)
    assert np.max(np.abs(wronskian - 2 / (np.pi * xs))) < 1e-7


def test_array_and_scalar_shapes():
    assert isinstance(bessel_j0(1.0), float)
    assert isinstance(hankel1_0(1.0), complex)
    grid = np.linspace(0.1, 5, 12).reshape(3, 4)
    assert bessel_y0(grid).shape == (3, 4)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=200.0))
def test_bounds_property(x):
    assert abs(bessel_j0(x)) <= 1.0
    # x |H0(x)|^2 increases towards 2/pi from below
    assert abs(hankel1_0(x)) ** 2 <= 2 / (np.pi * x) * (1 + 1e-9)
