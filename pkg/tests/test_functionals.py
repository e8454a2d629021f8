import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helpers import indicator_1d, make
from verifylab.functionals import (
    INF,
    Anchor,
    BesovParams,
    LorentzExponents,
    besov_seminorm,
    fundamental_function,
    lorentz_norm,
    modulus,
    modulus_curve,
    normalized_linf_q,
    oscillation_norm,
    step_lorentz_norm,
)
from verifylab.mesh import lp_norm
from verifylab.rearrange import log_grid, rearrange

T = log_grid(1e-4, 1e4, 256)


@pytest.fixture(scope="module")
def indicator_profile():
    return rearrange(indicator_1d(1.0), T)


def test_exponent_validation():
    with pytest.raises(ValueError):
        LorentzExponents(0.5, 1)
    with pytest.raises(ValueError):
        LorentzExponents(2, 0.9)
    with pytest.raises(ValueError):
        BesovParams(1.0, 1.0)
    with pytest.raises(ValueError):
        BesovParams(0.5, INF)
    assert str(Anchor(2.0)) == "L^2" and str(Anchor(2.0, 1.0)) == "L(2,1)"


def test_weak_type_norm_of_indicator(indicator_profile):
    a = indicator_profile.supp
    assert lorentz_norm(indicator_profile, LorentzExponents(2, INF)) == pytest.approx(math.sqrt(a), rel=1e-3)
    assert lorentz_norm(indicator_profile, LorentzExponents(INF, INF)) == pytest.approx(1.0, rel=1e-3)


def test_lebesgue_diagonal_matches_lp():
    f = make("smooth_bump", 2, R=1.0, H=1.0)
    prof = rearrange(f, T)
    for p in (1.0, 2.0, 3.0):
        assert lorentz_norm(prof, LorentzExponents(p, p)) == pytest.approx(lp_norm(f, p), rel=0.01)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 100.0))
def test_homogeneity(c):
    f = make("power_bump", 1, R=1.0, H=1.0, beta=2.0)
    base, scaled = rearrange(f, T), rearrange(f.scaled(c), T)
    for exps in (LorentzExponents(2, 1), LorentzExponents(INF, 2), LorentzExponents(1.5, INF)):
        assert lorentz_norm(scaled, exps) == pytest.approx(c * lorentz_norm(base, exps), rel=1e-10)


def test_oscillation_norm_is_linf_q(indicator_profile):
    for q in (1.0, 2.0):
        assert oscillation_norm(indicator_profile, q) == pytest.approx(
            lorentz_norm(indicator_profile, LorentzExponents(INF, q)), rel=1e-12)
    A = 2.0
    assert normalized_linf_q(indicator_profile, A, 1.0) == pytest.approx(
        oscillation_norm(indicator_profile, 1.0, upper=A) + indicator_profile.mass / A)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(1, 30), elements=st.floats(-10, 10)), st.floats(0.01, 1.0),
       st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_step_norm_diagonal_is_lp(values, w, p):
    expected = float(np.sum(np.abs(values) ** p * w) ** (1 / p))
    assert step_lorentz_norm(values, w, p, p) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_fundamental_function():
    for p, r in ((1.0, 1.0), (2.0, 2.0), (3.0, 3.0)):
        t = 0.37
        assert step_lorentz_norm(np.array([1.0]), t, p, r) == pytest.approx(fundamental_function(Anchor(p, r), t))
    with pytest.raises(ValueError):
        fundamental_function(Anchor(1.0), 0.0)


def test_indicator_modulus():
    f = indicator_1d(1.0)
    a = float(np.sum(f.values) * f.grid.spacing)
    # ||f(. + h) - f||_1 = 2|h| for |h| <= a, then 2a
    assert modulus(f, Anchor(1.0), 0.1) == pytest.approx(0.2, rel=0.02)
    assert modulus(f, Anchor(2.0), 0.1) == pytest.approx(math.sqrt(0.2), rel=0.02)
    assert modulus(f, Anchor(1.0), 3.0) == pytest.approx(2 * a, rel=1e-9)
    curve = modulus_curve(f, Anchor(1.0), log_grid(1e-3, 10.0, 64))
    assert np.all(np.diff(curve.w) >= 0)


def test_modulus_rejects_gaussian_measure():
    f = make("gaussian_hermite_bump", 1, half_width=8.0, R=2.0, H=1.0, degree=0)
    with pytest.raises(ValueError):
        modulus(f, Anchor(1.0), 0.1)


def test_besov_of_indicator_and_scaling():
    f = indicator_1d(1.0)
    # w(t) = 2t on (0,1), 2 after: int_0^1 2t^{1/2} dt/t + int_1^inf 2 t^{-3/2} dt = 4 + 4
    base = besov_seminorm(f, BesovParams(0.5, 1.0, 1.0))
    assert base == pytest.approx(8.0, rel=0.02)
    assert besov_seminorm(f.scaled(3.0), BesovParams(0.5, 1.0, 1.0)) == pytest.approx(3 * base, rel=1e-10)
