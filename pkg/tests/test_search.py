import math

import numpy as np
import pytest

from helpers import make
from verifylab.corpus import FamilySpec, default_grid, generate
from verifylab.errors import DegenerateFamilyError
from verifylab.functionals import LorentzExponents
from verifylab.inequality import I, InequalityParams, evaluate_check
from verifylab.search import SearchBudget, dilate, dilation_probe, estimate_constant

GRID = default_grid(2, points=81)


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(step_shrink=1.0)
    with pytest.raises(ValueError):
        SearchBudget(random_samples=0)


def test_zero_family_is_degenerate():
    with pytest.raises(DegenerateFamilyError, match="degenerate family"):
        estimate_constant(I.GN_STRONG, FamilySpec("zero"), InequalityParams(2), SearchBudget(4, 1), GRID)


def test_power_bump_search_is_reproducible():
    fam = FamilySpec.from_ranges("power_bump", {"beta": (1.0, 4.0)}, seed=3)
    params = InequalityParams(2, 1, LorentzExponents(2, 2))
    budget = SearchBudget(8, 3, seed=3)
    a = estimate_constant(I.SOB1, fam, params, budget, GRID)
    b = estimate_constant(I.SOB1, fam, params, budget, GRID, jobs=3)
    assert math.isfinite(a.best_ratio)
    assert a.to_json() == b.to_json()
    ratios = [r for _, r in a.trace]
    assert ratios == sorted(ratios) and ratios[-1] == a.best_ratio


def test_singleton_family_matches_direct_check():
    fam = FamilySpec.from_ranges("cone", {"R": 1.0})
    est = estimate_constant(I.GN_STRONG, fam, InequalityParams(2), SearchBudget(2, 2), GRID)
    f = generate(fam, (1.0, 1.0), GRID)
    assert est.best_ratio == evaluate_check(I.GN_STRONG, f, InequalityParams(2)).ratio


def test_dilation_probe_rules():
    f = make("smooth_bump", 2, points=81, R=1.0, H=1.0)
    with pytest.raises(ValueError, match="not dilation invariant"):
        dilation_probe(I.STEIN3, f, InequalityParams(2), (0.5, 1.0))
    with pytest.raises(ValueError, match="box capacity"):
        dilate(f, 2.5)


def test_dilate_matches_direct_sampling():
    f = make("tent", 1, R=0.5, H=1.0)
    g = make("tent", 1, R=1.0, H=1.0)
    np.testing.assert_allclose(dilate(f, 2.0).values, g.values, atol=1e-12)
