"""Acceptance criteria, one marker per criterion; the terminal summary prints
one pass/fail line for each."""

import math

import numpy as np
import pytest

from helpers import indicator_1d, make
from verifylab.cli import RunConfig, constant_key, load_budgets, main
from verifylab.corpus import FamilySpec, ShapeSpec, coarea_limit_check, default_grid, load_manifest
from verifylab.functionals import INF, BesovParams, LorentzExponents, besov_seminorm, lorentz_norm
from verifylab.inequality import (
    FRACTIONAL_ALPHAS,
    I,
    InequalityParams,
    admissible,
    applies_to,
    budget_key,
    evaluate_check,
    gaussian_profile,
    parameter_lattice,
    steinerberger_results,
)
from verifylab.mesh import build_grid
from verifylab.rearrange import identity_residuals, log_grid, rearrange
from verifylab.search import SearchBudget, dilate, dilation_probe, estimate_constant

acceptance = pytest.mark.acceptance
LABELS = [e.label for e in load_manifest()]
CONE_CONSTANT = 1 / math.sqrt(math.pi)


@pytest.fixture(scope="module")
def budgets():
    return load_budgets(RunConfig().budget_path())


def _frozen(budgets, id, params):
    return budgets["checks"][budget_key(id, params)]["budget"]


# 1 -------------------------------------------------------------------------------


@acceptance(1, "closed-form Lorentz norms of an indicator")
def test_indicator_closed_forms(t_grid):
    f = indicator_1d(1.0)
    prof = rearrange(f, t_grid)
    assert lorentz_norm(prof, LorentzExponents(2, 1)) == pytest.approx(2.0, rel=0.01)
    assert lorentz_norm(prof, LorentzExponents(1, 1)) == pytest.approx(1.0, rel=0.01)
    for q in (1, 2, 4):
        assert lorentz_norm(prof, LorentzExponents(INF, q)) == pytest.approx(q ** (-1 / q), rel=0.01)


# 2 -------------------------------------------------------------------------------


@acceptance(2, "L(inf,1) equals the sup norm on compact support")
def test_linf1_equals_sup(corpus_profiles):
    assert len(corpus_profiles) == 24
    for prof in corpus_profiles:
        val = lorentz_norm(prof, LorentzExponents(INF, 1))
        assert abs(val - prof.sup_norm) / prof.sup_norm < 0.02


# 3 -------------------------------------------------------------------------------


@acceptance(3, "identity residuals below 1e-3 with 512-point refinement gain")
@pytest.mark.parametrize("index", range(len(LABELS)), ids=LABELS)
def test_identity_suite(index, corpus):
    f = corpus[index]
    coarse = identity_residuals(rearrange(f, log_grid(1e-4, 1e4, 256)))
    fine = identity_residuals(rearrange(f, log_grid(1e-4, 1e4, 512)))
    for name in ("tail", "product", "parts"):
        r256, r512 = getattr(coarse, name), getattr(fine, name)
        assert r256 < 1e-3, f"{name} residual {r256:.3e} at 256 points"
        assert r512 <= 0.6 * r256, f"{name} residual {r512:.3e} at 512 vs {r256:.3e} at 256"


# 4 -------------------------------------------------------------------------------


@acceptance(4, "monotonicity of f*, f** >= f*, t*osc non-decreasing")
def test_monotonicity(corpus_profiles):
    violations = 0
    for p in corpus_profiles:
        roundoff = 64 * np.finfo(float).eps * p.mass
        violations += int(np.sum(np.diff(p.f_star) > 0))
        violations += int(np.sum(p.f_star_star < p.f_star))
        violations += int(np.sum(np.diff(p.t_grid * p.osc) < -roundoff))
    assert violations == 0


# 5 -------------------------------------------------------------------------------


@acceptance(5, "Gagliardo-Nirenberg chain")
def test_gn_cone_and_tent(t_grid):
    cone = make("cone", 2, R=1.0, H=1.0)
    r = evaluate_check(I.GN_STRONG, cone, InequalityParams(2), t_grid=t_grid).ratio
    assert r == pytest.approx(CONE_CONSTANT, rel=0.02)
    tent = make("tent", 1, R=1.0, H=1.0)
    r = evaluate_check(I.GN_STRONG, tent, InequalityParams(1), t_grid=t_grid).ratio
    assert r == pytest.approx(0.5, rel=0.02)


@acceptance(5, "Gagliardo-Nirenberg chain")
def test_gn_ordering(corpus, t_grid):
    checked = 0
    for f in corpus:
        if not applies_to(I.GN_STRONG, f):
            continue
        params = InequalityParams(f.dim)
        r = {id: evaluate_check(id, f, params, t_grid=t_grid).ratio for id in (I.GN_WEAK, I.GN_CLASSICAL, I.GN_STRONG)}
        assert r[I.GN_WEAK] <= r[I.GN_CLASSICAL] <= r[I.GN_STRONG], f.label
        checked += 1
    assert checked == 20


# 6 -------------------------------------------------------------------------------


def _first_order_oracle(n, k, p, q):
    if k != 1:
        return False
    return (1 < p <= n) or (p == 1 and q == 1)


def _higher_order_oracle(n, k, p, q):
    if k > n:
        return False
    if k < n:
        return (1 < p <= n / k) or (p == 1 and q == 1)
    return p == 1 and q == 1


@acceptance(6, "admissibility truth table")
def test_admissibility_table():
    rows = 0
    for n in (1, 2, 3):
        for k in (1, 2):
            for p in sorted({1.0, 1.5, 2.0, n / k}):
                for q in (1.0, 2.0, INF):
                    if p < 1:  # n/k below 1: the exponent record itself refuses it
                        assert not _first_order_oracle(n, k, p, q) and not _higher_order_oracle(n, k, p, q)
                        with pytest.raises(ValueError):
                            LorentzExponents(p, q)
                        continue
                    params = InequalityParams(n, k, LorentzExponents(p, q))
                    assert admissible(I.SOB1, params) == _first_order_oracle(n, k, p, q), (n, k, p, q)
                    assert admissible(I.SOBK, params) == _higher_order_oracle(n, k, p, q), (n, k, p, q)
                    rows += 1
    assert rows > 50


# 7 -------------------------------------------------------------------------------


@acceptance(7, "dilation invariance")
def test_dilation_spread(t_grid):
    cone = make("cone", 2, R=1.0, H=1.0)
    scales = (0.5, 1.0, 1.5)
    gn = dilation_probe(I.GN_STRONG, cone, InequalityParams(2), scales, t_grid=t_grid)
    assert gn.spread < 0.03
    sob = dilation_probe(I.SOB1, cone, InequalityParams(2, 1, LorentzExponents(2, 2)), scales, t_grid=t_grid)
    assert sob.spread < 0.03


@acceptance(7, "dilation invariance")
def test_linf1_scale_free(t_grid):
    f = indicator_1d(1.0)
    base = lorentz_norm(rearrange(f, t_grid), LorentzExponents(INF, 1))
    for r in (0.5, 1.5, 2.0):
        val = lorentz_norm(rearrange(dilate(f, r, order=0), t_grid), LorentzExponents(INF, 1))
        assert abs(val - base) <= 1e-6 * base


# 8 -------------------------------------------------------------------------------


@acceptance(8, "isoperimetric limit")
def test_coarea_ladder():
    rep = coarea_limit_check(ShapeSpec("ball", 1.0, 2), (0.2, 0.1, 0.05), build_grid(2, 2.0, 401))
    assert rep.perimeter == pytest.approx(2 * math.pi)
    assert rep.monotone
    assert rep.final_error < 0.03


@acceptance(8, "isoperimetric limit")
def test_iso_ratio_bound(corpus, t_grid):
    ceiling = {}
    for n in (1, 2):
        ball = ShapeSpec("ball", 1.0, n)
        ceiling[n] = ball.measure_value ** (1 - 1 / n) / ball.perimeter_value * 1.05
    funcs = [f for f in corpus if applies_to(I.ISO, f)]
    funcs += [make("mollified_indicator", 2, points=401, R=1.0, eps=e) for e in (0.2, 0.1, 0.05)]
    for f in funcs:
        r = evaluate_check(I.ISO, f, InequalityParams(f.dim), t_grid=t_grid).ratio
        assert r <= ceiling[f.dim], f.label


# 9 -------------------------------------------------------------------------------


@acceptance(9, "Steinerberger anchors and budgets")
def test_steinerberger(budgets):
    f = make("quadratic_bump", 2, points=201, R=1.0)
    res = steinerberger_results(f)
    s2, s3 = res[I.STEIN2], res[I.STEIN3]
    assert s2.lhs == pytest.approx(0.25, rel=1e-12)
    assert s2.extra["kernel_max"] == pytest.approx(math.pi * (1 + math.log(math.pi)), rel=0.02)
    for id, r in ((I.STEIN2, s2), (I.STEIN3, s3)):
        assert r.ratio <= _frozen(budgets, id, r.params)


# 10 ------------------------------------------------------------------------------


@acceptance(10, "fractional seminorm and budgets")
def test_besov_indicator():
    f = indicator_1d(1.0)
    assert besov_seminorm(f, BesovParams(0.5, 1.0, 1.0)) == pytest.approx(8.0, rel=0.05)


@acceptance(10, "fractional seminorm and budgets")
def test_fractional_budgets(corpus, budgets, t_grid):
    seen = set()
    for f in corpus:
        for id in (I.FRAC_THM, I.FRAC_NUEVA2):
            if not applies_to(id, f):
                continue
            for params in parameter_lattice(id, f.dim):
                res = evaluate_check(id, f, params, t_grid=t_grid)
                assert math.isfinite(res.ratio), (id, f.label)
                assert res.ratio <= _frozen(budgets, id, params), (id, f.label, budget_key(id, params))
                seen.add(params.besov.alpha)
    assert seen == set(FRACTIONAL_ALPHAS)


# 11 ------------------------------------------------------------------------------


@acceptance(11, "Gaussian profile and budgets")
def test_gaussian_profile():
    assert abs(float(gaussian_profile(0.5)) - 0.39894) < 1e-4
    ts = np.array([1e-2, 1e-3, 1e-4])
    ratio = gaussian_profile(ts) / (ts * np.sqrt(2 * np.log(1 / ts)))
    assert np.all(np.diff(ratio) > 0)
    assert np.all(ratio < 1)


@acceptance(11, "Gaussian profile and budgets")
def test_gaussian_budgets(corpus, budgets, t_grid):
    funcs = [f for f in corpus if f.measure.kind == "gaussian"]
    assert len(funcs) == 4
    for f in funcs:
        params = InequalityParams(f.dim)
        res = evaluate_check(I.V6_GAUSS, f, params, t_grid=t_grid)
        assert res.ratio <= _frozen(budgets, I.V6_GAUSS, params), f.label


# 12 ------------------------------------------------------------------------------

SCAN_POINTS = 401  # the cone spans too few cells at R = 0.1 on the 201-point grid


def _cone_scan():
    family = FamilySpec.from_ranges("cone", {"R": (0.1, 1.5)}, seed=7)
    grid = default_grid(2, points=SCAN_POINTS)
    return family, estimate_constant(I.GN_STRONG, family, InequalityParams(2), SearchBudget(seed=7), grid)


@acceptance(12, "cone constant search")
def test_cone_search(budgets):
    family, est = _cone_scan()
    assert est.best_ratio == pytest.approx(CONE_CONSTANT, rel=0.02)
    _, again = _cone_scan()
    assert again.to_json() == est.to_json()
    frozen = budgets["constants"][constant_key(I.GN_STRONG, est.params, family, SCAN_POINTS)]["best_ratio"]
    assert abs(est.best_ratio - frozen) / frozen < 0.05


@acceptance(12, "cone constant search")
def test_cone_scan_cli_bytes(tmp_path):
    argv = ["scan", "--id", "GN_STRONG", "--family", "cone", "--R", "0.1:1.5", "--n", "2", "--seed", "7",
            "--points", str(SCAN_POINTS), "--out", str(tmp_path)]
    assert main(argv) == 0
    first = (tmp_path / "estimate.json").read_bytes()
    assert main(argv) == 0
    assert (tmp_path / "estimate.json").read_bytes() == first
