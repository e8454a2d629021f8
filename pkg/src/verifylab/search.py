"""Empirical best constants: maximise ``lhs / rhs`` over a parametric family.

Phase 1 draws uniform samples of theta from the family's bounds with a
Philox stream keyed by the budget seed; phase 2 refines the best sample by
coordinate-wise +-step moves with geometric step shrink.  The ratio depends
on theta through a sort, so it is only piecewise smooth and no gradients are
used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import ndimage

from verifylab.corpus import FamilySpec, generate
from verifylab.errors import DegenerateFamilyError, InadmissibleError
from verifylab.inequality import (
    SCALE_INVARIANT,
    InequalityId,
    InequalityParams,
    admissible,
    evaluate_check,
    inadmissible_reason,
)
from verifylab.mesh import GridSpec, SampledFunction


@dataclass(frozen=True)
class SearchBudget:
    random_samples: int = 32
    refine_steps: int = 8
    step_shrink: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.random_samples < 1 or self.refine_steps < 0:
            raise ValueError("random_samples must be >= 1 and refine_steps >= 0")
        if not 0 < self.step_shrink < 1:
            raise ValueError("step_shrink must lie in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class ConstantEstimate:
    id: InequalityId
    params: InequalityParams
    best_ratio: float
    argmax_theta: tuple[float, ...]
    trace: list[tuple[tuple[float, ...], float]] = field(default_factory=list)
    names: tuple[str, ...] = ()
    evaluations: int = 0

    def to_json(self) -> dict:
        d = {"id": str(self.id)}
        d.update(self.params.as_dict())
        d.update({
            "best_ratio": self.best_ratio,
            "argmax_theta": list(self.argmax_theta),
            "theta_names": list(self.names),
            "trace": [{"theta": list(t), "ratio": r} for t, r in self.trace],
            "evaluations": self.evaluations,
        })
        return d


def _ratio(id, family: FamilySpec, theta, params, grid, t_grid) -> float:
    f = generate(family, theta, grid, k=params.k)
    res = evaluate_check(id, f, params, t_grid=t_grid)
    if res.skipped or res.rhs <= 0:
        return math.nan
    return res.ratio


def estimate_constant(id, family: FamilySpec, params: InequalityParams, budget: SearchBudget, grid: GridSpec,
                      t_grid=None, jobs: int = 1) -> ConstantEstimate:
    id = InequalityId(id)
    if not admissible(id, params):
        raise InadmissibleError(inadmissible_reason(id, params))
    lo = np.array([b[0] for b in family.bounds], dtype=float)
    hi = np.array([b[1] for b in family.bounds], dtype=float)
    if np.any(hi < lo):
        raise ValueError("empty bounds box")

    rng = np.random.Generator(np.random.Philox(key=budget.seed))
    draws = lo + (hi - lo) * rng.random((budget.random_samples, len(lo)))
    thetas = [tuple(float(x) for x in row) for row in draws]

    def score(theta):
        return _ratio(id, family, theta, params, grid, t_grid)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            ratios = list(pool.map(score, thetas))
    else:
        ratios = [score(th) for th in thetas]

    trace: list[tuple[tuple[float, ...], float]] = []
    best, best_theta = -math.inf, None
    for th, r in zip(thetas, ratios):  # sample order breaks ties
        if not math.isnan(r) and r > best:
            best, best_theta = r, th
            trace.append((th, r))
    if best_theta is None:
        raise DegenerateFamilyError(f"degenerate family: every {family.generator_id} member has a zero right-hand side")
    evals = len(thetas)

    step = 0.25 * (hi - lo)
    for _ in range(budget.refine_steps):
        for i in np.flatnonzero(step > 0):
            for sign in (1.0, -1.0):
                cand = list(best_theta)
                cand[i] = float(np.clip(cand[i] + sign * step[i], lo[i], hi[i]))
                cand = tuple(cand)
                if cand == best_theta:
                    continue
                r = score(cand)
                evals += 1
                if not math.isnan(r) and r > best:
                    best, best_theta = r, cand
                    trace.append((cand, r))
                    break
        step = step * budget.step_shrink
    return ConstantEstimate(id, params, float(best), best_theta, trace, family.names, evals)


# -- dilation probes -------------------------------------------------------------


def dilate(f: SampledFunction, r: float, order: int = 1) -> SampledFunction:
    """``f_r(x) = f(x / r)`` resampled on the same grid (spline ``order`` 0 or 1)."""
    if not r > 0:
        raise ValueError("dilation scale must be positive")
    if f.measure.kind != "lebesgue":
        raise ValueError("dilation probes need Lebesgue measure")
    g = f.grid
    coords = np.array(g.coordinates()) / r
    idx = (coords + g.half_width) / g.spacing
    vals = ndimage.map_coordinates(np.asarray(f.values), idx, order=order, mode="constant", cval=0.0)
    vals[np.abs(vals) < 1e-14 * max(1.0, float(np.abs(vals).max(initial=0.0)))] = 0.0
    try:
        return f.with_values(vals, label=f"{f.label}@r={r:g}")
    except ValueError as exc:
        raise ValueError(f"scale {r:g} exceeds the box capacity: {exc}") from exc


@dataclass(frozen=True)
class DilationReport:
    id: InequalityId
    scales: tuple[float, ...]
    ratios: tuple[float, ...]

    @property
    def spread(self) -> float:
        """``max/min - 1`` over the probed scales."""
        r = np.array(self.ratios)
        return float(r.max() / r.min() - 1.0)


def dilation_probe(id, f: SampledFunction, params: InequalityParams, scales, order: int = 1,
                   t_grid=None) -> DilationReport:
    id = InequalityId(id)
    if id not in SCALE_INVARIANT:
        raise ValueError(f"{id} is not dilation invariant; probe rejected")
    if f.measure.kind != "lebesgue":
        raise ValueError("dilation probes need Lebesgue measure")
    ratios = []
    for r in scales:
        fr = f if r == 1 else dilate(f, r, order)
        ratios.append(evaluate_check(id, fr, params, t_grid=t_grid).ratio)
    return DilationReport(id, tuple(float(s) for s in scales), tuple(ratios))
