"""Distribution function, decreasing rearrangement and maximal average.

The rearrangement of a sampled function is an exact step function: sort the
``(|value|, weight)`` pairs by value (descending, stable by cell index) and lay
the cells end to end on ``(0, supp)``.  ``f*`` is right-continuous, and
``f**(t) = (1/t) * int_0^t f*`` is piecewise ``(a + b t)/t``, evaluated in
closed form from the prefix sums.  Beyond the support ``f* = 0`` and
``f** = mass / t``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from verifylab.mesh import SampledFunction


def log_grid(t_min: float = 1e-4, t_max: float = 1e4, points: int = 256) -> np.ndarray:
    if not 0 < t_min < t_max:
        raise ValueError(f"need 0 < t_min < t_max, got {t_min}, {t_max}")
    if points < 2:
        raise ValueError("log grid needs at least two points")
    return np.geomspace(t_min, t_max, points)


def log_trapezoid(t: np.ndarray, y: np.ndarray) -> float:
    """Trapezoid rule for ``int y(t) dt/t`` in the variable ``log t``."""
    if len(t) < 2:
        return 0.0
    return float(np.trapezoid(y, np.log(t)))


@dataclass(frozen=True, eq=False)
class RearrangementProfile:
    t_grid: np.ndarray
    f_star: np.ndarray
    f_star_star: np.ndarray
    osc: np.ndarray
    mass: float
    supp: float
    sup_norm: float
    # step structure: levels[j] on [edges[j], edges[j+1]); edges[0] == 0
    levels: np.ndarray
    edges: np.ndarray
    primitive_at_edges: np.ndarray

    @property
    def is_zero(self) -> bool:
        return self.levels.size == 0

    @property
    def last_level(self) -> float:
        """Left limit ``f*(supp-)``; the smallest nonzero level."""
        return float(self.levels[-1]) if self.levels.size else 0.0

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        j = np.searchsorted(self.edges, t, side="right") - 1
        return t, np.clip(j, 0, None)

    def f_star_at(self, t) -> np.ndarray:
        t, j = self._locate(t)
        lv = np.append(self.levels, 0.0)
        return lv[np.minimum(j, self.levels.size)]

    def primitive(self, t) -> np.ndarray:
        """``int_0^t f*(s) ds``, exact."""
        t, j = self._locate(t)
        n = self.levels.size
        jj = np.minimum(j, n)
        lv = np.append(self.levels, 0.0)
        return self.primitive_at_edges[jj] + (t - self.edges[jj]) * lv[jj]

    def f_star_star_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.primitive(t) / t

    def osc_at(self, t) -> np.ndarray:
        return self.f_star_star_at(t) - self.f_star_at(t)

    def osc_left_at_supp(self) -> float:
        if self.is_zero:
            return 0.0
        return self.mass / self.supp - self.last_level

    def to_csv(self, path, comment: str | None = None) -> None:
        with Path(path).open("w", newline="") as fh:
            if comment:
                for line in comment.splitlines():
                    fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "f_star", "f_star_star", "osc"])
            for row in zip(self.t_grid, self.f_star, self.f_star_star, self.osc):
                w.writerow([repr(float(x)) for x in row])


def _abs_weight_pairs(f: SampledFunction):
    a = np.abs(f.values).ravel()
    w = np.broadcast_to(f.weights, f.grid.shape).ravel()
    return a, w


def distribution(f: SampledFunction, s: float) -> float:
    """``lambda_f(s)``: measure of ``{|f| > s}``."""
    if s < 0:
        raise ValueError(f"distribution level must be non-negative, got {s}")
    a, w = _abs_weight_pairs(f)
    return float(w[a > s].sum())


def rearrange(f: SampledFunction, t_grid) -> RearrangementProfile:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d array")
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be positive and strictly increasing")

    a, w = _abs_weight_pairs(f)
    keep = a > 0
    a, w = a[keep], w[keep]
    order = np.argsort(-a, kind="stable")
    levels = a[order]
    widths = w[order]
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    prim = np.concatenate([[0.0], np.cumsum(levels * widths)])
    mass = float(prim[-1])
    supp = float(edges[-1])
    sup_norm = float(levels[0]) if levels.size else 0.0

    prof = RearrangementProfile(
        t_grid=t_grid,
        f_star=np.empty(0),
        f_star_star=np.empty(0),
        osc=np.empty(0),
        mass=mass,
        supp=supp,
        sup_norm=sup_norm,
        levels=levels,
        edges=edges,
        primitive_at_edges=prim,
    )
    fs = prof.f_star_at(t_grid)
    fss = prof.f_star_star_at(t_grid)
    # clamp rounding so that f** >= f* holds exactly
    osc = np.maximum(fss - fs, 0.0)
    fss = fs + osc
    for arr in (fs, fss, osc, t_grid):
        arr.setflags(write=False)
    object.__setattr__(prof, "f_star", fs)
    object.__setattr__(prof, "f_star_star", fss)
    object.__setattr__(prof, "osc", osc)
    return prof


def oscillation_curve(profile: RearrangementProfile) -> np.ndarray:
    return np.asarray(profile.osc)


class IdentityResiduals(NamedTuple):
    """Max residuals relative to ``sup_norm``.

    tail: ``f** - int_t^inf osc ds/s``; product: ``t (f**)' + osc``;
    parts: ``osc - (1/t) int_0^t s d(-f*)``.
    """

    tail: float
    product: float
    parts: float


def _support_nodes(profile: RearrangementProfile):
    """Grid nodes below ``supp`` followed by ``supp`` itself (left limits there)."""
    t = profile.t_grid
    inside = t < profile.supp
    nodes = np.append(t[inside], profile.supp)
    osc = np.append(profile.osc[inside], profile.osc_left_at_supp())
    fstar = np.append(profile.f_star[inside], profile.last_level)
    return inside, nodes, osc, fstar


def tail_integral_curve(profile: RearrangementProfile) -> np.ndarray:
    """``int_t^inf osc(s) ds/s`` at each grid point: log-trapezoid below supp, closed form above."""
    t = profile.t_grid
    out = profile.mass / t
    if profile.is_zero:
        return np.zeros_like(t)
    inside, nodes, osc, _ = _support_nodes(profile)
    if not inside.any():
        return out
    u = np.log(nodes)
    panels = 0.5 * (osc[1:] + osc[:-1]) * np.diff(u)
    from_right = np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]])
    out = out.copy()
    out[inside] = from_right[:-1] + profile.mass / profile.supp
    return out


def stieltjes_curve(profile: RearrangementProfile) -> np.ndarray:
    """``int_0^t s d(-f*)(s)`` from the tabulated drops of ``f*``.

    Each drop between consecutive nodes is placed at the arithmetic midpoint
    of its interval; the drop before the first node sits at ``t_0 / 2`` and
    the final drop to zero sits exactly at ``supp``.
    """
    t = profile.t_grid
    if profile.is_zero:
        return np.zeros_like(t)
    inside, nodes, _, fstar = _support_nodes(profile)
    prev_level = np.concatenate([[profile.sup_norm], fstar[:-1]])
    prev_node = np.concatenate([[0.0], nodes[:-1]])
    drops = prev_level - fstar
    locs = 0.5 * (prev_node + nodes)
    partial = np.cumsum(drops * locs)
    out = np.empty_like(t)
    out[inside] = partial[:-1]
    # past the support every drop, including the last one at supp, is in
    out[~inside] = partial[-1] + profile.supp * profile.last_level
    return out


def identity_residuals(profile: RearrangementProfile) -> IdentityResiduals:
    t = profile.t_grid
    if t.size < 5:
        raise ValueError("identity residuals need at least 5 grid points")
    if profile.is_zero:
        return IdentityResiduals(0.0, 0.0, 0.0)
    scale = profile.sup_norm
    tail = np.max(np.abs(profile.f_star_star - tail_integral_curve(profile))) / scale

    u = np.log(t)
    dfss = (profile.f_star_star[2:] - profile.f_star_star[:-2]) / (u[2:] - u[:-2])
    product = np.max(np.abs(dfss + profile.osc[1:-1])) / scale

    parts = np.max(np.abs(profile.osc - stieltjes_curve(profile) / t)) / scale
    return IdentityResiduals(float(tail), float(product), float(parts))
