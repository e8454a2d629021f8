"""Deterministic test-function generators, shapes with analytic perimeters,
and the standard corpus manifest.

Random coefficients come from numpy's Philox4x64-10 counter-based generator,
keyed by the family seed, so every ``(generator, theta, seed, grid)`` tuple
reproduces bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Mapping, Sequence

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import eval_hermitenorm

from verifylab.mesh import (
    GAUSSIAN,
    LEBESGUE,
    GridSpec,
    MeasureSpec,
    SampledFunction,
    build_grid,
    integrate,
    unit_ball_volume,
)

PARAM_NAMES: dict[str, tuple[str, ...]] = {
    "cone": ("R", "H"),
    "tent": ("R", "H"),
    "smooth_bump": ("R", "H"),
    "power_bump": ("R", "H", "beta"),
    "random_fourier": ("R", "H", "K"),
    "mollified_indicator": ("R", "eps"),
    "gaussian_hermite_bump": ("R", "H", "degree"),
    "indicator": ("R",),
    "quadratic_bump": ("R",),
    "zero": (),
}

DEFAULTS: dict[str, float] = {"R": 1.0, "H": 1.0, "beta": 2.0, "K": 3.0, "eps": 0.1, "degree": 1.0}


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    size: float
    dim: int

    def __post_init__(self):
        if self.kind not in ("ball", "box"):
            raise ValueError(f"unsupported shape {self.kind!r}")

    @property
    def measure_value(self) -> float:
        if self.kind == "ball":
            return unit_ball_volume(self.dim) * self.size**self.dim
        return self.size**self.dim

    @property
    def perimeter_value(self) -> float:
        return perimeter_oracle(self)

    def indicator(self, grid: GridSpec) -> np.ndarray:
        if self.kind == "ball":
            return (grid.radius() < self.size).astype(float)
        inside = np.all([np.abs(c) < self.size / 2 for c in grid.coordinates()], axis=0)
        return inside.astype(float)

    @property
    def outer_radius(self) -> float:
        """Sup-norm radius of the shape (half side for boxes)."""
        return self.size if self.kind == "ball" else self.size / 2


def perimeter_oracle(shape: ShapeSpec) -> float:
    n = shape.dim
    if shape.kind == "ball":
        return n * unit_ball_volume(n) * shape.size ** (n - 1)
    if shape.kind == "box":
        return 2 * n * shape.size ** (n - 1)
    raise ValueError(f"no perimeter oracle for {shape.kind!r}")


@dataclass(frozen=True)
class FamilySpec:
    """A parametric family: per-coordinate ``(lo, hi)`` bounds aligned with
    ``PARAM_NAMES[generator_id]``; a coordinate with ``lo == hi`` is fixed."""

    generator_id: str
    bounds: tuple[tuple[float, float], ...] = ()
    seed: int = 0
    shape: str = "ball"

    def __post_init__(self):
        if self.generator_id not in PARAM_NAMES:
            raise ValueError(f"unknown generator {self.generator_id!r}")
        names = PARAM_NAMES[self.generator_id]
        if not self.bounds:
            object.__setattr__(self, "bounds", tuple((DEFAULTS[k], DEFAULTS[k]) for k in names))
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if len(bounds) != len(names):
            raise ValueError(f"{self.generator_id} takes parameters {names}, got {len(bounds)} bounds")
        for (lo, hi), name in zip(bounds, names):
            if lo > hi:
                raise ValueError(f"empty bounds for {name}: [{lo}, {hi}]")

    @property
    def names(self) -> tuple[str, ...]:
        return PARAM_NAMES[self.generator_id]

    @classmethod
    def from_ranges(cls, generator_id: str, ranges: Mapping[str, tuple[float, float] | float] | None = None,
                    seed: int = 0, shape: str = "ball") -> "FamilySpec":
        ranges = dict(ranges or {})
        bounds = []
        for name in PARAM_NAMES[generator_id]:
            r = ranges.pop(name, DEFAULTS[name])
            bounds.append((r, r) if np.isscalar(r) else tuple(r))
        if ranges:
            raise ValueError(f"{generator_id} has no parameters {sorted(ranges)}")
        return cls(generator_id, tuple(bounds), seed, shape)

    def contains(self, theta: Sequence[float]) -> bool:
        return all(lo - 1e-12 <= x <= hi + 1e-12 for x, (lo, hi) in zip(theta, self.bounds))


def _smooth_bump_profile(r2: np.ndarray) -> np.ndarray:
    """``exp(1 - 1/(1 - r^2))`` inside the unit ball, 0 outside; equals 1 at 0."""
    out = np.zeros_like(r2)
    inside = r2 < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
    return out


def _mollifier(grid: GridSpec, eps: float) -> np.ndarray:
    h = grid.spacing
    k = int(math.ceil(eps / h))
    ax = np.arange(-k, k + 1) * h
    coords = np.meshgrid(*([ax] * grid.dim), indexing="ij")
    r2 = sum(c * c for c in coords) / eps**2
    kern = _smooth_bump_profile(r2)
    return kern / kern.sum()


def _fourier_modes(seed: int, dim: int, K: int):
    rng = np.random.Generator(np.random.Philox(key=seed))
    count = 2 * K + 1
    freqs = rng.integers(-K, K + 1, size=(count, dim))
    amps = rng.normal(0.0, 1.0, size=count) / math.sqrt(count)
    phases = rng.uniform(0.0, 2 * math.pi, size=count)
    return freqs, amps, phases


def _theta_dict(generator_id: str, theta) -> dict[str, float]:
    names = PARAM_NAMES[generator_id]
    if isinstance(theta, Mapping):
        d = {k: float(theta.get(k, DEFAULTS[k])) for k in names}
    else:
        theta = list(theta)
        if len(theta) != len(names):
            raise ValueError(f"{generator_id} expects {len(names)} parameters {names}, got {len(theta)}")
        d = dict(zip(names, map(float, theta)))
    return d


def support_radius(generator_id: str, params: Mapping[str, float], shape: str = "ball") -> float:
    if generator_id == "zero":
        return 0.0
    r = params["R"]
    if generator_id == "mollified_indicator":
        r += params["eps"]
    return r


def generate(spec: FamilySpec, theta, grid: GridSpec, measure: MeasureSpec | None = None,
             label: str = "", k: int | None = None) -> SampledFunction:
    """Sample one member of ``spec`` at parameters ``theta`` on ``grid``.

    ``k`` is the highest derivative order the caller will take; power bumps
    need ``beta >= k`` for that derivative to stay bounded.
    """
    gid = spec.generator_id
    p = _theta_dict(gid, theta)
    if measure is None:
        measure = GAUSSIAN if gid == "gaussian_hermite_bump" else LEBESGUE
    h = grid.spacing
    L = grid.half_width
    if gid != "zero":
        if p["R"] <= 0:
            raise ValueError("R must be positive")
        reach = support_radius(gid, p)
        limit = L - h if gid in ("indicator", "mollified_indicator") else L
        if reach > limit * (1 + 1e-12):
            raise ValueError(f"{gid} support radius {reach:g} exceeds the box half width {L:g} less one cell")
    if gid == "tent" and grid.dim != 1:
        raise ValueError("tent is the one-dimensional cone; use cone for dim > 1")

    if gid == "zero":
        vals = np.zeros(grid.shape)
    elif gid == "indicator":
        vals = ShapeSpec(spec.shape, p["R"] if spec.shape == "ball" else 2 * p["R"], grid.dim).indicator(grid)
    elif gid == "mollified_indicator":
        eps = p["eps"]
        if eps < 2 * h:
            raise ValueError(f"mollifier radius {eps:g} is below two grid spacings ({2 * h:g})")
        size = p["R"] if spec.shape == "ball" else 2 * p["R"]
        ind = ShapeSpec(spec.shape, size, grid.dim).indicator(grid)
        vals = fftconvolve(ind, _mollifier(grid, eps), mode="same")
        vals[vals < 1e-12] = 0.0
        np.clip(vals, 0.0, 1.0, out=vals)
    else:
        R, H = p["R"], p.get("H", 1.0)
        r = grid.radius() / R
        if gid in ("cone", "tent"):
            vals = H * np.clip(1.0 - r, 0.0, None)
        elif gid == "smooth_bump":
            vals = H * _smooth_bump_profile(r * r)
        elif gid == "quadratic_bump":
            vals = np.clip(R * R - (r * R) ** 2, 0.0, None) / 4.0
        elif gid == "power_bump":
            beta = p["beta"]
            if beta < 1:
                raise ValueError(f"power_bump needs beta >= 1, got {beta}")
            if k is not None and beta < k:
                raise ValueError(f"power_bump with beta={beta} has unbounded derivatives of order {k}")
            vals = H * np.clip(1.0 - r * r, 0.0, None) ** beta
        elif gid == "random_fourier":
            K = max(1, int(round(p["K"])))
            freqs, amps, phases = _fourier_modes(spec.seed, grid.dim, K)
            coords = grid.coordinates()
            s = np.ones(grid.shape)
            for fq, a, ph in zip(freqs, amps, phases):
                arg = sum(fq[i] * coords[i] for i in range(grid.dim)) * (math.pi / R) + ph
                s = s + a * np.cos(arg)
            vals = H * _smooth_bump_profile(r * r) * s
        elif gid == "gaussian_hermite_bump":
            d = int(round(p["degree"]))
            x0 = grid.coordinates()[0]
            vals = H * eval_hermitenorm(d, x0) * _smooth_bump_profile(r * r)
        else:  # pragma: no cover - guarded by FamilySpec
            raise ValueError(gid)
    return SampledFunction(grid, measure, vals, label=label or gid)


def coordinates_from(spec: FamilySpec, theta) -> dict[str, float]:
    return _theta_dict(spec.generator_id, theta)


@dataclass(frozen=True)
class CoareaReport:
    eps: tuple[float, ...]
    gradient_l1: tuple[float, ...]
    perimeter: float
    rel_errors: tuple[float, ...]

    @property
    def monotone(self) -> bool:
        e = self.rel_errors
        return all(b < a for a, b in zip(e, e[1:]))

    @property
    def final_error(self) -> float:
        return self.rel_errors[-1]


def coarea_limit_check(shape: ShapeSpec, eps_sequence, grid: GridSpec) -> CoareaReport:
    """Total variation of mollified indicators against the analytic perimeter."""
    from verifylab.calculus import gradient_magnitude

    eps_sequence = [float(e) for e in eps_sequence]
    if any(b >= a for a, b in zip(eps_sequence, eps_sequence[1:])):
        raise ValueError("eps sequence must be strictly decreasing")
    if shape.dim != grid.dim:
        raise ValueError("shape and grid dimensions differ")
    h = grid.spacing
    if eps_sequence[-1] < 2 * h:
        raise ValueError(f"smallest eps {eps_sequence[-1]:g} is below two grid spacings ({2 * h:g})")
    half = shape.size if shape.kind == "ball" else shape.size / 2
    per = perimeter_oracle(shape)
    tv = []
    for eps in eps_sequence:
        spec = FamilySpec("mollified_indicator", ((half, half), (eps, eps)), shape=shape.kind)
        f = generate(spec, (half, eps), grid)
        tv.append(integrate(gradient_magnitude(f).magnitude))
    errs = tuple(abs(v - per) / per for v in tv)
    return CoareaReport(tuple(eps_sequence), tuple(tv), per, errs)


# -- standard corpus -------------------------------------------------------------

DEFAULT_POINTS = {1: 2001, 2: 201}
DEFAULT_HALF_WIDTH = {"lebesgue": 2.0, "gaussian": 8.0}


def default_grid(dim: int, measure: str = "lebesgue", points: int | None = None,
                 half_width: float | None = None) -> GridSpec:
    return build_grid(dim, half_width or DEFAULT_HALF_WIDTH[measure], points or DEFAULT_POINTS.get(dim, 61))


@dataclass(frozen=True)
class CorpusEntry:
    label: str
    generator_id: str
    theta: dict
    seed: int
    grid: dict
    shape: str = "ball"

    @property
    def measure(self) -> MeasureSpec:
        return MeasureSpec(self.grid["measure"])

    @property
    def dim(self) -> int:
        return int(self.grid["dim"])

    def grid_spec(self) -> GridSpec:
        g = self.grid
        return build_grid(g["dim"], g["half_width"], g["points_per_axis"])

    def build(self, points: int | None = None, half_width: float | None = None) -> SampledFunction:
        grid = self.grid_spec()
        if points or half_width:
            grid = build_grid(grid.dim, half_width or grid.half_width, points or grid.points_per_axis)
        theta = dict(self.theta)
        spec = FamilySpec(self.generator_id, tuple((theta[k], theta[k]) for k in PARAM_NAMES[self.generator_id]),
                          self.seed, self.shape)
        return generate(spec, theta, grid, self.measure, label=self.label)


def _entry(label, gid, dim, measure="lebesgue", seed=0, **theta) -> CorpusEntry:
    grid = default_grid(dim, measure)
    gd = {"dim": grid.dim, "half_width": grid.half_width, "points_per_axis": grid.points_per_axis,
          "measure": measure}
    full = {k: float(theta.get(k, DEFAULTS[k])) for k in PARAM_NAMES[gid]}
    return CorpusEntry(label, gid, full, seed, gd)


def standard_entries() -> list[CorpusEntry]:
    """The 24-function corpus: 4 smooth generators x 5 settings, plus 4 Gaussian."""
    out = []
    for dim, settings in ((1, ((1.0, 1.0), (1.5, 2.0))), (2, ((0.6, 1.0), (1.0, 1.0), (1.5, 0.5)))):
        for R, H in settings:
            out.append(_entry(f"smooth_bump_n{dim}_R{R:g}_H{H:g}", "smooth_bump", dim, R=R, H=H))
    for dim, settings in ((1, ((1.0, 2.0), (1.5, 4.0))), (2, ((0.8, 2.0), (1.0, 3.0), (1.5, 4.0)))):
        for R, beta in settings:
            out.append(_entry(f"power_bump_n{dim}_R{R:g}_b{beta:g}", "power_bump", dim, R=R, H=1.0, beta=beta))
    for dim, settings in ((1, ((1.5, 2, 7), (1.0, 3, 11))), (2, ((1.2, 2, 7), (1.5, 2, 11), (1.0, 1, 13)))):
        for R, K, seed in settings:
            out.append(_entry(f"random_fourier_n{dim}_R{R:g}_K{K}_s{seed}", "random_fourier", dim, seed=seed,
                              R=R, H=1.0, K=K))
    for dim, settings in ((1, ((1.0, 0.4), (0.8, 0.6))), (2, ((1.0, 0.4), (0.8, 0.5), (1.2, 0.6)))):
        for R, eps in settings:
            out.append(_entry(f"mollified_indicator_n{dim}_R{R:g}_e{eps:g}", "mollified_indicator", dim,
                              R=R, eps=eps))
    for dim, R, deg in ((1, 2.0, 0), (1, 2.5, 1), (2, 2.0, 1), (2, 2.5, 2)):
        out.append(_entry(f"gaussian_hermite_n{dim}_R{R:g}_d{deg}", "gaussian_hermite_bump", dim,
                          measure="gaussian", R=R, H=1.0, degree=deg))
    return out


def manifest_dict(entries: Sequence[CorpusEntry]) -> list[dict]:
    return [asdict(e) for e in entries]


def write_manifest(path, entries: Sequence[CorpusEntry] | None = None) -> None:
    entries = standard_entries() if entries is None else entries
    with open(path, "w") as fh:
        json.dump({"rng": "numpy Philox4x64-10, key=seed", "functions": manifest_dict(entries)}, fh, indent=1)
        fh.write("\n")


def load_manifest(path=None) -> list[CorpusEntry]:
    if path is None:
        text = resources.files("verifylab.data").joinpath("corpus.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    items = data["functions"] if isinstance(data, dict) else data
    return [CorpusEntry(**item) for item in items]
