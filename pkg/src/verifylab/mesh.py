"""Uniform grids, cell measures, domains and the sampled-function container.

Cells are closed boxes of side ``h`` centred at the grid nodes; a function's
cell value is its node sample (midpoint rule).  Everything downstream treats a
sampled function as a bag of ``(|value|, weight)`` pairs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from verifylab.errors import DataInvariantError, ParseError

MEASURE_KINDS = ("lebesgue", "gaussian")


@dataclass(frozen=True)
class GridSpec:
    dim: int
    half_width: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.points_per_axis < 3:
            raise ValueError(
                f"points_per_axis must be >= 3 for centred stencils, got {self.points_per_axis}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    def coordinates(self) -> list[np.ndarray]:
        """Node coordinates as ``dim`` arrays of shape ``self.shape`` (ij indexing)."""
        ax = self.axis
        return list(np.meshgrid(*([ax] * self.dim), indexing="ij"))

    def radius(self) -> np.ndarray:
        coords = self.coordinates()
        return np.sqrt(sum(c * c for c in coords))


@dataclass(frozen=True)
class MeasureSpec:
    kind: str = "lebesgue"

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure {self.kind!r}; expected one of {MEASURE_KINDS}")


LEBESGUE = MeasureSpec("lebesgue")
GAUSSIAN = MeasureSpec("gaussian")


def build_grid(dim: int, half_width: float, points_per_axis: int) -> GridSpec:
    return GridSpec(int(dim), float(half_width), int(points_per_axis))


def _gaussian_axis_weights(grid: GridSpec) -> np.ndarray:
    c = grid.axis
    h = grid.spacing
    # evaluate on the lower tail only so that w(c) == w(-c) bit for bit
    a = -np.abs(c)
    return ndtr(a + h / 2) - ndtr(a - h / 2)


def cell_weights(grid: GridSpec, measure: MeasureSpec = LEBESGUE) -> np.ndarray:
    """Per-cell measure, shaped like the grid.

    Gaussian weights are products of per-axis differences of the normal
    cumulative function, so the total mass telescopes exactly.
    """
    if measure.kind == "lebesgue":
        return np.full(grid.shape, grid.spacing**grid.dim)
    w1 = _gaussian_axis_weights(grid)
    w = w1
    for _ in range(grid.dim - 1):
        w = np.multiply.outer(w, w1)
    return np.asarray(w, dtype=float).reshape(grid.shape)


def boundary_mask(grid: GridSpec) -> np.ndarray:
    mask = np.zeros(grid.shape, dtype=bool)
    for ax in range(grid.dim):
        idx = [slice(None)] * grid.dim
        idx[ax] = 0
        mask[tuple(idx)] = True
        idx[ax] = -1
        mask[tuple(idx)] = True
    return mask


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Node samples of a compactly supported function on a uniform grid.

    ``values`` must be finite and vanish on the outer layer of cells.
    """

    grid: GridSpec
    measure: MeasureSpec
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(self.grid.shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals.ravel()))[0])
            raise DataInvariantError(f"non-finite value at cell {bad}")
        edge = boundary_mask(self.grid) & (vals != 0)
        if edge.any():
            bad = int(np.flatnonzero(edge.ravel())[0])
            raise DataInvariantError(
                f"nonzero value {vals.ravel()[bad]!r} on the boundary layer at cell {bad} "
                f"(index {np.unravel_index(bad, self.grid.shape)})"
            )

    @cached_property
    def weights(self) -> np.ndarray:
        return cell_weights(self.grid, self.measure)

    @property
    def support_mask(self) -> np.ndarray:
        return self.values != 0

    @property
    def dim(self) -> int:
        return self.grid.dim

    def with_values(self, values, label=None) -> "SampledFunction":
        return SampledFunction(self.grid, self.measure, values, self.label if label is None else label)

    def scaled(self, c: float) -> "SampledFunction":
        return self.with_values(c * self.values)

    def abs(self) -> "SampledFunction":
        return self.with_values(np.abs(self.values))


def zero_function(grid: GridSpec, measure: MeasureSpec = LEBESGUE) -> SampledFunction:
    return SampledFunction(grid, measure, np.zeros(grid.shape), label="zero")


def integrate(f: SampledFunction, absolute: bool = True) -> float:
    v = np.abs(f.values) if absolute else f.values
    return float(np.sum(v * f.weights))


def support_measure(f: SampledFunction) -> float:
    return float(np.sum(f.weights[f.support_mask]))


def lp_norm(f: SampledFunction, p: float) -> float:
    """Direct grid L^p norm; ``p = inf`` gives the max of ``|values|``."""
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max(initial=0.0))
    return float(np.sum(a**p * f.weights) ** (1.0 / p))


@dataclass(frozen=True, eq=False)
class Domain:
    shape: str
    size: float
    grid: GridSpec
    measure_spec: MeasureSpec = LEBESGUE
    mask: np.ndarray = field(default=None, repr=False)
    measure: float = 0.0

    def __post_init__(self):
        if self.mask is None or not self.measure > 0:
            raise ValueError("domain needs a mask and a positive measure")

    @property
    def cell_measure(self) -> float:
        return float(cell_weights(self.grid, self.measure_spec)[self.mask].sum())


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def make_domain(grid: GridSpec, shape: str, size: float, measure: MeasureSpec = LEBESGUE) -> Domain:
    """Ball of radius ``size`` or box of side ``size`` centred at the origin.

    The stored measure is the analytic |Omega| (Lebesgue); the mask holds the
    nodes strictly inside the shape.
    """
    coords = grid.coordinates()
    if shape == "ball":
        mask = grid.radius() < size
        vol = unit_ball_volume(grid.dim) * size**grid.dim
    elif shape == "box":
        mask = np.all([np.abs(c) < size / 2 for c in coords], axis=0)
        vol = size**grid.dim
    else:
        raise ValueError(f"unknown domain shape {shape!r}")
    if measure.kind != "lebesgue":
        vol = float(cell_weights(grid, measure)[mask].sum())
    return Domain(shape, float(size), grid, measure, mask, float(vol))


def support_domain(f: SampledFunction) -> Domain:
    """The open support of ``f`` as a domain (f vanishes on its boundary)."""
    mask = f.support_mask.copy()
    return Domain("support", 0.0, f.grid, f.measure, mask, support_measure(f) or 1.0)


# -- CSV exchange format ---------------------------------------------------------

CSV_HEADER = ("dim", "half_width", "points_per_axis", "measure")


def write_csv(f: SampledFunction, path, comment: str | None = None) -> None:
    """Header row, grid row, then one ``index,value`` row per nonzero cell."""
    path = Path(path)
    flat = f.values.ravel()
    with path.open("w", newline="") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        g = f.grid
        w.writerow([g.dim, repr(g.half_width), g.points_per_axis, f.measure.kind])
        w.writerow(["index", "value"])
        for i in np.flatnonzero(flat):
            w.writerow([int(i), repr(float(flat[i]))])


def read_csv(path, label: str | None = None) -> SampledFunction:
    """Parse the exchange format.  Lines starting with ``#`` are comments.

    Raises ParseError (with a line number) on malformed input and
    DataInvariantError when the data parse but violate the container's
    invariants.
    """
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            rows.append((lineno, [c.strip() for c in s.split(",")]))
    if len(rows) < 2:
        raise ParseError("missing header and grid rows", line=rows[0][0] if rows else 1)
    lineno, header = rows[0]
    if tuple(header) != CSV_HEADER:
        raise ParseError(f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}", lineno)
    lineno, gridrow = rows[1]
    if len(gridrow) != 4:
        raise ParseError("grid row needs 4 fields", lineno)
    try:
        grid = build_grid(int(gridrow[0]), float(gridrow[1]), int(gridrow[2]))
        measure = MeasureSpec(gridrow[3])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from exc
    body = rows[2:]
    if body and body[0][1] == ["index", "value"]:
        body = body[1:]
    flat = np.zeros(grid.size)
    for lineno, fields in body:
        if len(fields) != 2:
            raise ParseError(f"expected 'index,value', got {len(fields)} fields", lineno)
        try:
            i = int(fields[0])
            v = float(fields[1])
        except ValueError as exc:
            raise ParseError(f"cannot parse {','.join(fields)!r}", lineno) from exc
        if not 0 <= i < grid.size:
            raise ParseError(f"cell index {i} out of range [0, {grid.size})", lineno)
        flat[i] = v
    return SampledFunction(grid, measure, flat.reshape(grid.shape), label=label or path.stem)
