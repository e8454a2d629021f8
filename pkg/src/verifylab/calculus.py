"""Finite-difference operators on sampled functions.

All stencils are centred and use zero extension beyond the box, which is
exact under the compact-support hypothesis (values vanish on the outer
layer).  Results must themselves vanish on the outer layer; when they do not,
the stencil has reached the box edge and the grid is too coarse.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from verifylab.mesh import SampledFunction, boundary_mask
from verifylab.rearrange import RearrangementProfile

MAX_ORDER = 4


@dataclass(frozen=True, eq=False)
class DerivativeField:
    order: int
    magnitude: SampledFunction
    components: list = field(default_factory=list, repr=False)
    multi_indices: list = field(default_factory=list, repr=False)


def partial(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Centred difference ``(f(x + h e_i) - f(x - h e_i)) / 2h`` with zero extension."""
    pad = [(0, 0)] * values.ndim
    pad[axis] = (1, 1)
    v = np.pad(values, pad)
    hi = [slice(None)] * values.ndim
    lo = [slice(None)] * values.ndim
    hi[axis] = slice(2, None)
    lo[axis] = slice(None, -2)
    return (v[tuple(hi)] - v[tuple(lo)]) / (2.0 * h)


def _wrap(f: SampledFunction, values: np.ndarray, what: str) -> SampledFunction:
    if np.any(values[boundary_mask(f.grid)] != 0):
        raise ValueError(f"{what} reaches the box edge: grid too small for the stencil")
    return f.with_values(values, label=f"{what}({f.label})" if f.label else what)


def gradient_magnitude(f: SampledFunction) -> DerivativeField:
    h = f.grid.spacing
    parts = [partial(np.asarray(f.values), ax, h) for ax in range(f.dim)]
    mag = np.sqrt(sum(d * d for d in parts))
    return DerivativeField(1, _wrap(f, mag, "grad"), parts, [(ax,) for ax in range(f.dim)])


def higher_derivative_magnitude(f: SampledFunction, k: int) -> DerivativeField:
    """``|D^k f|``: Euclidean length over all ordered partials of order ``k``.

    Mixed partials commute on the grid, so each unordered multi-index is
    computed once and weighted by its number of orderings.
    """
    if not 1 <= k <= MAX_ORDER:
        raise ValueError(f"derivative order must be in [1, {MAX_ORDER}], got {k}")
    if k * 2 >= f.grid.points_per_axis - 1:
        raise ValueError(f"order {k} too large for a grid of {f.grid.points_per_axis} points")
    h = f.grid.spacing
    cache: dict[tuple, np.ndarray] = {(): np.asarray(f.values)}

    def deriv(idx: tuple) -> np.ndarray:
        if idx not in cache:
            cache[idx] = partial(deriv(idx[:-1]), idx[-1], h)
        return cache[idx]

    total = np.zeros(f.grid.shape)
    comps, keys = [], []
    for idx in combinations_with_replacement(range(f.dim), k):
        d = deriv(idx)
        counts = Counter(idx).values()
        mult = math.factorial(k) // math.prod(math.factorial(c) for c in counts)
        total = total + mult * (d * d)
        if k <= 2:
            comps.append(d)
            keys.append(idx)
    return DerivativeField(k, _wrap(f, np.sqrt(total), f"D{k}"), comps, keys)


def laplacian(f: SampledFunction) -> SampledFunction:
    h2 = f.grid.spacing ** 2
    v = np.asarray(f.values)
    out = np.zeros_like(v)
    for ax in range(f.dim):
        pad = [(0, 0)] * f.dim
        pad[ax] = (1, 1)
        p = np.pad(v, pad)
        hi = [slice(None)] * f.dim
        lo = [slice(None)] * f.dim
        hi[ax] = slice(2, None)
        lo[ax] = slice(None, -2)
        out += (p[tuple(hi)] - 2.0 * v + p[tuple(lo)]) / h2
    return _wrap(f, out, "lap")


def level_gradient_cumulant(
    f: SampledFunction, profile: RearrangementProfile, grad: DerivativeField | None = None
) -> np.ndarray:
    """``Phi(t)``: integral of ``|grad f|`` over the superlevel set at ``f*(t)``.

    The superlevel set is taken closed, ``{|f| >= f*(t)}``, so that it always
    contains the cells realising the level ``f*(t)``; past the support it is
    the whole grid and ``Phi`` is the full ``L^1`` norm of the gradient.
    """
    if grad is None:
        grad = gradient_magnitude(f)
    a = np.abs(f.values).ravel()
    g = (np.asarray(grad.magnitude.values) * f.weights).ravel()
    order = np.argsort(-a, kind="stable")
    a_sorted = a[order]
    cum = np.concatenate([[0.0], np.cumsum(g[order])])
    levels = profile.f_star
    # number of cells with |f| >= level
    count = np.searchsorted(-a_sorted, -levels, side="right")
    out = cum[count]
    out[levels <= 0] = cum[-1]
    return out
