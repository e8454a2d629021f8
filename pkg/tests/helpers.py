import numpy as np

from verifylab.corpus import FamilySpec, default_grid, generate
from verifylab.mesh import LEBESGUE, SampledFunction


def make(gid, dim, points=None, half_width=None, **theta):
    spec = FamilySpec.from_ranges(gid, theta)
    return generate(spec, theta, default_grid(dim, points=points, half_width=half_width), label=gid)


def indicator_1d(a=1.0, points=2001, half_width=2.0):
    """Indicator of an interval of measure ``a`` (up to one cell) on a 1-d grid."""
    return make("indicator", 1, points=points, half_width=half_width, R=a / 2)


def random_function(grid, rng, density=0.5):
    """Sparse Gaussian noise on the interior cells."""
    vals = np.zeros(grid.shape)
    sl = tuple(slice(1, -1) for _ in grid.shape)
    noise = rng.normal(size=grid.shape) * (rng.random(grid.shape) < density)
    vals[sl] = noise[sl]
    return SampledFunction(grid, LEBESGUE, vals)
