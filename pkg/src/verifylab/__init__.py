"""Numerical laboratory for rearrangement inequalities.

Decreasing rearrangements, oscillation curves, Lorentz and Besov type
functionals of sampled functions, and a registry of Sobolev-type
inequalities evaluated over a deterministic corpus of test functions.
"""

from verifylab.mesh import (
    Domain,
    GridSpec,
    MeasureSpec,
    SampledFunction,
    build_grid,
    cell_weights,
    integrate,
    make_domain,
    support_measure,
)
from verifylab.rearrange import (
    RearrangementProfile,
    distribution,
    identity_residuals,
    log_grid,
    oscillation_curve,
    rearrange,
)

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "GridSpec",
    "MeasureSpec",
    "RearrangementProfile",
    "SampledFunction",
    "build_grid",
    "cell_weights",
    "distribution",
    "identity_residuals",
    "integrate",
    "log_grid",
    "make_domain",
    "oscillation_curve",
    "rearrange",
    "support_measure",
]
