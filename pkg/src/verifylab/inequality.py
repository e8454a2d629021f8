"""Registry of inequalities and identities, admissible regions, and evaluation.

Every check reduces to one scalar ratio ``lhs / rhs`` compared against a
budget (the empirical stand-in for an unspecified constant).  Pointwise
families report the max over the t-grid of ``lhs(t) / rhs(t)``; cumulative
families do the same for their integrated forms; norm inequalities report the
single norm ratio; identities report their max relative residual.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import ndimage
from scipy.signal import fftconvolve
from scipy.special import ndtri

from verifylab.calculus import (
    gradient_magnitude,
    higher_derivative_magnitude,
    laplacian,
    level_gradient_cumulant,
)
from verifylab.errors import InadmissibleError
from verifylab.functionals import (
    INF,
    Anchor,
    BesovParams,
    LorentzExponents,
    besov_seminorm,
    hbw_functional,
    llogl_norm,
    lorentz_norm,
    modulus_table,
    normalized_linf_q,
    oscillation_norm,
)
from verifylab.mesh import Domain, SampledFunction, integrate, support_domain
from verifylab.rearrange import RearrangementProfile, identity_residuals, log_grid, rearrange


class InequalityId(str, enum.Enum):
    SOB1 = "SOB1"
    SOB2_PT = "SOB2_PT"
    SOBK = "SOBK"
    SOBSUP = "SOBSUP"
    DAV1 = "DAV1"
    STEINE = "STEINE"
    DEACUERDO = "DEACUERDO"
    HBR = "HBR"
    HBW_CMP = "HBW_CMP"
    COMPARADA = "COMPARADA"
    GN_STRONG = "GN_STRONG"
    GN_CLASSICAL = "GN_CLASSICAL"
    GN_WEAK = "GN_WEAK"
    V2 = "V2"
    V3 = "V3"
    V4 = "V4"
    V5_INT = "V5_INT"
    ISO = "ISO"
    V6_GAUSS = "V6_GAUSS"
    FRAC_NUEVA = "FRAC_NUEVA"
    FRAC_THM = "FRAC_THM"
    FRAC_NUEVA2 = "FRAC_NUEVA2"
    FRAC_LORENTZ = "FRAC_LORENTZ"
    STEIN2 = "STEIN2"
    STEIN3 = "STEIN3"
    ID_FROM = "ID_FROM"
    ID_PRODUCT = "ID_PRODUCT"
    ID_NUMER = "ID_NUMER"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: str) -> "InequalityId":
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(f"unknown inequality id {name!r}") from None


I = InequalityId

FIRST_ORDER = {I.SOB1, I.SOB2_PT, I.DAV1, I.HBR, I.HBW_CMP, I.COMPARADA, I.GN_STRONG, I.GN_CLASSICAL,
               I.GN_WEAK, I.V2, I.V3, I.V4, I.V5_INT, I.ISO, I.V6_GAUSS}
FRACTIONAL = {I.FRAC_NUEVA, I.FRAC_THM, I.FRAC_NUEVA2, I.FRAC_LORENTZ}
IDENTITIES = {I.ID_FROM, I.ID_PRODUCT, I.ID_NUMER}
STEINERBERGER = {I.STEIN2, I.STEIN3}
POINTWISE = {I.SOB2_PT, I.V2, I.V3, I.FRAC_NUEVA, I.V6_GAUSS}
CUMULATIVE = {I.DAV1, I.V4, I.V5_INT}
# ids whose two sides scale identically under x -> x/r (Lebesgue)
SCALE_INVARIANT = {I.SOB1, I.SOBK, I.SOBSUP, I.GN_STRONG, I.GN_CLASSICAL, I.GN_WEAK, I.FRAC_THM, I.FRAC_NUEVA2,
                   I.FRAC_LORENTZ, I.HBR, I.COMPARADA, I.STEINE, I.DEACUERDO, I.SOB2_PT, I.V2, I.V3, I.V4,
                   I.DAV1, I.V5_INT, I.ISO, I.FRAC_NUEVA}


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


@dataclass(frozen=True)
class InequalityParams:
    n: int
    k: int = 1
    exps: LorentzExponents = field(default_factory=lambda: LorentzExponents(1.0, 1.0))
    besov: BesovParams | None = None
    omega_measure: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def p(self) -> float:
        return self.exps.p

    @property
    def q(self) -> float:
        return self.exps.q

    def inverse_p_bar(self, fractional: bool = False) -> float:
        """``1/p_bar = 1/p - k/n`` (``- alpha/n`` for fractional ids)."""
        if fractional:
            if self.besov is None:
                raise ValueError("fractional exponent needs Besov parameters")
            val = 1.0 / self.besov.p - self.besov.alpha / self.n
        else:
            val = 1.0 / self.p - self.k / self.n
        return 0.0 if abs(val) < 1e-12 else val

    def p_bar(self, fractional: bool = False) -> float:
        inv = self.inverse_p_bar(fractional)
        return INF if inv == 0 else 1.0 / inv

    def as_dict(self) -> dict:
        b = self.besov
        return {
            "n": self.n,
            "k": self.k,
            "p": self.p,
            "q": self.q,
            "alpha": b.alpha if b else None,
            "r": (b.r if b.r is not None else b.p) if b else None,
        }


def _sobolev_region(n: int, k: int, p: float, q: float) -> bool:
    """``(p, q) in (1, n/k] x [1, inf]`` or ``p = q = 1``, for ``k < n``; ``p = q = 1`` for ``k = n``."""
    if k > n or p < 1 or q < 1:
        return False
    if k == n:
        return p == 1 and q == 1
    return (1 < p <= n / k * (1 + 1e-12)) or (p == 1 and q == 1)


def admissible(id: InequalityId, params: InequalityParams) -> bool:
    id = InequalityId(id)
    n, k, p, q = params.n, params.k, params.p, params.q
    if id in FIRST_ORDER and k != 1:
        return False
    if id == I.SOB1:
        return _sobolev_region(n, 1, p, q)
    if id == I.SOBK:
        return _sobolev_region(n, k, p, q)
    if id == I.SOBSUP:
        return k <= n and 1 <= p <= n / k * (1 + 1e-12) and q == p
    if id == I.STEINE:
        return n > 2 and k == 2 and _close(p, n / 2) and q == 1
    if id == I.DEACUERDO:
        return k == n and p == 1 and q == 1
    if id in (I.HBR, I.COMPARADA):
        if not _close(p, n):
            return False
        return _sobolev_region(n, 1, n, q) and (id == I.HBR or q == 1)
    if id == I.HBW_CMP:
        return n >= 2 and _close(q, n)
    if id in FRACTIONAL:
        b = params.besov
        if b is None:
            return False
        cap = n / b.alpha * (1 + 1e-12)
        r = b.p if b.r is None else b.r
        if id == I.FRAC_NUEVA:
            return True
        if id == I.FRAC_THM:
            return 1 <= b.p <= cap and _close(r, b.p)
        if id == I.FRAC_NUEVA2:
            return _close(b.p, n / b.alpha) and _close(r, b.p)
        return 1 <= b.p <= cap and (b.p > 1 or r == 1)
    if id in STEINERBERGER:
        return n == 2
    return True  # first-order symmetrization forms and identities carry no region


def inadmissible_reason(id: InequalityId, params: InequalityParams) -> str:
    id = InequalityId(id)
    n, k, p, q = params.n, params.k, params.p, params.q
    if id in FIRST_ORDER and k != 1:
        return f"{id} is a first-order inequality (k=1), got k={k}"
    if id == I.SOB1:
        if p == 1 and q != 1:
            return f"inadmissible (first-order Sobolev excludes p=1, q!=1; got n={n}, p={p:g}, q={q:g})"
        return f"inadmissible (first-order Sobolev needs 1 < p <= n or p = q = 1; got n={n}, p={p:g}, q={q:g})"
    if id == I.SOBK:
        return (f"inadmissible (order-k Sobolev needs k < n with 1 < p <= n/k or p = q = 1, or k = n with "
                f"p = q = 1; got n={n}, k={k}, p={p:g}, q={q:g})")
    if id in FRACTIONAL and params.besov is None:
        return f"{id} needs Besov parameters (alpha, p, r, q)"
    return f"inadmissible parameters for {id}: n={n}, k={k}, p={p:g}, q={q:g}"


# -- results ---------------------------------------------------------------------


def _json_num(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class CheckResult:
    id: InequalityId
    params: InequalityParams
    function_id: str
    lhs: float
    rhs: float
    ratio: float
    budget: float
    passed: bool
    notes: str = ""
    skipped: bool = False
    extra: dict = field(default_factory=dict)

    def with_budget(self, budget: float) -> "CheckResult":
        self.budget = float(budget)
        self.passed = bool(self.skipped or self.ratio <= budget)
        return self

    def to_json(self) -> dict:
        d = {"id": str(self.id), "function_id": self.function_id}
        d.update({k: _json_num(v) if k != "n" and k != "k" else v for k, v in self.params.as_dict().items()})
        d.update({"lhs": _json_num(self.lhs), "rhs": _json_num(self.rhs), "ratio": _json_num(self.ratio),
                  "budget": _json_num(self.budget), "pass": bool(self.passed)})
        if self.notes:
            d["notes"] = self.notes
        return d


def _result(id, params, f, lhs, rhs, budget, notes="", strict=False, **extra) -> CheckResult:
    if rhs > 0:
        ratio = lhs / rhs
    elif lhs > 0:
        ratio = INF
        notes = (notes + "; " if notes else "") + "zero right-hand side with nonzero left-hand side"
    else:
        ratio = 0.0
    passed = ratio < budget if strict else ratio <= budget
    return CheckResult(id, params, f.label, float(lhs), float(rhs), float(ratio), float(budget), bool(passed),
                       notes, extra=extra)


def _pointwise(id, params, f, t, lhs, rhs, budget, notes="") -> CheckResult:
    """Max over grid points of ``lhs(t)/rhs(t)``; points where both vanish are skipped."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if np.any((rhs <= 0) & (lhs > 0)):
        j = int(np.flatnonzero((rhs <= 0) & (lhs > 0))[0])
        return _result(id, params, f, lhs[j], 0.0, budget, f"t={t[j]:.6g}")
    ok = rhs > 0
    if not ok.any():
        return _result(id, params, f, 0.0, 0.0, budget, "both sides vanish on the grid")
    r = np.where(ok, lhs / np.where(ok, rhs, 1.0), -np.inf)
    j = int(np.argmax(r))
    note = f"argmax t={t[j]:.6g}" + (f"; {notes}" if notes else "")
    return _result(id, params, f, lhs[j], rhs[j], budget, note, t_star=float(t[j]))


# -- gaussian profile ------------------------------------------------------------


def gaussian_profile(t):
    """``I(t) = phi(N^-1(t))``, the Gaussian isoperimetric profile on ``(0, 1)``."""
    arr = np.asarray(t, dtype=float)
    if np.any((arr <= 0) | (arr >= 1)):
        raise ValueError("the Gaussian isoperimetric profile is defined for 0 < t < 1")
    # evaluate on the lower half so that I(t) == I(1 - t) exactly
    z = ndtri(np.minimum(arr, 1.0 - arr))
    out = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    return float(out) if np.ndim(t) == 0 else out


# -- evaluation context ----------------------------------------------------------


class EvalContext:
    """Lazily computed profiles and derivative fields shared across checks of one function."""

    def __init__(self, f: SampledFunction, t_grid=None):
        self.f = f
        self.t_grid = log_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
        self._dk: dict[int, object] = {}
        self._dk_profile: dict[int, RearrangementProfile] = {}

    @cached_property
    def profile(self) -> RearrangementProfile:
        return rearrange(self.f, self.t_grid)

    @cached_property
    def grad(self):
        return gradient_magnitude(self.f)

    @cached_property
    def grad_profile(self) -> RearrangementProfile:
        return self.derivative_profile(1)

    @cached_property
    def grad_l1(self) -> float:
        return integrate(self.grad.magnitude)

    def derivative(self, k: int):
        if k == 1:
            return self.grad
        if k not in self._dk:
            self._dk[k] = higher_derivative_magnitude(self.f, k)
        return self._dk[k]

    def derivative_profile(self, k: int) -> RearrangementProfile:
        if k not in self._dk_profile:
            self._dk_profile[k] = rearrange(self.derivative(k).magnitude, self.t_grid)
        return self._dk_profile[k]

    @cached_property
    def cumulant(self) -> np.ndarray:
        return level_gradient_cumulant(self.f, self.profile, self.grad)

    @cached_property
    def residuals(self):
        return identity_residuals(self.profile)


def _lorentz(profile: RearrangementProfile, p: float, q: float) -> float:
    return lorentz_norm(profile, LorentzExponents(p, q))


def _conjugate(n: int) -> float:
    return INF if n == 1 else n / (n - 1.0)


def _cumulative_osc_moment(profile: RearrangementProfile, n: int) -> np.ndarray:
    """``int_0^t osc(s) s^(1 - 1/n) ds/s`` at every grid point.

    Log-trapezoid with the support inserted as a node (left and right limits
    of ``f*`` on either side of it); below the first node ``osc`` is frozen,
    except for ``n = 1`` where ``int_0^a osc ds/s = sup - f**(a)`` exactly.
    """
    t = profile.t_grid
    e = 1.0 - 1.0 / n
    supp = profile.supp
    cuts = np.union1d(t, [supp]) if t[0] < supp < t[-1] else t
    left = np.asarray(cuts[:-1])
    right = np.asarray(cuts[1:])
    g_left = profile.osc_at(left) * left**e
    r_fss = profile.f_star_star_at(right)
    r_fs = profile.f_star_at(np.nextafter(right, 0.0))
    g_right = np.maximum(r_fss - r_fs, 0.0) * right**e
    panels = 0.5 * (g_left + g_right) * np.log(right / left)
    a = float(cuts[0])
    osc_a = float(profile.osc_at(a))
    if n == 1:
        head = max(profile.sup_norm - float(profile.f_star_star_at(a)), 0.0)
    else:
        head = osc_a * a**e / e
    cum = np.concatenate([[head], head + np.cumsum(panels)])
    return cum[np.searchsorted(cuts, t)]


def _stieltjes_moment(profile: RearrangementProfile, n: int) -> np.ndarray:
    """``int_0^t s^(1 - 1/n) d(-f*)(s)`` summed exactly over the step drops of ``f*``."""
    t = profile.t_grid
    if profile.is_zero:
        return np.zeros_like(t)
    lv = profile.levels
    drops = lv - np.append(lv[1:], 0.0)
    at = profile.edges[1:]
    cum = np.concatenate([[0.0], np.cumsum(drops * at ** (1.0 - 1.0 / n))])
    return cum[np.searchsorted(at, t, side="right")]


def _require_measure(id: InequalityId, f: SampledFunction):
    want = "gaussian" if id == I.V6_GAUSS else "lebesgue"
    if id in IDENTITIES:
        return
    if f.measure.kind != want:
        raise InadmissibleError(f"{id} needs {want} measure, got {f.measure.kind}")


def evaluate_check(id, f: SampledFunction, params: InequalityParams, budget: float = INF,
                   t_grid=None, context: EvalContext | None = None, tolerance: float = 1e-3) -> CheckResult:
    """Evaluate one inequality (or identity) on ``f``.

    For identities the budget is the residual tolerance and the check passes
    when the residual is strictly below it; ``tolerance`` is used when no
    budget is given.
    """
    id = InequalityId(id)
    if not admissible(id, params):
        raise InadmissibleError(inadmissible_reason(id, params))
    _require_measure(id, f)
    if f.dim != params.n:
        raise InadmissibleError(f"function dimension {f.dim} differs from n={params.n}")
    ctx = context if context is not None and context.f is f else EvalContext(f, t_grid)
    if id in IDENTITIES and math.isinf(budget):
        budget = tolerance
    prof = ctx.profile
    if prof.is_zero:
        return CheckResult(id, params, f.label, 0.0, 0.0, math.nan, float(budget), True,
                           "zero function: ratio undefined, skipped", skipped=True)
    n, k, p, q = params.n, params.k, params.p, params.q
    t = ctx.t_grid

    if id in IDENTITIES:
        res = ctx.residuals
        val = {I.ID_FROM: res.tail, I.ID_PRODUCT: res.product, I.ID_NUMER: res.parts}[id]
        return _result(id, params, f, val, 1.0, budget, "max residual relative to sup norm", strict=True)

    if id in (I.SOB1, I.SOBK, I.SOBSUP):
        kk = 1 if id == I.SOB1 else k
        lhs = _lorentz(prof, params.p_bar(), q)
        rhs = _lorentz(ctx.derivative_profile(kk), p, q)
        return _result(id, params, f, lhs, rhs, budget, f"p_bar={params.p_bar():g}")
    if id == I.STEINE:
        return _result(id, params, f, prof.sup_norm, _lorentz(ctx.derivative_profile(2), n / 2.0, 1.0), budget)
    if id == I.DEACUERDO:
        return _result(id, params, f, prof.sup_norm, integrate(ctx.derivative(n).magnitude), budget)
    if id == I.HBR:
        lhs = oscillation_norm(prof, q, params.omega_measure)
        return _result(id, params, f, lhs, _lorentz(ctx.grad_profile, n, q), budget)
    if id == I.COMPARADA:
        rhs = _lorentz(ctx.grad_profile, n, 1.0)
        lhs = _lorentz(prof, INF, 1.0)
        return _result(id, params, f, lhs, rhs, budget, f"sup-norm ratio {prof.sup_norm / rhs:.6g}")
    if id == I.HBW_CMP:
        A = params.omega_measure or prof.supp
        return _result(id, params, f, hbw_functional(prof, A, n), normalized_linf_q(prof, A, n), budget,
                       f"|Omega|={A:.6g}")
    if id in (I.GN_STRONG, I.GN_CLASSICAL, I.GN_WEAK):
        nc = _conjugate(n)
        if id == I.GN_STRONG:
            lhs = _lorentz(prof, nc, 1.0)
        elif id == I.GN_WEAK:
            lhs = _lorentz(prof, nc, INF)
        elif n == 1:
            # L^inf through the identity L^inf = L(inf, 1) on compact support
            lhs = _lorentz(prof, INF, 1.0)
        else:
            lhs = _lorentz(prof, nc, nc)
        return _result(id, params, f, lhs, ctx.grad_l1, budget, f"n'={nc:g}")

    gss = ctx.grad_profile.f_star_star
    if id in (I.SOB2_PT, I.V2):
        return _pointwise(id, params, f, t, prof.osc, t ** (1.0 / n) * gss, budget)
    if id == I.V3:
        return _pointwise(id, params, f, t, prof.osc * t ** (1.0 - 1.0 / n), ctx.grad_profile.primitive(t), budget)
    if id in (I.DAV1, I.V4):
        return _pointwise(id, params, f, t, _cumulative_osc_moment(prof, n), ctx.grad_profile.primitive(t),
                          budget)
    if id == I.V5_INT:
        return _pointwise(id, params, f, t, _stieltjes_moment(prof, n), ctx.cumulant, budget)
    if id == I.ISO:
        lhs = prof.mass * prof.supp ** (-1.0 / n)
        return _result(id, params, f, lhs, ctx.grad_l1, budget, f"t=|supp f|={prof.supp:.6g}")
    if id == I.V6_GAUSS:
        keep = t < 1.0
        tt = t[keep]
        rhs = tt / gaussian_profile(tt) * gss[keep]
        return _pointwise(id, params, f, tt, prof.osc[keep], rhs, budget)

    if id in FRACTIONAL:
        b = params.besov
        anchor = Anchor(b.p, None if id in (I.FRAC_THM, I.FRAC_NUEVA2) else b.r)
        if id == I.FRAC_NUEVA:
            table = modulus_table(f, anchor)
            return _pointwise(id, params, f, t, prof.osc * t ** (1.0 / b.p), table(t ** (1.0 / n)), budget,
                              f"anchor {anchor}")
        p_bar = params.p_bar(fractional=True)
        lhs = _lorentz(prof, p_bar, b.q)
        rhs = besov_seminorm(f, BesovParams(b.alpha, b.p, b.q, anchor.r))
        return _result(id, params, f, lhs, rhs, budget, f"p_bar={p_bar:g}; anchor {anchor}")

    if id in STEINERBERGER:
        return steinerberger_results(f, support_domain(f))[id].with_budget(budget)

    raise ValueError(f"no evaluator for {id}")  # pragma: no cover


# -- Steinerberger kernel ------------------------------------------------------


def _singular_cell_kernel(h: float, area: float) -> float:
    """Cell average of ``max(1, log(area / |z|^2))`` over a square of side ``h`` centred at 0.

    The mean of ``log|z|^2`` over ``[-a, a]^2`` is ``log(2 a^2) - 3 + pi/2``.
    """
    a = h / 2.0
    return max(1.0, math.log(area) - (math.log(2.0 * a * a) - 3.0 + math.pi / 2.0))


def _laplacian_on_domain(f: SampledFunction, mask: np.ndarray) -> np.ndarray:
    """``|Delta f|`` on the cells of ``mask``.

    Cells whose 5-point stencil leaves the domain take the value of the
    nearest cell whose stencil stays inside: ``f`` is only C^2 inside Omega,
    and the stencil across the boundary sees the zero extension instead.
    """
    lap = np.abs(np.asarray(laplacian(f).values))
    interior = ndimage.binary_erosion(mask, structure=ndimage.generate_binary_structure(f.dim, 1))
    if not interior.any():
        raise ValueError("domain too thin for the Laplacian stencil")
    _, idx = ndimage.distance_transform_edt(~interior, return_indices=True)
    filled = lap[tuple(idx)]
    return np.where(mask, filled, 0.0)


def steinerberger_results(f: SampledFunction, domain: Domain | None = None) -> dict:
    """Both Steinerberger-type ratios for ``f`` vanishing outside ``domain``.

    STEIN2: ``max|f|`` against ``max_x int max(1, log(|Omega|/|x-y|^2)) |Delta f(y)| dy``.
    STEIN3: ``max|f|`` against ``||Delta f||_1 + ||Delta f||_{L log L}``.
    """
    if f.dim != 2:
        raise InadmissibleError(f"the logarithmic kernel inequality is two-dimensional, got n={f.dim}")
    if domain is None:
        domain = support_domain(f)
    mask = np.asarray(domain.mask, dtype=bool)
    params = InequalityParams(2)
    lhs = float(np.abs(f.values)[mask].max(initial=0.0))
    if np.any(np.asarray(f.values)[~mask] != 0):
        raise ValueError("f must vanish outside the domain")
    if not np.any(f.values):
        out = {}
        for id in STEINERBERGER:
            out[id] = CheckResult(id, params, f.label, 0.0, 0.0, math.nan, INF, True,
                                  "zero function: ratio undefined, skipped", skipped=True)
        return out
    h = f.grid.spacing
    area = float(domain.measure)
    w = f.weights
    dens = _laplacian_on_domain(f, mask) * w

    m = f.grid.points_per_axis
    off = np.arange(-(m - 1), m) * h
    dx, dy = np.meshgrid(off, off, indexing="ij")
    r2 = dx * dx + dy * dy
    with np.errstate(divide="ignore"):
        kern = np.maximum(1.0, np.log(area / r2))
    kern[m - 1, m - 1] = _singular_cell_kernel(h, area)
    conv = fftconvolve(dens, kern, mode="same")
    # 'same' aligns offsets for odd kernels of size 2m-1 around an m-grid
    kernel_vals = np.where(mask, conv, -np.inf)
    j = int(np.argmax(kernel_vals))
    kmax = float(kernel_vals.ravel()[j])
    centre = tuple(s // 2 for s in f.grid.shape)
    at_centre = float(conv[centre])

    lap_f = f.with_values(np.where(mask, _laplacian_on_domain(f, mask), 0.0), label=f"lap({f.label})")
    lap_prof = rearrange(lap_f, log_grid())
    l1 = lap_prof.mass
    zyg = llogl_norm(lap_prof, area)

    s2 = _result(I.STEIN2, params, f, lhs, kmax, INF, f"|Omega|={area:.6g}; kernel at centre {at_centre:.6g}",
                 kernel_max=kmax, kernel_at_centre=at_centre,
                 argmax=tuple(int(i) for i in np.unravel_index(j, f.grid.shape)))
    s3 = _result(I.STEIN3, params, f, lhs, l1 + zyg, INF, f"L1={l1:.6g}; LlogL={zyg:.6g}", lap_l1=l1,
                 lap_llogl=zyg)
    return {I.STEIN2: s2, I.STEIN3: s3}


def steinerberger_check(f: SampledFunction, domain: Domain) -> CheckResult:
    """The kernel form as a CheckResult; the norm form rides along in ``extra``."""
    res = steinerberger_results(f, domain)
    out = res[I.STEIN2]
    s3 = res[I.STEIN3]
    out.extra = dict(out.extra, stein3_ratio=s3.ratio, stein3_rhs=s3.rhs)
    return out


# -- parameter lattices and budget keys ------------------------------------------

FRACTIONAL_ALPHAS = (0.3, 0.5, 0.7)


def _lorentz_params(n, k, p, q) -> InequalityParams:
    return InequalityParams(n, k, LorentzExponents(p, q))


def _besov_params(n, alpha, p, q=1.0, r=None) -> InequalityParams:
    return InequalityParams(n, 1, LorentzExponents(p, q), BesovParams(alpha, p, q, r))


def parameter_lattice(id, n: int) -> list[InequalityParams]:
    """The default admissible parameter sets swept for ``id`` in dimension ``n``."""
    id = InequalityId(id)
    out: list[InequalityParams] = []
    qs = (1.0, 2.0, INF)
    if id == I.SOB1:
        out = [_lorentz_params(n, 1, p, q) for p in sorted({1.0, 1.5, 2.0, float(n)}) for q in qs]
    elif id == I.SOBK:
        k = min(2, n)
        out = [_lorentz_params(n, k, p, q) for p in sorted({1.0, 1.5, 2.0, n / k}) for q in qs]
    elif id == I.SOBSUP:
        out = [_lorentz_params(n, k, p, p) for k in range(1, min(2, n) + 1) for p in sorted({1.0, 1.5, 2.0, n / k})]
    elif id == I.STEINE:
        out = [_lorentz_params(n, 2, n / 2.0, 1.0)] if n > 2 else []
    elif id == I.DEACUERDO:
        out = [_lorentz_params(n, n, 1.0, 1.0)]
    elif id == I.HBR:
        out = [_lorentz_params(n, 1, float(n), q) for q in qs]
    elif id == I.COMPARADA:
        out = [_lorentz_params(n, 1, float(n), 1.0)]
    elif id == I.HBW_CMP:
        out = [_lorentz_params(n, 1, float(n), float(n))]
    elif id == I.FRAC_THM:
        out = [_besov_params(n, a, p) for a in FRACTIONAL_ALPHAS for p in (1.0, 2.0)]
    elif id == I.FRAC_NUEVA2:
        out = [_besov_params(n, a, n / a) for a in FRACTIONAL_ALPHAS]
    elif id == I.FRAC_NUEVA:
        out = [_besov_params(n, 0.5, p) for p in (1.0, 2.0)]
    elif id == I.FRAC_LORENTZ:
        # Lorentz-anchored moduli sort every shifted difference; kept to n = 1 by default
        out = [_besov_params(n, 0.5, 1.0, 1.0, 1.0)] + [_besov_params(n, 0.5, 1.5, 1.0, r) for r in (1.0, INF)]
        if n > 1:
            out = []
    else:
        out = [InequalityParams(n)]
    return [p for p in out if admissible(id, p)]


def budget_key(id, params: InequalityParams) -> str:
    d = params.as_dict()
    key = f"{InequalityId(id)}|n={d['n']}|k={d['k']}|p={d['p']:g}|q={d['q']:g}"
    if d["alpha"] is not None:
        key += f"|alpha={d['alpha']:g}|r={d['r']:g}"
    return key


def applies_to(id, f: SampledFunction) -> bool:
    """Whether ``id`` is evaluated on ``f`` in corpus sweeps (measure class and dimension)."""
    id = InequalityId(id)
    if id in IDENTITIES:
        return True
    if id == I.V6_GAUSS:
        return f.measure.kind == "gaussian"
    if f.measure.kind != "lebesgue":
        return False
    if id in STEINERBERGER:
        return f.dim == 2
    return True
