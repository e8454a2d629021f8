"""Norms and seminorms computed from rearrangement profiles and moduli of continuity.

All ``int ... dt/t`` integrals are trapezoidal in ``log t`` on the profile's
grid, with closed forms below the first node (where ``f*`` and ``f**`` are
frozen at their value there) and beyond the support (where ``f* = 0`` and
``f** = mass/t``).  The support measure is always inserted as a node, using
the left limit ``f*(supp-)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from verifylab.mesh import SampledFunction
from verifylab.rearrange import RearrangementProfile, log_trapezoid

INF = math.inf


@dataclass(frozen=True)
class LorentzExponents:
    p: float
    q: float

    def __post_init__(self):
        if not self.p >= 1 or not self.q >= 1:
            raise ValueError(f"Lorentz exponents need p >= 1 and q >= 1, got ({self.p}, {self.q})")


@dataclass(frozen=True)
class BesovParams:
    alpha: float
    p: float
    q: float = 1.0
    r: float | None = None  # Lorentz anchor L(p, r); None means plain L^p

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"smoothness alpha must lie in (0, 1), got {self.alpha}")
        if not self.p >= 1 or math.isinf(self.p):
            raise ValueError(f"anchor exponent p must be finite and >= 1, got {self.p}")
        if not self.q >= 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.r is not None and not self.r >= 1:
            raise ValueError(f"anchor index r must be >= 1, got {self.r}")

    @property
    def anchor(self) -> "Anchor":
        return Anchor(self.p, self.r)


@dataclass(frozen=True)
class Anchor:
    """The space a modulus of continuity is measured in: L^p, or L(p, r)."""

    p: float
    r: float | None = None

    def __post_init__(self):
        if not 1 <= self.p < INF:
            raise ValueError(f"anchor exponent must be finite and >= 1, got {self.p}")

    @property
    def is_lebesgue(self) -> bool:
        return self.r is None or self.r == self.p

    def __str__(self):
        return f"L^{self.p:g}" if self.is_lebesgue else f"L({self.p:g},{self.r:g})"


def fundamental_function(anchor: Anchor, t: float) -> float:
    if t <= 0:
        raise ValueError("fundamental function needs t > 0")
    return t ** (1.0 / anchor.p)


# -- profile-based functionals ---------------------------------------------------


def _nodes(profile: RearrangementProfile, a: float, b: float):
    """Nodes ``a, grid points in (a, b), b`` with ``f*`` and ``f**`` values.

    The value of ``f*`` at ``b`` is the left limit, so a panel ending at the
    support measure sees the last nonzero level rather than zero.
    """
    t = profile.t_grid
    nodes = np.concatenate([[a], t[(t > a) & (t < b)], [b]])
    fs = profile.f_star_at(nodes)
    fs[-1] = profile.f_star_at(np.nextafter(b, 0.0))
    fss = profile.f_star_star_at(nodes)
    return nodes, fs, np.maximum(fss, fs)


def _head_end(profile: RearrangementProfile, b: float) -> float:
    return min(float(profile.t_grid[0]), b)


def lorentz_norm(profile: RearrangementProfile, exps: LorentzExponents) -> float:
    p, q = exps.p, exps.q
    if profile.is_zero:
        return 0.0
    supp = profile.supp
    a = _head_end(profile, supp)
    nodes, fs, fss = _nodes(profile, a, supp)
    head_level = float(fss[0])

    if not math.isinf(p):
        g = fs * nodes ** (1.0 / p)
        if math.isinf(q):
            return float(max(g.max(), head_level * a ** (1.0 / p)))
        head = head_level**q * (p / q) * a ** (q / p)
        return (head + log_trapezoid(nodes, g**q)) ** (1.0 / q)

    osc = fss - fs
    tail_level = profile.mass / supp
    if math.isinf(q):
        return float(max(osc.max(), tail_level))
    # int_0^a osc ds/s = sup - f**(a) exactly; weight by osc(a)^(q-1) for q > 1
    head = (profile.sup_norm - head_level) * float(osc[0]) ** (q - 1)
    tail = tail_level**q / q
    return (max(head, 0.0) + log_trapezoid(nodes, osc**q) + tail) ** (1.0 / q)


def llogl_norm(profile: RearrangementProfile, omega_measure: float) -> float:
    """Zygmund functional ``int_0^|Omega| f*(s) log(e|Omega|/s) ds``."""
    if not omega_measure > 0:
        raise ValueError("omega_measure must be positive")
    if profile.is_zero:
        return 0.0
    A = float(omega_measure)
    b = min(A, profile.supp)
    a = _head_end(profile, b)
    nodes, fs, fss = _nodes(profile, a, b)
    head = float(fss[0]) * a * (2.0 + math.log(A / a))
    return head + log_trapezoid(nodes, fs * nodes * np.log(math.e * A / nodes))


def hbw_functional(profile: RearrangementProfile, omega_measure: float, n: int) -> float:
    """``{int_0^|Omega| (f**(s) / (1 + log(|Omega|/s)))^n ds/s}^(1/n)``, n >= 2."""
    if n < 2:
        raise ValueError("the logarithmic functional diverges for n = 1")
    if not omega_measure > 0:
        raise ValueError("omega_measure must be positive")
    if profile.is_zero:
        return 0.0
    A = float(omega_measure)
    a = min(float(profile.t_grid[0]), A)
    t = profile.t_grid
    nodes = np.concatenate([[a], t[(t > a) & (t < A)], [A]])
    fss = profile.f_star_star_at(nodes)
    u_a = 1.0 + math.log(A / a)
    head = float(fss[0]) ** n * u_a ** (1 - n) / (n - 1)
    body = log_trapezoid(nodes, (fss / (1.0 + np.log(A / nodes))) ** n)
    return (head + body) ** (1.0 / n)


def oscillation_norm(profile: RearrangementProfile, q: float, upper: float | None = None) -> float:
    """``{int_0^upper osc^q ds/s}^(1/q)``; ``upper=None`` integrates to infinity."""
    if not q >= 1:
        raise ValueError("q must be >= 1")
    if upper is None:
        return lorentz_norm(profile, LorentzExponents(INF, q))
    if not upper > 0:
        raise ValueError("upper limit must be positive")
    if profile.is_zero:
        return 0.0
    A = float(upper)
    supp = profile.supp
    b = min(A, supp)
    a = _head_end(profile, b)
    nodes, fs, fss = _nodes(profile, a, b)
    osc = fss - fs
    mass = profile.mass
    if math.isinf(q):
        beyond = mass / supp if A > supp else 0.0
        return float(max(osc.max(), beyond))
    head = max(profile.sup_norm - float(fss[0]), 0.0) * float(osc[0]) ** (q - 1)
    beyond = mass**q * (supp**-q - A**-q) / q if A > supp else 0.0
    return (head + log_trapezoid(nodes, osc**q) + beyond) ** (1.0 / q)


def normalized_linf_q(profile: RearrangementProfile, omega_measure: float, q: float) -> float:
    """``{int_0^|Omega| osc^q ds/s}^(1/q) + mass/|Omega|``."""
    if not omega_measure > 0:
        raise ValueError("omega_measure must be positive")
    return oscillation_norm(profile, q, omega_measure) + profile.mass / float(omega_measure)


# -- step-function norms ---------------------------------------------------------


def step_lorentz_norm(values: np.ndarray, weight: float | np.ndarray, p: float, r: float) -> float:
    """Exact L(p, r) norm of a step function given by cell values and weights.

    On a step ``[T0, T1)`` of level ``a``, ``int (a t^(1/p))^r dt/t`` is
    ``a^r (p/r) (T1^(r/p) - T0^(r/p))``.
    """
    v = np.abs(np.asarray(values, dtype=float)).ravel()
    w = np.broadcast_to(weight, v.shape) if np.ndim(weight) else np.full(v.shape, float(weight))
    keep = v > 0
    v, w = v[keep], w[keep]
    if v.size == 0:
        return 0.0
    order = np.argsort(-v, kind="stable")
    v, w = v[order], w[order]
    edges = np.concatenate([[0.0], np.cumsum(w)])
    if math.isinf(r):
        return float(np.max(v * edges[1:] ** (1.0 / p)))
    pw = edges ** (r / p)
    return float(np.sum(v**r * (p / r) * np.diff(pw)) ** (1.0 / r))


def anchor_norm(values: np.ndarray, weight: float, anchor: Anchor) -> float:
    if anchor.is_lebesgue:
        v = np.abs(values)
        return float(np.sum(v**anchor.p) * weight) ** (1.0 / anchor.p)
    return step_lorentz_norm(values, weight, anchor.p, anchor.r)


# -- moduli of continuity --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModulusTable:
    """Cumulative max of ``||f(. + h) - f||_X`` over grid shifts sorted by ``|h|``."""

    lengths: np.ndarray  # distinct shift lengths, ascending, starting at one spacing
    w: np.ndarray  # running max up to each length
    saturation_length: float
    saturated: float
    spacing: float
    anchor: Anchor

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.lengths, t, side="right") - 1
        vals = np.where(idx >= 0, self.w[np.clip(idx, 0, None)], 0.0)
        below = t < self.lengths[0]
        vals = np.where(below, self.w[0] * t / self.lengths[0], vals)
        return np.where(t > self.saturation_length, np.maximum(vals, self.saturated), vals)


def _crop_support(values: np.ndarray) -> np.ndarray:
    nz = np.nonzero(values)
    if len(nz[0]) == 0:
        return values[tuple(slice(0, 0) for _ in range(values.ndim))]
    sl = tuple(slice(int(ix.min()), int(ix.max()) + 1) for ix in nz)
    return values[sl]


def _half_shifts(shape: tuple[int, ...]) -> np.ndarray:
    """Integer shifts ``s != 0`` with ``|s_i| < shape_i``, one of each ``+-s`` pair."""
    ranges = [np.arange(-(b - 1), b) for b in shape]
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, len(shape))
    keep = np.zeros(len(grid), dtype=bool)
    # lexicographically positive: first nonzero component > 0
    decided = np.zeros(len(grid), dtype=bool)
    for i in range(len(shape)):
        c = grid[:, i]
        keep |= ~decided & (c > 0)
        decided |= c != 0
    return grid[keep]


def _shift_difference(a: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Nonzero-candidate values of ``f(x + s) - f(x)`` for the cropped support ``a``."""
    shape = tuple(b + abs(int(si)) for b, si in zip(a.shape, s))
    c = np.zeros(shape)
    lo1 = tuple(max(int(si), 0) for si in s)
    lo2 = tuple(max(-int(si), 0) for si in s)
    c[tuple(slice(o, o + b) for o, b in zip(lo2, a.shape))] += a
    c[tuple(slice(o, o + b) for o, b in zip(lo1, a.shape))] -= a
    return c


def modulus_table(f: SampledFunction, anchor: Anchor) -> ModulusTable:
    if f.measure.kind != "lebesgue":
        raise ValueError("moduli of continuity need a translation-invariant (Lebesgue) measure")
    return _modulus_table_cached(f, anchor)


@lru_cache(maxsize=64)
def _modulus_table_cached(f: SampledFunction, anchor: Anchor) -> ModulusTable:
    h = f.grid.spacing
    weight = h**f.dim
    a = _crop_support(np.asarray(f.values))
    if a.size == 0:
        z = np.zeros(1)
        return ModulusTable(np.array([h]), z, h, 0.0, h, anchor)
    shifts = _half_shifts(a.shape)
    lengths = h * np.sqrt(np.sum(shifts.astype(float) ** 2, axis=1))
    order = np.argsort(lengths, kind="stable")
    shifts, lengths = shifts[order], lengths[order]

    if anchor.is_lebesgue:
        p = anchor.p
        total = float(np.sum(np.abs(a) ** p))
        vals = np.empty(len(shifts))
        for i, s in enumerate(shifts):
            vals[i] = _lp_shift(a, s, p, total)
        vals = (vals * weight) ** (1.0 / p)
        saturated = (2.0 * total * weight) ** (1.0 / p)
    else:
        vals = np.array([anchor_norm(_shift_difference(a, s), weight, anchor) for s in shifts])
        doubled = np.concatenate([a.ravel(), a.ravel()])
        saturated = anchor_norm(doubled, weight, anchor)
    if len(vals) == 0:
        # single-cell support: every nonzero shift is disjoint
        return ModulusTable(np.array([h]), np.array([saturated]), h, saturated, h, anchor)
    uniq, first = np.unique(lengths, return_index=True)
    # running max over all shifts no longer than each distinct length
    run = np.maximum.accumulate(vals)
    last = np.append(first[1:], len(vals)) - 1
    w = run[last]
    sat_len = float(h * np.sqrt(np.sum((np.array(a.shape) - 1.0) ** 2))) + h
    return ModulusTable(uniq, w, sat_len, saturated, h, anchor)


def _lp_shift(a: np.ndarray, s: np.ndarray, p: float, total: float) -> float:
    """``sum |a(x+s) - a(x)|^p`` using only the overlap region."""
    src = []
    dst = []
    for b, si in zip(a.shape, s):
        si = int(si)
        if abs(si) >= b:
            return 2.0 * total
        if si >= 0:
            src.append(slice(si, b))
            dst.append(slice(0, b - si))
        else:
            src.append(slice(0, b + si))
            dst.append(slice(-si, b))
    moved = a[tuple(src)]  # a(x + s) on the overlap
    here = a[tuple(dst)]  # a(x) on the overlap
    if p == 1.0:
        inside = np.abs(moved).sum() + np.abs(here).sum()
        diff = np.abs(moved - here).sum()
    elif p == 2.0:
        inside = (moved * moved).sum() + (here * here).sum()
        d = moved - here
        diff = (d * d).sum()
    else:
        inside = (np.abs(moved) ** p).sum() + (np.abs(here) ** p).sum()
        diff = (np.abs(moved - here) ** p).sum()
    return float(2.0 * total - inside + diff)


def modulus(f: SampledFunction, anchor: Anchor, t: float) -> float:
    if t < 0:
        raise ValueError("modulus needs t >= 0")
    if t == 0:
        return 0.0
    return float(modulus_table(f, anchor)(t))


@dataclass(frozen=True, eq=False)
class ModulusCurve:
    t_grid: np.ndarray
    w: np.ndarray
    anchor_space: Anchor
    fundamental_exponent: float


def modulus_curve(f: SampledFunction, anchor: Anchor, t_grid) -> ModulusCurve:
    t_grid = np.asarray(t_grid, dtype=float)
    table = modulus_table(f, anchor)
    return ModulusCurve(t_grid, table(t_grid), anchor, 1.0 / anchor.p)


def besov_seminorm(f: SampledFunction, params: BesovParams, points: int = 512) -> float:
    """``{int_0^inf [t^-alpha w(t, f)]^q dt/t}^(1/q)`` (sup form for q = inf).

    Below one spacing ``w`` is interpolated linearly to 0 and beyond the
    saturation length it is constant; both pieces integrate in closed form.
    """
    table = modulus_table(f, params.anchor)
    alpha, q = params.alpha, params.q
    h = table.spacing
    T = table.saturation_length
    t = np.geomspace(h, T, points)
    w = table(t)
    wh, W = float(w[0]), float(max(w[-1], table.saturated))
    g = t**-alpha * w
    if math.isinf(q):
        return float(max(g.max(), W * T**-alpha))
    head = (wh / h) ** q * h ** ((1 - alpha) * q) / ((1 - alpha) * q)
    tail = W**q * T ** (-alpha * q) / (alpha * q)
    return (head + log_trapezoid(t, g**q) + tail) ** (1.0 / q)
