"""Command-line driver: ``verifylab {rearrange,norm,verify,scan,report}``.

Exit codes: 0 pass, 1 check or regression failure, 2 usage or parse error,
3 data-invariant error.  Configuration resolves as defaults < config file
(flat ``key = value``) < flags, and every output file starts with the
resolved configuration as a comment.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from verifylab.corpus import PARAM_NAMES, FamilySpec, default_grid, load_manifest
from verifylab.errors import DataInvariantError, DegenerateFamilyError, InadmissibleError, ParseError
from verifylab.functionals import (
    INF,
    BesovParams,
    LorentzExponents,
    hbw_functional,
    llogl_norm,
    lorentz_norm,
    normalized_linf_q,
)
from verifylab.inequality import (
    EvalContext,
    InequalityId,
    InequalityParams,
    admissible,
    applies_to,
    budget_key,
    evaluate_check,
    inadmissible_reason,
    parameter_lattice,
)
from verifylab.mesh import build_grid, read_csv
from verifylab.rearrange import identity_residuals, log_grid, rearrange
from verifylab.search import SearchBudget, estimate_constant

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
REGRESSION_TOLERANCE = 0.05


@dataclass
class RunConfig:
    t_min: float = 1e-4
    t_max: float = 1e4
    t_points: int = 256
    half_width_lebesgue: float = 2.0
    half_width_gaussian: float = 8.0
    points_1d: int = 2001
    points_2d: int = 201
    points_nd: int = 41
    tolerance: float = 1e-3
    budget_file: str = ""
    corpus_file: str = ""
    out_dir: str = "."
    jobs: int = 1

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max:
            raise ValueError(f"need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.t_points < 5:
            raise ValueError("t_points must be >= 5")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def t_grid(self) -> np.ndarray:
        return log_grid(self.t_min, self.t_max, self.t_points)

    def points(self, dim: int) -> int:
        return {1: self.points_1d, 2: self.points_2d}.get(dim, self.points_nd)

    def half_width(self, measure: str) -> float:
        return self.half_width_gaussian if measure == "gaussian" else self.half_width_lebesgue

    def budget_path(self) -> Path:
        if self.budget_file:
            return Path(self.budget_file)
        return Path(str(resources.files("verifylab.data").joinpath("budgets.json")))

    def header(self) -> list[str]:
        return [f"{k} = {v}" for k, v in asdict(self).items()]


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, value: str):
    typ = _CONFIG_TYPES[name]
    if typ in ("int", int):
        return int(value)
    if typ in ("float", float):
        return float(value)
    return value


def read_config_file(path) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if "=" not in s:
                raise ParseError(f"expected key = value, got {s!r}", lineno)
            key, value = (x.strip() for x in s.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_TYPES:
                raise ParseError(f"unknown config key {key!r}", lineno)
            try:
                out[key] = _coerce(key, value)
            except ValueError as exc:
                raise ParseError(f"bad value for {key}: {value!r}", lineno) from exc
    return out


def resolve_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for name in _CONFIG_TYPES:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    return RunConfig(**values)


# -- output helpers --------------------------------------------------------------


def _comment_lines(cfg: RunConfig, prefix: str = "# ") -> str:
    return "".join(f"{prefix}{line}\n" for line in ["verifylab run configuration"] + cfg.header())


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(type(x))


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, float) and math.isnan(x):
        return None
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return _num(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path, data, cfg: RunConfig) -> None:
    payload = {"config": _jsonable(asdict(cfg)), **_jsonable(data)}
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True, default=_json_default) + "\n")


def svg_loglog(xs, ys, title: str, xlabel: str, ylabel: str, comment: str = "", width: int = 640,
               height: int = 420) -> str:
    """A minimal log-log line plot as SVG text; non-positive points are dropped."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[keep], ys[keep]
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if comment:
        out.append("<!--\n" + comment.replace("--", "- -") + "-->")
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
               f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">')
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')
    out.append(f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">{title}</text>')
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    if xs.size:
        lx0, lx1 = math.floor(np.log10(xs.min())), math.ceil(np.log10(xs.max()))
        ly0, ly1 = math.floor(np.log10(ys.min())), math.ceil(np.log10(ys.max()))
        lx1, ly1 = max(lx1, lx0 + 1), max(ly1, ly0 + 1)

        def px(x):
            return ml + (math.log10(x) - lx0) / (lx1 - lx0) * pw

        def py(y):
            return mt + ph - (math.log10(y) - ly0) / (ly1 - ly0) * ph

        xstep = max(1, (lx1 - lx0) // 8)
        for e in range(lx0, lx1 + 1, xstep):
            x = px(10.0**e)
            out.append(f'<line x1="{x:.1f}" y1="{mt + ph}" x2="{x:.1f}" y2="{mt + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{x:.1f}" y="{mt + ph + 18}" text-anchor="middle">1e{e}</text>')
        ystep = max(1, (ly1 - ly0) // 8)
        for e in range(ly0, ly1 + 1, ystep):
            y = py(10.0**e)
            out.append(f'<line x1="{ml - 5}" y1="{y:.1f}" x2="{ml}" y2="{y:.1f}" stroke="black"/>')
            out.append(f'<text x="{ml - 8}" y="{y + 4:.1f}" text-anchor="end">1e{e}</text>')
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{pts}"/>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- budgets ---------------------------------------------------------------------


def load_budgets(path) -> dict:
    path = Path(path)
    data = json.loads(path.read_text())
    data.setdefault("checks", {})
    data.setdefault("constants", {})
    return data


def save_budgets(path, data: dict) -> None:
    Path(path).write_text(json.dumps(_jsonable(data), indent=1, sort_keys=True) + "\n")


def _budget_value(entry) -> float:
    if entry is None:
        return INF
    v = entry["budget"] if isinstance(entry, dict) else entry
    return INF if v in ("inf", None) else float(v)


# -- subcommands -----------------------------------------------------------------


def run_rearrange(args, cfg: RunConfig) -> int:
    f = read_csv(args.input)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prof = rearrange(f, cfg.t_grid())
    header = "verifylab run configuration\n" + "\n".join(cfg.header()) + f"\ninput = {args.input}"
    prof.to_csv(out / "curve.csv", comment=header)
    res = identity_residuals(prof)
    write_json(out / "profile.json", {
        "input": str(args.input),
        "mass": prof.mass,
        "supp": prof.supp,
        "sup_norm": prof.sup_norm,
        "identity_residuals": res._asdict(),
    }, cfg)
    (out / "osc.svg").write_text(svg_loglog(prof.t_grid, prof.osc, "oscillation f** - f*", "t", "osc(t)",
                                            header + "\n"))
    print(f"mass={prof.mass:.10g} supp={prof.supp:.10g} sup_norm={prof.sup_norm:.10g}")
    print("identity residuals: " + ", ".join(f"{k}={v:.3e}" for k, v in res._asdict().items()))
    return EXIT_OK


def run_norm(args, cfg: RunConfig) -> int:
    f = read_csv(args.input)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prof = rearrange(f, cfg.t_grid())
    pairs = [(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (2.0, INF), (INF, 1.0), (INF, 2.0), (INF, INF)]
    if args.p is not None or args.q is not None:
        pairs.append((args.p if args.p is not None else 1.0, args.q if args.q is not None else 1.0))
    A = args.omega if args.omega is not None else prof.supp
    rows = [("lorentz", p, q, lorentz_norm(prof, LorentzExponents(p, q))) for p, q in pairs]
    if prof.supp > 0:
        rows.append(("llogl", "", "", llogl_norm(prof, A)))
        rows.append(("normalized_linf_q", "", 1.0, normalized_linf_q(prof, A, 1.0)))
        if f.dim >= 2:
            rows.append(("hbw", "", f.dim, hbw_functional(prof, A, f.dim)))
    with (out / "norms.csv").open("w", newline="") as fh:
        fh.write(_comment_lines(cfg) + f"# input = {args.input}\n# omega_measure = {A!r}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["functional", "p", "q", "value"])
        for name, p, q, v in rows:
            w.writerow([name, _fmt(p), _fmt(q), repr(float(v))])
            print(f"{name:>18} p={_fmt(p):>4} q={_fmt(q):>4}  {v:.10g}")
    return EXIT_OK


def _fmt(x) -> str:
    if x == "":
        return ""
    return "inf" if math.isinf(float(x)) else f"{float(x):g}"


def _explicit_params(args, id: InequalityId, n: int) -> InequalityParams | None:
    if all(getattr(args, k, None) is None for k in ("p", "q", "k", "alpha", "r")):
        return None
    p = args.p if args.p is not None else 1.0
    q = args.q if args.q is not None else 1.0
    k = args.k if args.k is not None else 1
    besov = None
    if args.alpha is not None:
        besov = BesovParams(args.alpha, p, q, args.r)
    return InequalityParams(n, k, LorentzExponents(p, q), besov)


def _param_sets(args, ids, n: int) -> list[tuple[InequalityId, InequalityParams]]:
    out = []
    for id in ids:
        explicit = _explicit_params(args, id, n)
        if explicit is not None:
            if not admissible(id, explicit):
                print(f"{id}: {inadmissible_reason(id, explicit)}; skipped")
                continue
            out.append((id, explicit))
        else:
            out.extend((id, p) for p in parameter_lattice(id, n))
    return out


def run_checks(tasks, functions, cfg: RunConfig, budgets: dict) -> list:
    """Evaluate ``(id, params)`` tasks on every applicable function; order-independent merge."""
    t_grid = cfg.t_grid()
    contexts = {f.label: EvalContext(f, t_grid) for f in functions}
    jobs = []
    for fi, f in enumerate(functions):
        for ti, (id, params) in enumerate(tasks):
            if params.n == f.dim and applies_to(id, f):
                jobs.append((fi, ti, f, id, params))

    def work(job):
        fi, ti, f, id, params = job
        key = budget_key(id, params)
        budget = cfg.tolerance if id.value.startswith("ID_") else _budget_value(budgets.get(key))
        res = evaluate_check(id, f, params, budget, context=contexts[f.label], tolerance=cfg.tolerance)
        return (fi, ti), res

    # derivative fields are shared across checks of one function; build them per function first
    if cfg.jobs > 1:
        by_function: dict[int, list] = {}
        for job in jobs:
            by_function.setdefault(job[0], []).append(job)
        with ThreadPoolExecutor(cfg.jobs) as pool:
            chunks = pool.map(lambda js: [work(j) for j in js], by_function.values())
            results = [r for chunk in chunks for r in chunk]
    else:
        results = [work(j) for j in jobs]
    results.sort(key=lambda kv: kv[0])
    return [r for _, r in results]


def _load_functions(cfg: RunConfig, n: int | None, labels: list[str] | None):
    entries = load_manifest(cfg.corpus_file or None)
    out = []
    for e in entries:
        if n is not None and e.dim != n:
            continue
        if labels and e.label not in labels:
            continue
        out.append(e.build(points=cfg.points(e.dim), half_width=cfg.half_width(e.grid["measure"])))
    return out


def _parse_ids(text: str) -> list[InequalityId]:
    return [InequalityId.parse(s) for s in text.split(",") if s.strip()]


def run_verify(args, cfg: RunConfig) -> int:
    try:
        ids = _parse_ids(args.ids) if args.ids else list(InequalityId)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    budgets = {}
    path = cfg.budget_path()
    if path.exists():
        budgets = load_budgets(path)["checks"]
    elif args.enforce:
        print(f"error: budget file {path} not found (required by --enforce)", file=sys.stderr)
        return EXIT_USAGE
    labels = args.functions.split(",") if args.functions else None
    functions = _load_functions(cfg, args.n, labels)
    dims = sorted({f.dim for f in functions}) if args.n is None else [args.n]
    tasks = [t for n in dims for t in _param_sets(args, ids, n)]
    results = run_checks(tasks, functions, cfg, budgets)

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "checks.jsonl").open("w") as fh:
        fh.write(_comment_lines(cfg))
        for r in results:
            fh.write(json.dumps(r.to_json(), sort_keys=False) + "\n")
    summary = summarize(results)
    with (out / "summary.csv").open("w", newline="") as fh:
        fh.write(_comment_lines(cfg))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "checks", "passed", "max_ratio", "budget", "worst_function", "worst_params"])
        for row in summary:
            w.writerow(row)
    failed = [r for r in results if not r.passed]
    skipped = sum(r.skipped for r in results)
    print(f"{len(results)} checks on {len(functions)} functions: {len(results) - len(failed)} passed, "
          f"{len(failed)} failed, {skipped} skipped")
    for row in summary:
        print(f"  {row[0]:<13} checks={row[1]:<4} passed={row[2]:<4} max_ratio={row[3]}")
    if failed:
        print("failing checks:")
        for r in failed:
            print(f"  {budget_key(r.id, r.params)} on {r.function_id}: ratio={r.ratio:.6g} budget={r.budget:.6g}")
        return EXIT_FAIL
    return EXIT_OK


def summarize(results) -> list[list]:
    rows = {}
    for r in results:
        row = rows.setdefault(str(r.id), {"n": 0, "ok": 0, "max": -INF, "budget": "", "fn": "", "key": ""})
        row["n"] += 1
        row["ok"] += bool(r.passed)
        if not r.skipped and r.ratio > row["max"]:
            row["max"], row["fn"], row["key"] = r.ratio, r.function_id, budget_key(r.id, r.params)
            row["budget"] = r.budget
    out = []
    for id in InequalityId:
        if str(id) in rows:
            row = rows[str(id)]
            out.append([str(id), row["n"], row["ok"], _fmt_ratio(row["max"]), _fmt_ratio(row["budget"]),
                        row["fn"], row["key"]])
    return out


def _fmt_ratio(x) -> str:
    if x == "" or x == -INF:
        return ""
    return "inf" if math.isinf(x) else f"{x:.6g}"


def _parse_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) == 1:
        v = float(parts[0])
        return v, v
    if len(parts) != 2:
        raise ValueError(f"expected lo:hi, got {text!r}")
    return float(parts[0]), float(parts[1])


def constant_key(id, params, family: FamilySpec, points: int) -> str:
    bounds = ",".join(f"{n}={lo:g}:{hi:g}" for n, (lo, hi) in zip(family.names, family.bounds))
    return f"{budget_key(id, params)}|family={family.generator_id}|{bounds}|seed={family.seed}|m={points}"


def run_scan(args, cfg: RunConfig) -> int:
    try:
        id = InequalityId.parse(args.id)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    gid = args.family
    if gid not in PARAM_NAMES:
        print(f"error: unknown family {gid!r}", file=sys.stderr)
        return EXIT_USAGE
    ranges = {}
    for name in PARAM_NAMES[gid]:
        v = getattr(args, f"range_{name}", None)
        if v is not None:
            ranges[name] = _parse_range(v)
    family = FamilySpec.from_ranges(gid, ranges, seed=args.seed)
    n = args.n
    params = _explicit_params(args, id, n) or InequalityParams(n)
    if not admissible(id, params):
        print(f"{id}: {inadmissible_reason(id, params)}", file=sys.stderr)
        return EXIT_USAGE
    measure = "gaussian" if gid == "gaussian_hermite_bump" else "lebesgue"
    grid = default_grid(n, measure, points=cfg.points(n), half_width=cfg.half_width(measure))
    budget = SearchBudget(args.samples, args.refine, args.shrink, args.seed)
    try:
        est = estimate_constant(id, family, params, budget, grid, t_grid=cfg.t_grid(), jobs=cfg.jobs)
    except DegenerateFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    key = constant_key(id, params, family, grid.points_per_axis)
    data = est.to_json()
    data.update({"family": gid, "bounds": [list(b) for b in family.bounds], "seed": args.seed,
                 "budget": asdict(budget), "grid": asdict(grid), "key": key})
    write_json(out / "estimate.json", data, cfg)
    with (out / "trace.csv").open("w", newline="") as fh:
        fh.write(_comment_lines(cfg))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", *family.names, "ratio"])
        for i, (theta, r) in enumerate(est.trace):
            w.writerow([i, *(repr(x) for x in theta), repr(r)])
    theta = ", ".join(f"{nm}={x:.6g}" for nm, x in zip(family.names, est.argmax_theta))
    print(f"{id} over {gid}: best ratio {est.best_ratio:.6g} at {theta} ({est.evaluations} evaluations)")

    code = EXIT_OK
    path = cfg.budget_path()
    golden = load_budgets(path) if path.exists() else {"checks": {}, "constants": {}}
    frozen = golden["constants"].get(key)
    if frozen is not None:
        ref = float(frozen["best_ratio"])
        drift = abs(est.best_ratio - ref) / ref
        print(f"frozen constant {ref:.6g}; drift {100 * drift:.3f}%")
        if drift >= REGRESSION_TOLERANCE and not args.freeze:
            print(f"regression: estimate moved by {100 * drift:.2f}% (limit {100 * REGRESSION_TOLERANCE:g}%)")
            code = EXIT_FAIL
    if args.freeze:
        golden["constants"][key] = {"best_ratio": est.best_ratio, "argmax_theta": list(est.argmax_theta)}
        save_budgets(path, golden)
        print(f"froze {key} into {path}")
    return code


def _read_jsonl(path) -> list[dict]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                rows.append(json.loads(s))
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from exc
    return rows


def run_report(args, cfg: RunConfig) -> int:
    src = Path(args.input)
    if src.is_dir():
        src = src / "checks.jsonl"
    rows = _read_jsonl(src)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def ratio(r):
        v = r["ratio"]
        return math.inf if v == "inf" else (math.nan if v is None else float(v))

    by_id: dict[str, list[dict]] = {}
    for r in rows:
        by_id.setdefault(r["id"], []).append(r)
    lines = ["<!--", *cfg.header(), f"input = {src}", "-->", "", "# Verification report", "",
             f"{len(rows)} checks, {sum(bool(r['pass']) for r in rows)} passed.", "",
             "| id | checks | passed | max ratio | worst function |", "|---|---|---|---|---|"]
    maxima = []
    for id in InequalityId:
        rs = by_id.get(str(id))
        if not rs:
            continue
        vals = [(ratio(r), r["function_id"]) for r in rs if not math.isnan(ratio(r))]
        best = max(vals) if vals else (math.nan, "")
        maxima.append((str(id), best[0]))
        lines.append(f"| {id} | {len(rs)} | {sum(bool(r['pass']) for r in rs)} | {best[0]:.6g} | {best[1]} |")
    fails = [r for r in rows if not r["pass"]]
    if fails:
        lines += ["", "## Failing checks", ""]
        lines += [f"- {r['id']} on {r['function_id']}: ratio {r['ratio']} (budget {r['budget']})" for r in fails]
    (out / "report.md").write_text("\n".join(lines) + "\n")

    # ratio per id, plotted against the id's position so the figure stays a plain log plot
    pos = np.arange(1, len(maxima) + 1, dtype=float)
    vals = np.array([m[1] for m in maxima], dtype=float)
    comment = "\n".join(cfg.header()) + "\nx: id index in order " + ", ".join(m[0] for m in maxima) + "\n"
    (out / "ratios.svg").write_text(svg_loglog(pos, vals, "max ratio per inequality", "id index", "ratio", comment))
    print(f"wrote {out / 'report.md'} and {out / 'ratios.svg'}")
    return EXIT_FAIL if fails else EXIT_OK


# -- argument parsing ------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", dest="out_dir", help="output directory")
    p.add_argument("--jobs", type=int, help="worker threads")
    p.add_argument("--t-min", dest="t_min", type=float)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--t-points", dest="t_points", type=int)
    p.add_argument("--tolerance", type=float, help="identity residual tolerance")
    p.add_argument("--budgets", dest="budget_file", help="golden budget file")
    p.add_argument("--corpus", dest="corpus_file", help="corpus manifest (JSON)")
    p.add_argument("--points", dest="points_override", type=int, help="grid points per axis")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=_float)
    p.add_argument("--q", type=_float)
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=_float)


def _float(text: str) -> float:
    return INF if text.strip().lower() in ("inf", "infinity") else float(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verifylab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rearrange", help="rearrangement profile of a sampled function")
    _add_common(p)
    p.add_argument("--input", required=True)

    p = sub.add_parser("norm", help="Lorentz and related norms of a sampled function")
    _add_common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--omega", type=float, help="|Omega| for the domain functionals (default: support measure)")
    p.add_argument("--p", type=_float)
    p.add_argument("--q", type=_float)

    p = sub.add_parser("verify", help="evaluate inequalities over the corpus")
    _add_common(p)
    _add_params(p)
    p.add_argument("--ids", help="comma-separated inequality ids (default: all)")
    p.add_argument("--n", type=int, help="restrict to corpus functions of this dimension")
    p.add_argument("--functions", help="comma-separated corpus labels")
    p.add_argument("--enforce", action="store_true", help="require the budget file")

    p = sub.add_parser("scan", help="empirical best constant over a family")
    _add_common(p)
    _add_params(p)
    p.add_argument("--id", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--refine", type=int, default=8)
    p.add_argument("--shrink", type=float, default=0.5)
    p.add_argument("--freeze", action="store_true", help="store the estimate as the golden constant")
    for name in sorted({n for names in PARAM_NAMES.values() for n in names}):
        p.add_argument(f"--{name}", dest=f"range_{name}", help=f"{name} range lo:hi or a fixed value")

    p = sub.add_parser("report", help="markdown and SVG report from checks.jsonl")
    _add_common(p)
    p.add_argument("--input", required=True, help="checks.jsonl or a verify output directory")
    return ap


COMMANDS = {"rearrange": run_rearrange, "norm": run_norm, "verify": run_verify, "scan": run_scan,
            "report": run_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        m = getattr(args, "points_override", None)
        if m is not None:
            cfg.points_1d = cfg.points_2d = cfg.points_nd = m
        return COMMANDS[args.command](args, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataInvariantError as exc:
        print(f"invalid data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DegenerateFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InadmissibleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
