"""Freeze golden budgets: per-check ratio budgets over the standard corpus and
the cone best constant, written to the package budget file."""

import argparse
import math

from verifylab.cli import RunConfig, _load_functions, constant_key, run_checks, save_budgets
from verifylab.corpus import FamilySpec, default_grid, generate
from verifylab.inequality import IDENTITIES, InequalityId, InequalityParams, budget_key, parameter_lattice
from verifylab.search import SearchBudget, estimate_constant

# anchor functions outside the corpus whose checks must also sit under the budgets
ANCHORS = [
    ("quadratic_bump", {"R": 1.0}, 2, (InequalityId.STEIN2, InequalityId.STEIN3)),
]
MARGIN = 1.05  # same headroom as the constant regression tolerance
CONSTANTS = [
    # (id, family, ranges, n, seed, points)
    (InequalityId.GN_STRONG, "cone", {"R": (0.1, 1.5)}, 2, 7, 401),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="budget file (default: package data)")
    args = ap.parse_args()
    cfg = RunConfig(budget_file=args.out or "")
    functions = _load_functions(cfg, None, None)
    tasks = [(id, p) for n in (1, 2) for id in InequalityId if id not in IDENTITIES
             for p in parameter_lattice(id, n)]
    results = run_checks(tasks, functions, cfg, {})
    for gid, theta, n, ids in ANCHORS:
        f = generate(FamilySpec.from_ranges(gid, theta), list(theta.values()), default_grid(n), label=gid)
        results += run_checks([(id, p) for id in ids for p in parameter_lattice(id, n)], [f], cfg, {})
    worst: dict[str, tuple[float, str]] = {}
    for r in results:
        if r.skipped or math.isnan(r.ratio):
            continue
        key = budget_key(r.id, r.params)
        if key not in worst or r.ratio > worst[key][0]:
            worst[key] = (r.ratio, r.function_id)
    checks = {k: {"budget": MARGIN * m, "max_ratio": m, "worst_function": fn} for k, (m, fn) in sorted(worst.items())}

    constants = {}
    for id, gid, ranges, n, seed, points in CONSTANTS:
        family = FamilySpec.from_ranges(gid, ranges, seed=seed)
        params = InequalityParams(n)
        grid = default_grid(n, points=points)
        est = estimate_constant(id, family, params, SearchBudget(seed=seed), grid, t_grid=cfg.t_grid())
        constants[constant_key(id, params, family, points)] = {
            "best_ratio": est.best_ratio, "argmax_theta": list(est.argmax_theta)}
        print(f"{id} over {gid}: {est.best_ratio:.6g}")

    save_budgets(cfg.budget_path(), {"margin": MARGIN, "checks": checks, "constants": constants})
    print(f"froze {len(checks)} check budgets and {len(constants)} constants into {cfg.budget_path()}")


if __name__ == "__main__":
    main()
