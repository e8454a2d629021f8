"""Best GN_STRONG constant over the cone family at several resolutions."""

import argparse
import math

from verifylab.corpus import FamilySpec, default_grid
from verifylab.inequality import I, InequalityParams
from verifylab.search import SearchBudget, estimate_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", default="101,201,401")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    target = 1 / math.sqrt(math.pi)
    family = FamilySpec.from_ranges("cone", {"R": (0.1, 1.5)}, seed=args.seed)
    for m in (int(s) for s in args.points.split(",")):
        est = estimate_constant(I.GN_STRONG, family, InequalityParams(2), SearchBudget(seed=args.seed),
                                default_grid(2, points=m))
        print(f"m={m:<4} best={est.best_ratio:.6f} at R={est.argmax_theta[0]:.4f} "
              f"rel_error={(est.best_ratio - target) / target:+.3%}")


if __name__ == "__main__":
    main()
