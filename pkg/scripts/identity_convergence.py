"""Identity residuals for every corpus function at several t-grid sizes."""

import argparse

from verifylab.corpus import load_manifest
from verifylab.rearrange import identity_residuals, log_grid, rearrange


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", default="128,256,512,1024", help="comma-separated t-grid sizes")
    args = ap.parse_args()
    sizes = [int(s) for s in args.points.split(",")]
    print("function," + ",".join(f"{name}@{m}" for m in sizes for name in ("tail", "product", "parts")))
    for e in load_manifest():
        f = e.build()
        cells = []
        for m in sizes:
            res = identity_residuals(rearrange(f, log_grid(1e-4, 1e4, m)))
            cells += [f"{r:.3e}" for r in res]
        print(f"{e.label}," + ",".join(cells))


if __name__ == "__main__":
    main()
