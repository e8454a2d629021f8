"""Run every check over the standard corpus and write checks.jsonl, summary.csv and a report."""

import argparse
import sys

from verifylab.cli import main as cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="sweep")
    ap.add_argument("--jobs", default="1")
    args = ap.parse_args()
    code = cli(["verify", "--out", args.out, "--jobs", args.jobs])
    cli(["report", "--input", args.out, "--out", args.out])
    sys.exit(code)


if __name__ == "__main__":
    main()
