"""Table of N(B) against c_SH B (log B)^6 for B = 10^3 .. 10^6.

    python3 scripts/fit_table.py [--Bmax 1000000] [--out fit.csv]
"""

import argparse
import sys

from cubicpoints.cli import dispatch


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--Bmin", default="1000")
    ap.add_argument("--Bmax", default="1000000")
    ap.add_argument("--steps", default="4")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    argv = ["fit", "--Bmin", args.Bmin, "--Bmax", args.Bmax, "--steps", args.steps, "--main-term"]
    if args.out:
        argv += ["--out", args.out]
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
