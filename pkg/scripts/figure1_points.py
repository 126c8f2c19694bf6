"""Plot-ready CSV of the points of height <= 100 (x0, x1, x2, x3), plus the
affine chart (x1/x2, x3/x2) used for scatter plots."""

import argparse
import csv
import sys

from cubicpoints.torsor import list_points


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--B", type=int, default=100)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x0", "x1", "x2", "x3", "u", "v"])
    for p in list_points(args.B):
        w.writerow([p.x0, p.x1, p.x2, p.x3, format(p.x1 / p.x2, ".12g"), format(p.x3 / p.x2, ".12g")])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
