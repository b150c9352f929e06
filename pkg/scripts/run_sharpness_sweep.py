"""Print the extremal-family sweep: nominal vs measured constants by depth.

Usage: python scripts/run_sharpness_sweep.py [--k 2] [--c 2] [--depths 4,6,8,10]
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from treea1 import as_fraction, decimal_string, sharpness_sweep  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--c", default="2")
    parser.add_argument("--depths", default="4,6,8,10")
    args = parser.parse_args()

    c = as_fraction(args.c)
    depths = [int(d) for d in args.depths.split(",") if d.strip()]
    rows = sharpness_sweep(args.k, c, depths)
    target = args.k * c - args.k + 1

    print(f"k={args.k}, c={c}: bound k*c-k+1 = {target}")
    print(f"{'depth':>5} {'delta':>10} {'nominal':>10} {'measured':>10} {'sup_ratio':>10} {'ratio@1/k':>12} {'gap':>8}")
    for row in rows:
        print(
            f"{row.depth:>5} {str(row.delta):>10} {decimal_string(row.nominal_c, 6):>10} "
            f"{decimal_string(row.measured_c, 6):>10} {decimal_string(row.sup_ratio, 6):>10} "
            f"{decimal_string(row.ratio_at_branch_scale, 6):>12} {decimal_string(row.gap, 6):>8}"
        )
    print("nominal tends to c from below; ratio@1/k climbs toward the bound")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
