"""Hill-climb the normalized sup-ratio objective and report the best weight.

Usage: python scripts/run_search.py [--k 2] [--depth 2] [--iters 5000] [--restarts 10] [--seed 1]
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from treea1 import SearchConfig, check_rearrangement_bound, hill_climb, make_shape, weight_to_text  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--depth", type=int, default=2)
    parser.add_argument("--iters", type=int, default=5000)
    parser.add_argument("--restarts", type=int, default=10)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    config = SearchConfig(
        shape=make_shape(args.k, args.depth),
        iterations=args.iters,
        restarts=args.restarts,
        seed=args.seed,
    )
    start = time.monotonic()
    result = hill_climb(config)
    elapsed = time.monotonic() - start

    print(f"best objective (float): {result.best_objective:.12f} in {elapsed:.2f}s")
    print(f"exact re-verification:  {result.exact_objective} (must be <= 1)")
    print(f"best restart:           {result.best_restart}")
    print(f"best weight:            {weight_to_text(result.best_weight).strip()}")
    report = check_rearrangement_bound(result.best_weight)
    print(f"c={report.c}  bound={report.bound}  sup_ratio={report.sup_ratio}  margin={report.margin}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
