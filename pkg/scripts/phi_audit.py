"""Count degenerate pivots on which each sign variant of the potential function fails to drop.

Compares sum(pi + r*mu) and sum(pi - r*mu), r = chat_extra / bhat_extra,
over random tiny instances solved with per-pivot checks enabled.

    python scripts/phi_audit.py --count 2000 --seed 0
"""

from __future__ import annotations

import argparse
import random
from collections import Counter

from bcmcf.oracle import FuzzRanges, random_tiny_instance
from bcmcf.solver import SolveOptions, solve


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)
    totals: Counter[str] = Counter()
    for _ in range(args.count):
        inst = random_tiny_instance(rng, FuzzRanges())
        for rule in ("dantzig", "first"):
            totals.update(solve(inst, SolveOptions(rule=rule, check_invariants=True)).checks)
    deg = totals["degenerate_checked"]
    print(f"degenerate pivots checked: {deg}")
    for key in ("phi_plus_not_decreasing", "phi_minus_not_decreasing"):
        print(f"{key}: {totals[key]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
