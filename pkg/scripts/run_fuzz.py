"""Oracle-equivalence fuzzing with per-pivot checks; failing instances are saved for replay.

    python scripts/run_fuzz.py --count 500 --seed 1 --out results/fuzz
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from bcmcf.oracle import FuzzRanges, fuzz_equivalence
from bcmcf.solver import SolveOptions


@dataclass
class FuzzConfig:
    count: int = 200
    seed: int = 0
    rule: str = "dantzig"
    out: str = "results/fuzz"


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(FuzzConfig()).items():
        p.add_argument(f"--{name}", type=type(default), default=default)
    cfg = FuzzConfig(**vars(p.parse_args()))
    options = SolveOptions(rule=cfg.rule, check_invariants=True, record_trace=False)
    report = fuzz_equivalence(cfg.count, FuzzRanges(), cfg.seed, options=options)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for case in report.failures:
        (out / f"fail_{cfg.seed}_{case.index}.net").write_text(
            "".join(f"c {p}\n" for p in case.problems) + case.instance)
    summary = {
        "config": asdict(cfg),
        "trials": report.trials,
        "failures": len(report.failures),
        "budget_gate": report.gate_cases,
        "pivots": report.pivots,
        "degenerate_pivots": report.degenerate_pivots,
        "checks": report.checks,
    }
    (out / f"summary_{cfg.seed}_{cfg.rule}.json").write_text(json.dumps(summary, indent=2))
    print(json.dumps(summary, indent=2))
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
