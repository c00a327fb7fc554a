"""Recompute every catalogued claim and print a pass/fail table."""

import argparse
import json
from dataclasses import asdict, dataclass

from dewces.catalog import EXAMPLE_IDS, reproduce


@dataclass
class Config:
    seed: int = 0
    trials: int = 10
    output: str | None = None


def main(cfg: Config) -> int:
    reports = []
    for example in EXAMPLE_IDS:
        r = reproduce(example, seed=cfg.seed, trials=cfg.trials)
        reports.append(r)
        print(f"{'PASS' if r.passed else 'FAIL'}  {example:<9} {len(r.claims):>3} claims  {r.runtime_ms:>7} ms")
        for c in r.claims:
            if not c.passed:
                print(f"      failed: {c.description} (expected {c.expected}, got {c.computed})")
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "reports": [r.to_dict(timings=True) for r in reports]},
                      fh, indent=2, default=str)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--output")
    raise SystemExit(main(Config(**vars(p.parse_args()))))
