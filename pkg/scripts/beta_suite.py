"""Run the certified beta / l / upsilon comparisons over a range of p."""

import argparse
import time
from dataclasses import dataclass

from fanocert.boundchain import ALPHA_EXACT_BUDGET, beta_suite


@dataclass
class SuiteConfig:
    p_min: int = 2
    p_max: int = 10
    budget: int = ALPHA_EXACT_BUDGET


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(SuiteConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = SuiteConfig(**vars(ap.parse_args()))
    failures = 0
    for p in range(cfg.p_min, cfg.p_max + 1):
        t = time.perf_counter()
        verdicts = beta_suite(p, cfg.budget)
        failures += sum(v != "verified" for v in verdicts.values())
        cells = "  ".join(f"{k}={v}" for k, v in verdicts.items())
        print(f"p={p:<3} {cells}  [{time.perf_counter() - t:.2f}s]")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
