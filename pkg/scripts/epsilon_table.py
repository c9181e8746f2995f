"""Tabulate eps1(p, q) and eps2(p, q) with witnesses and floor tightness."""

import argparse
import time
from dataclasses import dataclass

from fanocert.gapsearch import SearchCaps, epsilon2_from, min_sum_exceeding


@dataclass
class TableConfig:
    p_max: int = 4
    q_max: int = 3
    workers: int = 1
    caps: str = "depth=64,den=4294967296"


def run(cfg: TableConfig) -> list[dict]:
    caps = SearchCaps.parse(cfg.caps)
    rows = []
    for p in range(1, cfg.p_max + 1):
        for q in range(1, cfg.q_max + 1):
            t = time.perf_counter()
            c = min_sum_exceeding(p, q, caps, workers=cfg.workers)
            rows.append({
                "p": p, "q": q, "eps1": c.value, "eps2": epsilon2_from(c.value, q),
                "status": c.status, "floor_tight": c.floor_tight,
                "witness": " + ".join(str(e.value) for e in c.witness),
                "seconds": time.perf_counter() - t,
            })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(TableConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = TableConfig(**vars(ap.parse_args()))
    print(f"{'p':>2} {'q':>2} {'eps1':>14} {'eps2':>16} {'status':>18} tight  witness")
    for r in run(cfg):
        print(f"{r['p']:>2} {r['q']:>2} {str(r['eps1']):>14} {str(r['eps2']):>16} "
              f"{r['status']:>18} {str(r['floor_tight']):>5}  {r['witness']}  [{r['seconds']:.2f}s]")


if __name__ == "__main__":
    main()
