"""Audit every registered constant: identities, orderings, windows, magnitudes."""

import argparse
from dataclasses import dataclass

from fanocert import constaudit as ca
from fanocert.exactnum import mag_loglog10_bounds


@dataclass
class AuditConfig:
    show_magnitudes: bool = False


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--show-magnitudes", action="store_true")
    cfg = AuditConfig(**vars(ap.parse_args()))
    if cfg.show_magnitudes:
        for cid, c in ca.REGISTRY.items():
            v = ca.eval_constant(cid)
            if v.members is not None:
                print(f"{cid:<22} set {list(v.members)}")
                continue
            m = v.magnitude
            if m.reciprocal:
                m = m.reciprocal_of()
            lo, hi = mag_loglog10_bounds(m) if m.level >= 1 else (None, None)
            win = f"log10 log10 |.| in [{float(lo):.5f}, {float(hi):.5f}]" if lo is not None else "small"
            print(f"{cid:<22} {c.source:<40} {win}")
        print()
    bad = 0
    for r in ca.audit_all_constants():
        bad += r.verdict != ca.VERIFIED
        print(f"[{r.verdict:>12}] {r.claim}  ({r.method}; {r.evidence})")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
