"""Command-line front end.

Exit codes: 0 computed or verified, 1 a claim check failed, 2 inconclusive or
closed only within caps, 3 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from . import boundchain as bc
from . import constaudit as ca
from . import egyptian as eg
from . import gapsearch as gs
from . import hyperstd as hs
from .exactnum import DomainError, InconclusiveError, Magnitude, format_rational, parse_rational, precision

EXIT_OK, EXIT_FALSIFIED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3

COMMANDS = [
    "epsilon1", "epsilon2", "lct-gap", "glct-gap", "mld-gap", "eq2", "curve-index",
    "curtiss", "sylvester", "max-under", "member", "beta", "upsilon", "constants", "audit-all",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _enc(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, Magnitude):
        return v.to_json()
    if isinstance(v, bool) or v is None or isinstance(v, (str, float)):
        return v
    if isinstance(v, int):
        return v if abs(v) < 2**53 else str(v)
    if isinstance(v, dict):
        return {str(k): _enc(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    if hasattr(v, "value") and isinstance(v.value, str):
        return v.value
    return str(v)


def _rat(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _caps(text: str) -> gs.SearchCaps:
    try:
        return gs.SearchCaps.parse(text)
    except (DomainError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--stable", action="store_true", help="omit the elapsed-time field")
    common.add_argument("--precision-bits", type=int, default=96)
    common.add_argument("--caps", type=_caps, default=None, help="depth=D,den=N")

    top = _Parser(prog="fanocert", description="Certified gap and constant calculator")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, *flags):
        sp = sub.add_parser(name, parents=[common])
        for flag in flags:
            if flag == "p":
                sp.add_argument("--p", type=int, required=True)
            elif flag == "q":
                sp.add_argument("--q", type=int, required=True)
            elif flag == "n":
                sp.add_argument("--n", type=int, required=True)
            elif flag == "delta":
                sp.add_argument("--delta", type=_rat, required=True)
            elif flag == "value":
                sp.add_argument("--value", type=_rat, required=True)
            elif flag == "id":
                sp.add_argument("--id", default=None)
        return sp

    add("epsilon1", "p", "q")
    add("epsilon2", "p", "q")
    add("lct-gap", "p")
    add("glct-gap", "p")
    add("mld-gap", "p")
    add("eq2", "p", "delta")
    add("curve-index", "p", "value")
    add("curtiss", "n")
    add("sylvester", "n")
    add("max-under", "value", "n")
    add("member", "p", "value")
    add("beta", "p")
    add("upsilon", "p")
    add("constants", "id")
    add("audit-all")
    return top


def _positive(v: int, name: str):
    if v < 1:
        raise DomainError(f"--{name} must be positive")


# each handler returns (payload, exit code)


def cmd_epsilon1(a):
    _positive(a.p, "p")
    c = gs.min_sum_exceeding(a.p, a.q, a.caps)
    out = {"value": c.value, "witness": c.pairs, "status": c.status,
           "sylvester_floor": c.sylvester_floor, "floor_tight": c.floor_tight}
    if c.status != gs.PROVEN:
        out["caps"] = {"depth": c.caps.depth, "den": c.caps.den}
    return out, EXIT_OK if c.status == gs.PROVEN else EXIT_INCONCLUSIVE


def cmd_epsilon2(a):
    _positive(a.p, "p")
    e = gs.epsilon2(a.p, a.q, a.caps)
    out = {"value": e.value, "lower": e.lower, "upper": e.upper, "status": e.status}
    return out, EXIT_OK if e.status == gs.PROVEN else EXIT_INCONCLUSIVE


def _dim1(rep, expected):
    out = {"value": rep.gap, "gammas": list(rep.gammas), "t": rep.t, "multiplicity": rep.mult,
           "identity_holds": rep.identity_holds(), "matches_formula": rep.gap == expected}
    ok = rep.identity_holds() and rep.gap == expected
    return out, EXIT_OK if ok else EXIT_FALSIFIED


def cmd_lct_gap(a):
    _positive(a.p, "p")
    return _dim1(gs.lct_gap_dim1(a.p), min(Fraction(1, a.p), Fraction(1, 2)))


def cmd_glct_gap(a):
    _positive(a.p, "p")
    return _dim1(gs.glct_max_dim1(a.p, a.caps), gs.glct_formula(a.p))


def cmd_mld_gap(a):
    _positive(a.p, "p")
    return _dim1(gs.mld_gap_dim1(a.p, a.caps), gs.glct_formula(a.p))


def cmd_eq2(a):
    _positive(a.p, "p")
    r = gs.equation_two_solver(a.p, a.delta, a.caps)
    out = {"value": "sat" if r.sat else "unsat", "gammas": list(r.gammas), "b": list(r.bs)}
    return out, EXIT_OK if r.check(a.p, a.delta) else EXIT_FALSIFIED


def cmd_curve_index(a):
    _positive(a.p, "p")
    i = gs.curve_complement_index(a.p, a.value)
    return {"value": i, "bound": a.p * (a.p + 1)}, EXIT_OK


def cmd_curtiss(a):
    r = eg.curtiss_min_gap(a.n)
    return {"value": r.gap, "witness": list(r.witness)}, EXIT_OK


def cmd_sylvester(a):
    e = eg.sylvester(a.n)
    out = {"value": str(e.value) if e.value is not None else None, "bound": e.bound}
    if e.value is not None:
        out["product_identity"] = eg.sylvester_product_identity(a.n) if a.n >= 2 else True
        out["below_bound"] = e.bound_holds()
    return out, EXIT_OK


def cmd_max_under(a):
    r = eg.max_unit_sum_under(a.value, a.n)
    return {"value": r.best, "witness": list(r.witness)}, EXIT_OK


def cmd_member(a):
    _positive(a.p, "p")
    w = hs.membership(a.p, a.value)
    if w is None:
        return {"value": "not a member", "witness": None}, EXIT_OK
    return {"value": "member", "witness": [w.n, w.k]}, EXIT_OK


def _checks_exit(checks: dict) -> int:
    vals = set(checks.values())
    if "falsified" in vals:
        return EXIT_FALSIFIED
    if "inconclusive" in vals:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_beta(a):
    rep = bc.beta_lower(a.p)
    out = {"value": rep.value, "direction": rep.direction.value, "checks": rep.checks,
           "trace": [[s.op, s.note] for s in rep.trace]}
    return out, _checks_exit(rep.checks)


def cmd_upsilon(a):
    rep = bc.upsilon_lower(a.p)
    out = {"value": rep.value, "direction": rep.direction.value, "checks": rep.checks,
           "trace": [[s.op, s.note] for s in rep.trace]}
    return out, _checks_exit(rep.checks)


def _const_payload(cid):
    c = ca.get(cid)
    v = ca.eval_constant(cid)
    d = {"id": cid, "location": c.location, "expression": c.source}
    if v.members is not None:
        d["members"] = list(v.members)
    else:
        d["normal_form"] = {str(p): str(k) for p, k in sorted(v.normal_form.items())}
        d["magnitude"] = v.magnitude
    return d


def cmd_constants(a):
    if a.id:
        return {"value": _const_payload(a.id)}, EXIT_OK
    return {"value": [_const_payload(cid) for cid in ca.REGISTRY]}, EXIT_OK


def cmd_audit_all(a):
    results = [
        {"claim": r.claim, "verdict": r.verdict, "method": r.method, "evidence": r.evidence}
        for r in ca.audit_all_constants()
    ]
    for p in range(2, 11):
        for name, verdict in bc.beta_suite(p).items():
            results.append({"claim": f"{name} at p={p}", "verdict": verdict,
                            "method": "magnitude_compare", "evidence": ""})
    code = _checks_exit({i: r["verdict"] for i, r in enumerate(results)})
    return {"value": "all verified" if code == EXIT_OK else "not all verified", "results": results}, code


HANDLERS = {
    "epsilon1": cmd_epsilon1, "epsilon2": cmd_epsilon2, "lct-gap": cmd_lct_gap,
    "glct-gap": cmd_glct_gap, "mld-gap": cmd_mld_gap, "eq2": cmd_eq2,
    "curve-index": cmd_curve_index, "curtiss": cmd_curtiss, "sylvester": cmd_sylvester,
    "max-under": cmd_max_under, "member": cmd_member, "beta": cmd_beta,
    "upsilon": cmd_upsilon, "constants": cmd_constants, "audit-all": cmd_audit_all,
}


def _inputs(a) -> dict:
    keys = ("p", "q", "n", "delta", "value", "id")
    return {k: _enc(getattr(a, k)) for k in keys if getattr(a, k, None) is not None}


def _text(payload: dict) -> str:
    lines = []
    for k, v in payload.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            lines.extend("  " + json.dumps(x) for x in v)
        else:
            lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v)}")
    return "\n".join(lines)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        with precision(a.precision_bits):
            payload, code = HANDLERS[a.command](a)
    except (DomainError, eg.BudgetExceeded, hs.PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=err)
        return EXIT_INCONCLUSIVE
    payload = _enc(payload)
    report = dict(payload)
    report["command"] = a.command
    report["inputs"] = _inputs(a)
    report["version"] = __version__
    if not a.stable:
        report["elapsed_s"] = round(time.perf_counter() - start, 6)
    if a.json:
        print(json.dumps(report, separators=(",", ":")), file=out)
    else:
        print(_text(payload), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
