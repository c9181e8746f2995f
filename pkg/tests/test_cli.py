import io
import json

import pytest

from fanocert import cli, gapsearch


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_epsilon1_json():
    code, out, _ = call("epsilon1", "--p", "1", "--q", "2", "--json", "--stable")
    d = json.loads(out)
    assert code == 0
    assert d["value"] == "1/42" and d["witness"] == [[2, 1], [3, 1], [7, 1]]
    assert d["status"] == "proven" and d["command"] == "epsilon1"
    assert "elapsed_s" not in d
    code, out, _ = call("epsilon1", "--p", "1", "--q", "2", "--json")
    assert "elapsed_s" in json.loads(out)


def test_stable_is_byte_identical():
    runs = [call("glct-gap", "--p", "3", "--json", "--stable")[1] for _ in range(2)]
    assert runs[0] == runs[1]


@pytest.mark.parametrize("argv", [
    ("lct-gap", "--p", "4"), ("mld-gap", "--p", "2"), ("eq2", "--p", "1", "--delta", "1/5"),
    ("curve-index", "--p", "2", "--value", "2/3"), ("curtiss", "--n", "3"),
    ("sylvester", "--n", "5"), ("max-under", "--value", "1", "--n", "3"),
    ("member", "--p", "2", "--value", "3/4"), ("epsilon2", "--p", "1", "--q", "3"),
    ("constants", "--id", "I1"), ("beta", "--p", "2"), ("upsilon", "--p", "2"),
])
def test_commands_ok(argv):
    code, out, _ = call(*argv)
    assert code == 0 and out.startswith("value:")


def test_text_values():
    assert "value: 1/1806" in call("curtiss", "--n", "4")[1]
    assert "value: sat" in call("eq2", "--p", "1", "--delta", "1/5")[1]
    assert "value: not a member" in call("member", "--p", "2", "--value", "1/4")[1]


def test_exit_usage():
    assert call("epsilon1", "--p", "1")[0] == 3
    assert call("nosuch")[0] == 3
    assert call("member", "--p", "1", "--value", "0.5")[0] == 3
    assert call("curve-index", "--p", "1", "--value", "6/7")[0] == 3
    assert call("epsilon1", "--p", "0", "--q", "1")[0] == 3
    assert call("curtiss", "--n", "7")[0] == 3
    assert call("epsilon1", "--p", "1", "--q", "1", "--caps", "bogus")[0] == 3


def test_exit_inconclusive_on_caps():
    code, out, _ = call("epsilon1", "--p", "3", "--q", "3", "--caps", "depth=2,den=1000000", "--json")
    d = json.loads(out)
    assert code == 2 and d["status"] == "proven_within_caps" and d["caps"]["depth"] == 2


def test_exit_falsified(monkeypatch):
    from fractions import Fraction
    monkeypatch.setattr(gapsearch, "glct_formula", lambda p: Fraction(1, 7))
    assert call("glct-gap", "--p", "1")[0] == 1


def test_audit_all():
    code, out, _ = call("audit-all", "--json", "--stable")
    d = json.loads(out)
    assert code == 0 and d["value"] == "all verified"
    assert all(r["verdict"] == "verified" for r in d["results"])
