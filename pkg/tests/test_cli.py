import json

import pytest

from ftdetect.cli import fmt, run
from ftdetect.periodic import PeriodicPattern, builtin_patterns
from conftest import G8_EDGES


@pytest.fixture
def g8_file(tmp_path):
    path = tmp_path / "g8.json"
    path.write_text(json.dumps({"n": 8, "edges": [[a - 1, b - 1] for a, b in G8_EDGES]}))
    return str(path)


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_fmt():
    from fractions import Fraction
    assert fmt(Fraction(11, 3)) == "11/3"
    assert fmt(Fraction(4, 2)) == "2"
    assert fmt(Fraction(1, 3), decimal=True) == "0.333333"


def test_verify_builtin(capsys):
    code, cap = out_of(capsys, ["verify", "--builtin", "pattern-a", "--kind", "open",
                                "--redundancy", "1"])
    assert code == 0
    assert cap.out.strip() == "valid"


def test_verify_invalid_builtin(capsys):
    code, cap = out_of(capsys, ["verify", "--builtin", "pattern-c", "--kind", "open",
                                "--redundancy", "1", "--json"])
    assert code == 1
    assert json.loads(cap.out)["reason"] == "under-dominated"


def test_missing_graph_is_format_error(capsys, tmp_path):
    code, cap = out_of(capsys, ["verify", "--graph", str(tmp_path / "missing.json"),
                                "--detectors", "0,1"])
    assert code == 2
    assert "error" in cap.err


def test_malformed_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify", "--graph", str(bad), "--detectors", "0"]) == 2
    pat = tmp_path / "bad.txt"
    pat.write_text("X?.\n")
    assert run(["verify", "--pattern", str(pat)]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["verify", "--nonsense"]) == 2
    assert run(["bound", "--kind", "open", "--constraint", "??"]) == 2
    assert run(["search", "--period", "7", "7"]) == 2
    capsys.readouterr()


def test_verify_graph_and_deletion(capsys, g8_file):
    for extra in ([], ["--by-deletion"]):
        code, cap = out_of(capsys, ["verify", "--graph", g8_file, "--detectors", "1,3,5",
                                    "--kind", "open"] + extra)
        assert code == 1
        assert cap.out.startswith("invalid: indistinguishable [0, 2]")


def test_share_and_density(capsys, g8_file):
    code, cap = out_of(capsys, ["share", "--graph", g8_file, "--detectors", "1,3,5", "--json"])
    data = json.loads(cap.out)
    assert code == 0
    assert data["shares"] == {"1": "3", "3": "5/2", "5": "5/2"}
    assert data["average_share"] == "8/3"
    assert data["density"] == "3/8"
    code, cap = out_of(capsys, ["share", "--graph", g8_file, "--detectors", "1,3,5"])
    assert "average share = 8/3, density = 3/8" in cap.out
    code, cap = out_of(capsys, ["density", "--builtin", "pattern-b"])
    assert cap.out.strip() == "density = 1/3"


def test_detectors_json_file(capsys, g8_file, tmp_path):
    det = tmp_path / "s.json"
    det.write_text(json.dumps({"kind": "closed", "detectors": [0, 1, 2, 3, 4, 5, 6, 7]}))
    code, cap = out_of(capsys, ["verify", "--graph", g8_file, "--detectors", str(det), "--json"])
    assert json.loads(cap.out)["kind"] == "closed"


def test_solve(capsys, g8_file, tmp_path):
    code, cap = out_of(capsys, ["solve", "--graph", g8_file, "--kind", "open",
                                "--redundancy", "1", "--json"])
    data = json.loads(cap.out)
    assert code == 0 and data["size"] == 7 and data["density"] == "7/8"
    code, _ = out_of(capsys, ["solve", "--graph", g8_file, "--kind", "closed",
                              "--mode", "decision", "--size", "3"])
    assert code == 1
    cnf = tmp_path / "g8.cnf"
    code, _ = out_of(capsys, ["solve", "--graph", g8_file, "--kind", "closed",
                              "--mode", "decision", "--size", "4", "--export-cnf", str(cnf)])
    assert code == 0
    assert "p cnf" in cnf.read_text()
    assert run(["solve", "--graph", g8_file, "--mode", "decision"]) == 2
    capsys.readouterr()


def test_builtins_round_trip(capsys):
    code, cap = out_of(capsys, ["builtins"])
    blocks = cap.out.strip().split("# ")[1:]
    pats = builtin_patterns()
    assert len(blocks) == len(pats)
    for block in blocks:
        name = block.split()[0]
        body = "\n".join(block.splitlines()[1:])
        assert PeriodicPattern.from_ascii(body) == pats[name]
    code, cap = out_of(capsys, ["builtins", "--json"])
    data = json.loads(cap.out)
    for name, p in pats.items():
        assert PeriodicPattern.from_ascii("\n".join(data[name]["ascii"])) == p
        assert data[name]["density"] == "1/3"


def test_human_and_json_agree(capsys):
    _, human = out_of(capsys, ["bound", "--kind", "open", "--constraint", "???/?XX/???",
                               "--limit", "0"])
    _, js = out_of(capsys, ["bound", "--kind", "open", "--constraint", "???/?XX/???", "--json"])
    data = json.loads(js.out)
    assert f"max share = {data['max_share']}" in human.out
    assert f"density lower bound = {data['density_lower_bound']}" in human.out


def test_search(capsys):
    code, cap = out_of(capsys, ["search", "--period", "3", "3", "--kind", "open", "--json"])
    data = json.loads(cap.out)
    assert code == 0
    assert {p["density"] for p in data["patterns"]} == {"1/3"}
    code, _ = out_of(capsys, ["search", "--period", "3", "3", "--max-detectors", "2"])
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["bound", "--kind", "closed", "--constraint", "?X?/???/???", "--json"],
    ["search", "--period", "3", "6", "--kind", "closed", "--json"],
])
def test_workers_byte_identical(capsys, argv):
    _, one = out_of(capsys, argv + ["--workers", "1"])
    _, two = out_of(capsys, argv + ["--workers", "2"])
    assert one.out == two.out


def test_decimal_flag(capsys):
    _, cap = out_of(capsys, ["density", "--builtin", "pattern-a", "--decimal"])
    assert cap.out.strip() == "density = 0.333333"


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    capsys.readouterr()
