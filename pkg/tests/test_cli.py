import json

import pytest

from clubcat import formats
from clubcat.cli import main
from clubcat.operads import commutative_operad, cyclic_group_operad, free_operad
from clubcat.simpset import standard_simplex
from clubcat.sset_club import ClubObjectSSet, constant_family
from clubcat.algebra import constant_algebra_object


@pytest.fixture
def workspace(tmp_path):
    formats.write_file(tmp_path / "interval.json", "sset", standard_simplex(1, 2))
    formats.write_file(tmp_path / "op.json", "operad", free_operad({2: ["g"]}, 3))
    formats.write_file(tmp_path / "com.json", "operad", commutative_operad(2))
    s = standard_simplex(1, 2)
    formats.write_file(tmp_path / "obj.json", "club-object",
                       ClubObjectSSet(s, constant_family(s, s)))
    formats.write_file(tmp_path / "alg.json", "algebra-object",
                       constant_algebra_object(s, ["u", "v"]))
    return tmp_path


def test_validate_pass(workspace, capsys):
    assert main(["validate", str(workspace / "interval.json")]) == 0
    assert "PASS" in capsys.readouterr().out


def test_validate_missing_file(workspace, capsys):
    assert main(["validate", str(workspace / "nope.json")]) == 2


def test_validate_schema_error(workspace, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "clubcat/1", "nonsense": true}')
    assert main(["validate", str(bad)]) == 2


def test_validation_failure_exit_code(workspace, tmp_path):
    data = formats.serialize("operad", cyclic_group_operad(3))
    for entry in data["gamma"]:
        if entry["op"] == "1" and entry["args"] == ["1"]:
            entry["result"] = "0"
    path = tmp_path / "badop.json"
    path.write_text(formats.to_json_string(data))
    assert main(["operad", "validate", str(path)]) == 1


def test_product_and_reload(workspace, capsys):
    out = workspace / "square.json"
    assert main(["sset", "product", str(workspace / "interval.json"),
                 str(workspace / "interval.json"), "-o", str(out)]) == 0
    assert main(["validate", str(out)]) == 0


def test_diag_matches_product_counts(workspace, capsys):
    out = workspace / "diag.json"
    assert main(["--json", "sset", "diag", str(workspace / "interval.json"),
                 str(workspace / "interval.json"), "-o", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    counts = report["checks"][0]["details"]["nondegenerate_counts"]
    assert counts == [4, 5, 2]


def test_compose_and_law_check(workspace):
    assert main(["sset", "compose", str(workspace / "obj.json"),
                 "-o", str(workspace / "comp.json")]) == 0
    assert main(["validate", str(workspace / "comp.json")]) == 0
    assert main(["sset", "law-check", "--unit", "--assoc",
                 str(workspace / "obj.json")]) == 0


def test_operad_pipeline(workspace):
    club_path = workspace / "club.json"
    assert main(["operad", "validate", str(workspace / "op.json")]) == 0
    assert main(["operad", "encode", str(workspace / "op.json"),
                 "-o", str(workspace / "enc.json")]) == 0
    assert main(["validate", str(workspace / "enc.json")]) == 0
    assert main(["operad", "to-club", str(workspace / "op.json"),
                 "-o", str(club_path)]) == 0
    assert main(["club-check", str(club_path)]) == 0
    assert main(["operad", "roundtrip", str(workspace / "op.json")]) == 0


def test_club_check_corrupted_exit_1(workspace, tmp_path):
    from clubcat.operads import NsOperad, operad_to_club
    z3 = cyclic_group_operad(3)
    gamma = dict(z3.gamma)
    gamma[("1", ("1",))] = "0"
    club = operad_to_club(NsOperad(1, z3.levels, "0", gamma))
    path = tmp_path / "badclub.json"
    formats.write_file(path, "club", club)
    assert main(["club-check", str(path)]) == 1


def test_algebra_commands(workspace, capsys):
    assert main(["--json", "algebra", "colimit", str(workspace / "alg.json")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["checks"][0]["details"]["classes"] == 2
    assert main(["algebra", "ipoints", str(workspace / "alg.json"),
                 "--dim", "0"]) == 0
    assert main(["algebra", "fibration-check", "--samples", "4",
                 "--seed", "1"]) == 0


def test_suite_deterministic(capsys):
    assert main(["--json", "suite", "club-check", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["--json", "suite", "club-check", "--seed", "3"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_suite_unknown_name():
    with pytest.raises(SystemExit):
        main(["suite", "nope"])


def test_report_out_writes_file(workspace, tmp_path):
    out = tmp_path / "report.json"
    assert main(["--report-out", str(out), "validate",
                 str(workspace / "interval.json")]) == 0
    data = json.loads(out.read_text())
    assert data["summary"]["failed"] == 0
