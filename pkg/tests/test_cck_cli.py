from __future__ import annotations

import json

from cck_cli import main
from cck_export import read_json
from cck_schema import EXIT_FAIL, EXIT_INCOMPLETE, EXIT_OK, EXIT_USAGE


def test_clifford_prints_matrix_algebra(capsys):
    assert main(["clifford", "8", "8"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "M(256,R)"


def test_clifford_json(capsys):
    assert main(["--json", "clifford", "0", "2"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["matrix"] == "H"
    assert payload["double"] is False


def test_group_line(capsys):
    assert main(["group", "1", "4"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("G(1,4) = Sp(1,1)")


def test_bad_arguments_exit_with_usage(capsys):
    assert main(["clifford", "x", "1"]) == EXIT_USAGE
    assert main(["decide", "SU(2,2n)/Sp(1,n)", "--param", "n"]) == EXIT_USAGE
    assert main(["spaceform", "1", "2", "up"]) == EXIT_USAGE


def test_unknown_space_exits_with_usage(capsys):
    assert main(["decide", "Nowhere"]) == EXIT_USAGE
    assert "Not found" in capsys.readouterr().err
    assert main(["decide", "Foo(2)/Bar(1)"]) == EXIT_USAGE


def test_domain_errors_exit_with_usage(capsys):
    assert main(["hr", "0"]) == EXIT_USAGE
    assert main(["sos", "3", "3"]) == EXIT_USAGE
    assert main(["--max-size", "2", "rep", "2", "1"]) == EXIT_USAGE
    assert "Error:" in capsys.readouterr().err


def test_space_form_verdicts_set_exit_code(capsys):
    assert main(["spaceform", "1", "3", "+"]) == EXIT_FAIL
    assert "NotExists" in capsys.readouterr().out
    assert main(["spaceform", "2", "4", "+"]) == EXIT_OK
    assert "Open" in capsys.readouterr().out
    assert main(["spaceform", "7", "8", "+"]) == EXIT_OK


def test_tangential(capsys):
    assert main(["tangential", "2", "6"]) == EXIT_FAIL
    capsys.readouterr()
    assert main(["--json", "tangential", "3", "4", "--witness"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "exists"
    assert payload["evidence"]["witness"]["rho"] == 4


def test_rep_writes_gzip(tmp_path, capsys):
    output = tmp_path / "rep.json.gz"
    assert main(["rep", "1", "1", "-o", str(output)]) == EXIT_OK
    payload = read_json(str(output))
    assert payload["n"] == 2
    assert payload["ground"] == "R"
    assert len(payload["generators"]) == 2


def test_rep_streams_json(capsys):
    assert main(["--json", "rep", "0", "2"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 4
    assert payload["ground"] == "H"


def test_hurwitz_radon_verbs(capsys):
    assert main(["hr", "16"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("rho(16) = 9")
    assert main(["fields", "4", "3", "--points", "3"]) == EXIT_OK
    assert "independent" in capsys.readouterr().out
    assert main(["sos", "2", "2"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("(x1^2 + x2^2)*(y1^2 + y2^2) = ")


def test_check_triple_statuses(capsys):
    assert main(["check-triple", "SU(2,2n)/Sp(1,n)", "--param", "n=2"]) == EXIT_OK
    assert main(["check-triple", "SO(4,4)/SO(4,1)xSO(3)"]) == EXIT_INCOMPLETE
    assert main(["check-triple", "O(8,8)/O(7,8)"]) == EXIT_OK


def test_jordan(capsys):
    assert main(["--json", "jordan", "--k", "[[1,0],[0,1]]", "--v", "[1,2]"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["commute"] and payload["recomposes"]
    assert payload["w"]["v"] == ["1", "2"]
    assert main(["jordan", "--k", "[[1,1],[0,1]]", "--v", "[0,0]"]) == EXIT_USAGE
    assert main(["jordan", "--k", "[[1,0]", "--v", "[0,0]"]) == EXIT_USAGE


def test_verify_tables_section(tmp_path, capsys):
    output = tmp_path / "report.json"
    assert main(["--seed", "3", "verify-tables", "--section", "clifford-table", "-o", str(output)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "=== verify-tables ===" in out
    assert "clifford-table: 1 passed, 0 failed, 0 incomplete" in out
    assert read_json(str(output))["seed"] == 3


def test_verify_tables_fault_injection_fails(capsys):
    code = main(["verify-tables", "--section", "compact-forms", "--fault", "Sp(1,n)=4n-1"])
    assert code == EXIT_FAIL
    assert "Failed:" in capsys.readouterr().out
