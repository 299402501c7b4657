import json
import re
from pathlib import Path

import pytest

from testability import cli
from testability.errors import NumericBreakdown, ProblemSyntaxError, SchemaError, ValidationError
from testability.problem import parse_problem
from testability.reports import emit_report, parse_report, strip_volatile

DATA = Path(__file__).resolve().parent.parent / "data"
MEAN = str(DATA / "mean_separation.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def two_point(**hyp):
    return {
        "schema_version": 1,
        "space": {"atoms": ["a", "b"]},
        "hypotheses": hyp or {"P": {"generators": [[1, 0]]}, "Q": {"generators": [[0, 1]]}},
        "null": "P",
        "alternative": "Q",
    }


def test_minimal_problem_parses():
    pf = parse_problem(json.dumps(two_point()))
    assert len(pf.space) == 2 and set(pf.hypotheses) == {"P", "Q"}


def test_generator_not_summing_to_one():
    text = json.dumps(two_point(P={"generators": [[0.5, 0.4]]}, Q={"generators": [[0, 1]]}))
    with pytest.raises(ValidationError) as exc:
        parse_problem(text)
    assert exc.value.path == "hypotheses.P.generators[0]"


def test_constraint_width_mismatch():
    bad = {"constraints": [{"coeffs": [1, 0, 0], "rel": "<=", "rhs": 1}], "aux": 0}
    with pytest.raises(SchemaError) as exc:
        parse_problem(json.dumps(two_point(P=bad, Q={"generators": [[0, 1]]})))
    assert exc.value.path.endswith(".coeffs")


def test_syntax_and_reference_errors():
    with pytest.raises(ProblemSyntaxError):
        parse_problem("{not json")
    obj = two_point()
    obj["null"] = "R"
    with pytest.raises(SchemaError):
        parse_problem(json.dumps(obj))


def test_risk_command(capsys):
    code, out, _ = run(capsys, "risk", MEAN)
    assert code == 0
    res = json.loads(out)["result"]
    assert (res["risk"], res["tv"], res["duality_gap"]) == ("3/5", "2/5", "0")


def test_no_decimals_in_rational_reports(capsys):
    for argv in (["risk", MEAN], ["evariable", MEAN], ["demo", "escaping-mass", "--N", "6"]):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        report = json.loads(out)
        del report["timestamp"]

        def walk(x):
            if isinstance(x, float):
                raise AssertionError(f"float {x} in {argv}")
            if isinstance(x, dict):
                for v in x.values():
                    walk(v)
            elif isinstance(x, list):
                for v in x:
                    walk(v)

        walk(report)
        assert not re.search(r'"-?\d+\.\d+"', json.dumps(report["result"]))


def test_demo_escaping_mass(capsys):
    code, out, _ = run(capsys, "demo", "escaping-mass", "--N", "8")
    assert code == 0 and json.loads(out)["result"]["tv"] == "5/8"


def test_sweep_command(capsys):
    code, out, _ = run(capsys, "sweep", "escaping-mass", "--sizes", "2,4,8,16")
    res = json.loads(out)["result"]
    assert code == 0 and [r["tv"] for r in res["records"]] == ["1", "3/4", "5/8", "9/16"]


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", MEAN, str(DATA / "mean_certificate.json"))
    assert code == 0 and json.loads(out)["result"]["valid"] is True
    code, out, _ = run(capsys, "certify", MEAN, str(DATA / "constant_certificate.json"))
    assert code == 0 and json.loads(out)["result"]["valid"] is False


def test_effnull_and_evariable(capsys):
    code, out, _ = run(capsys, "effnull", MEAN, "--measure", "[0.6, 0, 0.3]")
    res = json.loads(out)["result"]
    assert code == 0 and res["dominated"] is True and res["routes_agree"]
    code, out, _ = run(capsys, "evariable", MEAN)
    assert code == 0 and json.loads(out)["result"]["is_e_variable"]


def test_float_mode_and_tolerance(capsys):
    code, out, _ = run(capsys, "risk", MEAN, "--mode", "float", "--tolerance", "1e-7")
    assert code == 0 and abs(json.loads(out)["result"]["risk"] - 0.6) < 1e-9


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, err = run(capsys, "tvdist", MEAN, "--out", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["result"]["tv"] == "2/5"


def test_exit_codes(capsys, tmp_path, monkeypatch):
    # 1: input errors
    assert run(capsys, "risk", write(tmp_path, "{oops"))[0] == 1
    assert run(capsys, "risk", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "risk", MEAN, "--tolerance", "1e-6")[0] == 1
    assert run(capsys, "risk", MEAN, "--mode", "float", "--tolerance", "-1")[0] == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 1
    capsys.readouterr()
    # 2: empty hypothesis / no powered e-variable
    empty = two_point(P={"constraints": [{"coeffs": [1, 0], "rel": ">=", "rhs": 2}]}, Q={"generators": [[0, 1]]})
    assert run(capsys, "risk", write(tmp_path, empty))[0] == 2
    same = two_point(P={"generators": [[1, 0], [0, 1]]}, Q={"generators": [["1/2", "1/2"]]})
    assert run(capsys, "evariable", write(tmp_path, same))[0] == 2

    # 3: numeric failure
    def boom(*a, **k):
        raise NumericBreakdown("pivot below threshold")

    monkeypatch.setattr(cli, "minimax_risk", boom)
    code, _, err = run(capsys, "risk", MEAN, "--mode", "float")
    assert code == 3 and "NumericBreakdown" in err


def test_determinism(capsys):
    reports = []
    for _ in range(2):
        _, out, _ = run(capsys, "risk", MEAN)
        reports.append(strip_volatile(json.loads(out)))
    assert reports[0] == reports[1]


def test_report_round_trip(capsys):
    for argv in (["risk", MEAN], ["sweep", "escaping-mass", "--sizes", "2,4"], ["risk", MEAN, "--mode", "float"]):
        _, out, _ = run(capsys, *argv)
        parsed = parse_report(out)
        assert emit_report(parsed) == out
        assert parse_report(emit_report(parsed)) == parsed
