import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from hoeffding import cli, decomposition
from hoeffding.io import load_input

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
SCHEMAS = HERE.parent / "schema" / "1.0"

# (golden file, argv); regenerate with HO_UPDATE_GOLDEN=1
CASES = [
    ("check_product.json", ["check", "product.json"]),
    ("check_product.txt", ["check", "product.json", "--format", "table"]),
    ("check_bernoulli_dep.json", ["check", "bernoulli_dep.json"]),
    ("check_copied.json", ["check", "copied.json"]),
    ("angles_bernoulli_dep.csv", ["angles", "bernoulli_dep.json"]),
    ("angles_bernoulli_dep.json", ["angles", "bernoulli_dep.json", "--format", "json"]),
    ("angles_dependent3.csv", ["angles", "dependent3.json"]),
    ("decompose_product.json", ["decompose", "product.json"]),
    ("decompose_bernoulli_dep.json", ["decompose", "bernoulli_dep.json"]),
    ("decompose_degenerate.json", ["decompose", "degenerate.json"]),
    ("decompose_dependent3.json", ["decompose", "dependent3.json"]),
    ("indices_dependent3.json", ["indices", "dependent3.json"]),
    ("indices_dependent3.txt", ["indices", "dependent3.json", "--format", "table"]),
    ("indices_dependent3.csv", ["indices", "dependent3.json", "--format", "csv"]),
    ("indices_xor_dep.json", ["indices", "xor_dep.json"]),
    ("indices_bernoulli_dep_subset.json", ["indices", "bernoulli_dep.json", "--which", "structural,pure"]),
    ("explain_dependent3.json", ["explain", "dependent3.json", "--cell", "1,2,0"]),
    ("explain_dependent3.txt", ["explain", "dependent3.json", "--cell", "1,2,0", "--format", "table"]),
    ("bernoulli.json", ["bernoulli", "--q1", "0.5", "--q2", "0.5", "--rho", "0.3", "--g", "1,-0.5,2,0.3"]),
    ("bernoulli.txt", ["bernoulli", "--q1", "0.5", "--q2", "0.5", "--rho", "0.3", "--g", "0,1,1,0",
                       "--format", "table"]),
]


def _argv(args, out):
    resolved = [str(FIXTURES / a) if a.endswith(".json") and (FIXTURES / a).exists() else a for a in args]
    return resolved + ["-o", str(out)]


def run_cli(args, tmp_path, name="out"):
    out = tmp_path / name
    code = cli.main(_argv(args, out))
    return code, (out.read_bytes() if out.exists() else None)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("HO_TOL", raising=False)


@pytest.mark.parametrize("golden,args", CASES, ids=[c[0] for c in CASES])
def test_golden(golden, args, tmp_path):
    code, data = run_cli(args, tmp_path)
    assert code == (3 if golden == "check_copied.json" else 0)
    path = GOLDEN / golden
    if os.environ.get("HO_UPDATE_GOLDEN"):
        path.write_bytes(data)
    assert data == path.read_bytes()


def test_goldens_cover_every_subcommand():
    assert {args[0] for _, args in CASES} == set(cli.COMMANDS)


@pytest.mark.parametrize("golden,args", [c for c in CASES if c[0].endswith(".json")],
                         ids=[c[0] for c in CASES if c[0].endswith(".json")])
def test_reports_match_schema(golden, args):
    doc = json.loads((GOLDEN / golden).read_text())
    schema = json.loads((SCHEMAS / f"{doc['command']}.schema.json").read_text())
    jsonschema.validate(doc, schema)


def test_fixtures_match_input_schema():
    schema = json.loads((SCHEMAS / "input.schema.json").read_text())
    for path in sorted(FIXTURES.glob("*.json")):
        if path.name == "malformed.json":
            continue
        doc = json.loads(path.read_text())
        if path.name == "negative.json":
            with pytest.raises(jsonschema.ValidationError):
                jsonschema.validate(doc, schema)
        else:
            jsonschema.validate(doc, schema)


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_check_product_summary(capsys, tmp_path):
    code, _ = run_cli(["check", "product.json"], tmp_path)
    assert code == 0
    assert capsys.readouterr().err.startswith("assumption1: pass, assumption2: pass, minEigenvalue: 1.0")


def test_check_copied_lists_violation(capsys, tmp_path):
    code, data = run_cli(["check", "copied.json"], tmp_path)
    assert code == 3
    doc = json.loads(data)
    assert doc["assumption1"]["violations"] == [["[1]", "[2]"]]
    assert not doc["strict_nesting"]["pass"]
    assert "assumption1: fail" in capsys.readouterr().err


def test_decompose_refuses_inadmissible(tmp_path, capsys):
    code, data = run_cli(["decompose", "copied.json"], tmp_path)
    assert code == 3 and data is None
    assert "Assumption1NotVerified" in capsys.readouterr().err
    code, _ = run_cli(["decompose", "near_singular.json"], tmp_path)
    assert code == 3
    assert "Assumption2Failed" in capsys.readouterr().err


@pytest.mark.parametrize("name,kind", [
    ("negative.json", "NegativeWeight"),
    ("sum_not_one.json", "SumNotOne"),
    ("wrong_model_size.json", "InputError"),
    ("malformed.json", "InputError"),
    ("missing.json", "InputError"),
])
def test_bad_input_exit_2(name, kind, tmp_path, capsys):
    code = cli.main(["decompose", str(FIXTURES / name)])
    assert code == 2
    assert f"{kind}:" in capsys.readouterr().err


def test_bad_flags_exit_2(tmp_path, capsys):
    fx = str(FIXTURES / "dependent3.json")
    assert cli.main(["explain", fx, "--cell", "1,x"]) == 2
    assert cli.main(["explain", fx, "--cell", "5,0,0"]) == 2
    assert cli.main(["indices", fx, "--which", "bogus"]) == 2
    assert cli.main(["bernoulli", "--q1", "0.5", "--q2", "0.5", "--rho", "0.6", "--g", "0,1,1,0"]) == 2
    assert cli.main(["bernoulli", "--q1", "0.5", "--q2", "0.5", "--rho", "0.3", "--g", "0,1"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["check", fx, "--tol", "-1"])
    assert exc.value.code == 2


def test_explain_zero_probability_cell(tmp_path, capsys):
    code, _ = run_cli(["explain", "degenerate.json", "--cell", "0,1"], tmp_path)
    assert code == 2
    assert "CellNotInSupport" in capsys.readouterr().err


def test_numerical_failure_exit_4(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(decomposition, "MAX_CONDITION", 1e6)
    code, data = run_cli(["decompose", "near_singular.json", "--skip-checks"], tmp_path)
    assert code == 4 and data is None
    assert "SingularSystem" in capsys.readouterr().err


def test_skip_checks_only_changes_stamp(tmp_path):
    for cmd in (["decompose", "dependent3.json"], ["indices", "dependent3.json"],
                ["explain", "dependent3.json", "--cell", "0,0,0"]):
        _, checked = run_cli(cmd, tmp_path, "a")
        _, skipped = run_cli(cmd + ["--skip-checks"], tmp_path, "b")
        a, b = json.loads(checked), json.loads(skipped)
        assert a["unverified"] is False and b["unverified"] is True
        a.pop("unverified"), b.pop("unverified")
        a.pop("admissibility", None), b.pop("admissibility", None)
        assert a == b


def test_repeated_runs_byte_identical(tmp_path):
    for cmd in (["decompose", "dependent3.json"], ["indices", "dependent3.json"]):
        outs = [run_cli(cmd, tmp_path, f"r{i}")[1] for i in range(3)]
        assert outs[0] == outs[1] == outs[2]


def test_separate_processes_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"p{i}.json"
        subprocess.run([sys.executable, "-m", "hoeffding", "indices", str(FIXTURES / "dependent3.json"),
                        "-o", str(out)], check=True, capture_output=True)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == (GOLDEN / "indices_dependent3.json").read_bytes()


def test_stdout_matches_output_file(tmp_path, capsys):
    cli.main(["decompose", str(FIXTURES / "degenerate.json")])
    assert capsys.readouterr().out.encode() == (GOLDEN / "decompose_degenerate.json").read_bytes()


def test_ho_tol_env(monkeypatch, tmp_path):
    seen = []
    real = cli.build_component_subspaces

    def spy(support, **kw):
        seen.append(kw["tol"])
        return real(support, **kw)

    monkeypatch.setattr(cli, "build_component_subspaces", spy)
    monkeypatch.setenv("HO_TOL", "1e-9")
    run_cli(["decompose", "degenerate.json"], tmp_path)
    run_cli(["decompose", "degenerate.json", "--tol", "1e-11"], tmp_path)
    assert seen == [1e-9, 1e-11]
    monkeypatch.setenv("HO_TOL", "abc")
    assert run_cli(["decompose", "degenerate.json"], tmp_path)[0] == 2


def test_csv_format(tmp_path):
    _, data = run_cli(["angles", "bernoulli_dep.json"], tmp_path)
    assert b"\r" not in data and data.endswith(b"\n")
    rows = list(csv.reader(io.StringIO(data.decode())))
    assert rows[0] == ["subset", "[]", "[1]", "[2]", "[1,2]"]
    assert float(rows[2][3]) == pytest.approx(-0.2, abs=1e-10)


def test_decompose_report_content(tmp_path):
    _, data = run_cli(["decompose", "degenerate.json"], tmp_path)
    doc = json.loads(data)
    assert [c["dim"] for c in doc["components"]] == [1, 1, 1, 0]
    assert doc["components"][3]["values"] == [0.0, 0.0, 0.0]
    pmf, model = load_input(FIXTURES / "degenerate.json")
    total = [sum(c["values"][i] for c in doc["components"]) for i in range(3)]
    assert total == pytest.approx([model[0, 0], model[1, 0], model[1, 1]], abs=1e-12)


def test_explain_report_sums(tmp_path):
    _, data = run_cli(["explain", "dependent3.json", "--cell", "1,2,0"], tmp_path)
    doc = json.loads(data)
    assert doc["attribution_sum"] == pytest.approx(doc["model_value"], abs=1e-12)
    assert len(doc["attribution"]) == 8


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "hoeffding", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in cli.COMMANDS:
        assert cmd in out.stdout
