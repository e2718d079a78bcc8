import io
import json
import pathlib
import subprocess
import sys

import pytest

from opgroth.cli import run_command

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def run(argv):
    out = io.StringIO()
    code = run_command(argv, out=out)
    return code, out.getvalue()


def read(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


# ------------------------------------------------------------ exit codes


def test_valid_fixture_exits_zero():
    code, text = run(["check", str(FIXTURES / "walk.cat")])
    assert code == 0
    assert "status: ok" in text


def test_semantic_break_exits_one():
    code, text = run(["check", str(FIXTURES / "broken_unit.cat")])
    assert code == 1
    assert "unit-law violation" in text


def test_syntax_break_exits_two():
    code, text = run(["check", str(FIXTURES / "broken_syntax.cat")])
    assert code == 2
    assert "parse" in text


def test_structural_break_exits_two():
    code, text = run(["check", str(FIXTURES / "incomplete.cat")])
    assert code == 2
    assert "composition_missing" in text


def test_missing_file_exits_two():
    code, _ = run(["check", str(FIXTURES / "does_not_exist.cat")])
    assert code == 2


def test_section_filter():
    code, text = run(["check", str(FIXTURES / "grade.laxtoset"), "--section", "GRADE_iset"])
    assert code == 0
    assert "checked.iset = 1" in text
    code, _ = run(["check", str(FIXTURES / "grade.laxtoset"), "--section", "NOPE"])
    assert code == 2


# ------------------------------------------------------------ mutation matrix

MUTATIONS = [
    ("walk.cat", "u : a -> b", "u : a -> b\ncompose u id_a = id_b"),
    ("grade.laxtoset", "nu [1,2] (1,1) (r,r) = q", "nu [1,2] (1,1) (r,r) = p"),
    ("grade.laxtoset", "tensor [1,2] (0,1) = 1", "tensor [1,2] (0,1) = 0"),
    ("l2.laxtoset", "map le_0_1 s = b", "map le_0_1 s = a"),
    ("qconv.laxtoset", "nu (1,1) (0,0) (f1,f1) = f1", "nu (1,1) (0,0) (f1,f1) = f0"),
]


@pytest.mark.parametrize("name,old,new", MUTATIONS, ids=[f"m{i}" for i in range(len(MUTATIONS))])
def test_single_entry_mutations_flip_exit_code(tmp_path, name, old, new):
    baseline = read(name)
    assert old in baseline, f"mutation anchor missing in {name}"
    target = tmp_path / name
    target.write_text(baseline.replace(old, new, 1), encoding="utf-8")
    code, _ = run(["--max-arity", "2", "check", str(FIXTURES / name)])
    assert code == 0
    code, text = run(["--max-arity", "2", "check", str(target)])
    assert code == 1, text


# ------------------------------------------------------------ report modes


def test_json_report_is_one_record_per_line():
    code, text = run(["--report", "json", "check", str(FIXTURES / "broken_unit.cat")])
    assert code == 1
    lines = [json.loads(line) for line in text.strip().splitlines()]
    assert all(rec["v"] == 1 for rec in lines)
    assert lines[-1]["summary"] is True
    assert lines[-1]["status"] == "failed"
    assert any(rec.get("check") == "category.unit" for rec in lines[:-1])


def test_jobs_flag_does_not_change_report_bytes():
    argv = ["check", str(FIXTURES / "grade.laxtoset")]
    _, text1 = run(["--jobs", "1"] + argv)
    _, text4 = run(["--jobs", "4"] + argv)
    assert text1 == text4
    argv = ["roundtrip", str(FIXTURES / "corpus_small.spec")]
    _, text1 = run(["--jobs", "1"] + argv)
    _, text4 = run(["--jobs", "4"] + argv)
    assert text1 == text4


# ------------------------------------------------------------ subcommands


def test_factorize_matches_contract():
    code, text = run(["factorize", "3", "2", "2,1,1"])
    assert code == 0
    assert "g = [1,1,2]" in text
    assert "h = [3,1,2]" in text


def test_factorize_rejects_bad_values():
    code, _ = run(["factorize", "3", "2", "2,1,9"])
    assert code == 2


def test_roundtrip_reports_counts():
    code, text = run(["roundtrip", str(FIXTURES / "corpus_small.spec")])
    assert code == 0
    assert "roundtrip.naturality_squares" in text
    assert "status: ok" in text


def test_roundtrip_seed_changes_cells_but_not_status():
    code1, text1 = run(["--seed", "1", "roundtrip", str(FIXTURES / "corpus_small.spec")])
    code2, _ = run(["--seed", "2", "roundtrip", str(FIXTURES / "corpus_small.spec")])
    assert code1 == code2 == 0
    assert "status: ok" in text1


def test_operad_table_prints_mu_lines():
    code, text = run(["operad-table", str(FIXTURES / "grade.laxtoset"), "--operad", "Assoc_3"])
    assert code == 0
    assert "mu [1,1] [1] [2,1] = [2,1]" in text


def test_construction_pipeline(tmp_path):
    out_fib = tmp_path / "fib.spec"
    code, _ = run(["groth", str(FIXTURES / "grade.laxtoset"), "--iset", "GRADE_iset", "-o", str(out_fib)])
    assert code == 0
    code, text = run(["check", str(out_fib)])
    assert code == 0, text
    out_iset = tmp_path / "back.spec"
    code, _ = run(["transpose", str(out_fib), "--fib", "int_GRADE_iset", "-o", str(out_iset)])
    assert code == 0
    code, _ = run(["check", str(out_iset)])
    assert code == 0


def test_structured_pipeline(tmp_path):
    # run at truncation 2 to stay quick: serialize a small grade family
    from opgroth.dsl import DocBuilder, ser_laxtoset
    from opgroth.ogroth import grade_laxtoset

    small = tmp_path / "grade2.laxtoset"
    b = DocBuilder()
    ser_laxtoset(b, grade_laxtoset(2), suggested="GRADE")
    small.write_text(b.text(), encoding="utf-8")

    out_ofib = tmp_path / "ofib.spec"
    code, text = run(["ogroth", str(small), "--laxtoset", "GRADE", "-o", str(out_ofib)])
    assert code == 0, text
    code, text = run(["check", str(out_ofib)])
    assert code == 0, text
    out_back = tmp_path / "back.laxtoset"
    code, _ = run(["otranspose", str(out_ofib), "--ofib", "int_GRADE", "-o", str(out_back)])
    assert code == 0
    code, _ = run(["check", str(out_back)])
    assert code == 0
    code, text = run(["oroundtrip", str(small)])
    assert code == 0, text
    assert "status: ok" in text


def test_env_var_sets_default_truncation(monkeypatch, tmp_path):
    spec = tmp_path / "assoc.spec"
    spec.write_text("[operad A]\nbuiltin = assoc\n", encoding="utf-8")
    monkeypatch.setenv("OPGROTH_MAX_ARITY", "2")
    code, text = run(["operad-table", str(spec), "--operad", "A"])
    assert code == 0
    # no arity-3 operations appear at truncation 2
    assert "[1,2,3]" not in text and "[2,1]" in text


def test_module_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "opgroth", "factorize", "2", "2", "2,1"],
        capture_output=True,
        text=True,
        cwd=str(FIXTURES.parent),
        timeout=60,
    )
    assert result.returncode == 0
    assert "g = [1,2]" in result.stdout
