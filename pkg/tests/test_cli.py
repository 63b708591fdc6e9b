import json
import shutil
import subprocess

import pytest

from relweyl.cli import main, render_dynkin
from relweyl.root_datum import build_simply_connected


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_c2(capsys):
    code, out, _ = run(capsys, "table", "--type", "C", "--rank", "2", "--p", "3", "--json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 1
    assert rows[0]["generator_values"] == [{"node": 1, "value_order": 2, "value_coords": [1]}]


def test_table_a5_has_three_block_sizes(capsys):
    code, out, _ = run(capsys, "table", "--type", "A", "--rank", "5", "--p", "5", "--json")
    assert code == 0
    factors = sorted(r["center_invariant_factors"][0] for r in json.loads(out)["rows"])
    assert factors == [2, 3, 6]


def test_table_g2_is_empty(capsys):
    code, out, _ = run(capsys, "table", "--type", "G", "--rank", "2", "--p", "5", "--json")
    assert code == 0 and json.loads(out)["rows"] == []


def test_table_text_output(capsys):
    code, out, _ = run(capsys, "table", "--type", "B", "--rank", "3", "--p", "3")
    assert code == 0
    assert "#1---o2==>#3" in out


def test_table_bad_prime_exits_2(capsys):
    code, _, err = run(capsys, "table", "--type", "B", "--rank", "3", "--p", "2")
    assert code == 2 and "bad" in err


def test_output_is_byte_deterministic(capsys):
    first = run(capsys, "table", "--type", "D", "--rank", "6", "--p", "3", "--json")[1]
    second = run(capsys, "table", "--type", "D", "--rank", "6", "--p", "3", "--json")[1]
    assert first == second


@pytest.mark.parametrize("args,count,sign", [
    (("--type", "B", "--rank", "3", "--levi", "1,3", "--p", "5"), 2, 1),
    (("--type", "C", "--rank", "2", "--levi", "2", "--p", "3"), 1, -1),
    (("--type", "D", "--rank", "5", "--levi", "1,3,4,5", "--p", "3"), 4, 1),
])
def test_components(capsys, args, count, sign):
    code, out, _ = run(capsys, "components", *args)
    data = json.loads(out)
    assert code == 0
    assert (data["component_count"], data["phi_sign"], data["free_rank"]) == (count, sign, 1)


def test_components_precondition_failure(capsys):
    code, _, _ = run(capsys, "components", "--type", "A", "--rank", "5", "--levi", "1,3,5",
                     "--p", "5")
    assert code == 2


@pytest.mark.parametrize("args", [
    ("--k", "2", "--d", "2", "--field", "rational", "--samples", "10"),
    ("--k", "3", "--d", "2", "--field", "13", "--samples", "3"),
    ("--k", "1", "--d", "4", "--samples", "2"),
])
def test_verify_sln_passes(capsys, args):
    code, out, _ = run(capsys, "verify-sln", *args)
    assert code == 0 and json.loads(out)["failures"] == 0


def test_verify_sln_seed(capsys, monkeypatch):
    monkeypatch.setenv("RELWEYL_SEED", "11")
    code, out, _ = run(capsys, "verify-sln", "--k", "2", "--d", "2", "--samples", "2")
    assert code == 0 and json.loads(out)["seed"] == 11
    monkeypatch.setenv("RELWEYL_SEED", "x")
    assert run(capsys, "verify-sln", "--k", "2", "--d", "2")[0] == 2


def test_verify_sln_input_errors(capsys):
    assert run(capsys, "verify-sln", "--k", "2", "--d", "2", "--field", "9")[0] == 2
    assert run(capsys, "verify-sln", "--k", "2", "--d", "3", "--field", "5")[0] == 2
    assert run(capsys, "verify-sln", "--k", "0", "--d", "2")[0] == 2


def test_verify_sln_reports_failures(capsys, monkeypatch):
    monkeypatch.setattr("relweyl.cli.verify_det_identity", lambda z, d: False)
    code, out, _ = run(capsys, "verify-sln", "--k", "2", "--d", "2", "--samples", "1")
    assert code == 1 and json.loads(out)["failures"] == 1


def test_restrict_split_and_twisted(capsys):
    base = ("restrict", "--type", "A", "--rank", "3", "--levi", "1,3", "--p", "5", "--q", "5")
    code, out, _ = run(capsys, *base, "--twist", "")
    assert code == 0 and json.loads(out)["label_coords"] == [0]
    code, out, _ = run(capsys, *base, "--twist", "s2")
    data = json.loads(out)
    assert code == 0 and data["label_coords"] == [1] and data["h1_group"] == [2]
    assert "q_caveat" in data


def test_restrict_invalid_twist(capsys):
    base = ("restrict", "--type", "A", "--rank", "3", "--levi", "1,3", "--p", "5", "--q", "5")
    assert run(capsys, *base, "--twist", "s9")[0] == 2
    assert run(capsys, *base, "--twist", "s1")[0] == 2
    assert run(capsys, *base, "--twist", "t4")[0] == 2


def test_restrict_via_c3(capsys):
    code, out, _ = run(capsys, "restrict", "--type", "C", "--rank", "3", "--levi", "3",
                       "--via", "2,3", "--twist", "s1s2s1", "--inner-twist", "s2", "--p", "3",
                       "--q", "9")
    data = json.loads(out)
    assert code == 0 and data["transitive"]
    assert data["label_coords"] == data["composite_label_coords"]


def test_input_document(capsys, tmp_path):
    doc = tmp_path / "in.json"
    doc.write_text(json.dumps({"type": "A3", "levi": [1, 3], "p": 5, "q": 25, "twist": "s2"}))
    code, out, _ = run(capsys, "restrict", "--input", str(doc))
    assert code == 0 and json.loads(out)["label_coords"] == [1]
    doc.write_text(json.dumps({"type": {"cartan": [[2, -1], [-2, 2]]}, "p": 3}))
    code, out, _ = run(capsys, "table", "--input", str(doc), "--json")
    assert code == 0 and len(json.loads(out)["rows"]) == 1
    doc.write_text(json.dumps({"type": "A3", "colour": 1}))
    assert run(capsys, "table", "--input", str(doc))[0] == 2
    assert run(capsys, "table", "--input", str(tmp_path / "missing.json"))[0] == 2


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "table")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "table", "--type", "Q", "--rank", "3")[0] == 2


def test_dynkin_rendering():
    assert render_dynkin(build_simply_connected("C3"), (3,)) == "o1---o2==<#3"
    assert render_dynkin(build_simply_connected("G2"), (1,)) == "#1=3<o2"
    d4 = render_dynkin(build_simply_connected("D4"), (1, 3, 4))
    assert d4.splitlines() == ["#1---o2---#3   #4", "  o2 --- #4"]


@pytest.mark.skipif(shutil.which("relweyl") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["relweyl", "table", "--type", "C", "--rank", "2", "--p", "3", "--json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["group"] == "C2"
