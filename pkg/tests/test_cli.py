import copy
import json

import pytest

from htransfer.cli import main
from htransfer.pipeline import bundled_problems, load_problem, run_problem, validate
from htransfer.report import report_diff, to_json, to_text


def write(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def algebra_doc(relations, gens=None):
    return {
        "name": "alg",
        "coefficients": "Z",
        "max_degree": 6,
        "pipeline": "verify",
        "algebra": {
            "generators": gens or [{"name": "a", "degree": 2}, {"name": "c", "degree": 3}],
            "relations": relations,
        },
    }


def bar_doc(products):
    return {
        "name": "tbl",
        "coefficients": "Z2",
        "max_degree": 6,
        "pipeline": "bar",
        "bar": {"letters": {"x": 2, "y": 2, "z": 4, "w": 6}, "products": products},
    }


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out.split()
    assert out == bundled_problems()
    assert {"torsion_dga", "bar_bialgebra", "complex_m", "empty"} <= set(out)


def test_bundled_files_validate(capsys):
    for name in bundled_problems():
        assert validate(load_problem(name)) == []
        assert main(["validate", name]) == 0
    assert "valid" in capsys.readouterr().out


def test_run_empty_complex(tmp_path):
    assert main(["run", "empty", "--report-dir", str(tmp_path), "--quiet"]) == 0
    rep = json.loads((tmp_path / "empty.json").read_text())
    assert rep["homology"] and all(v["group"] == "0" for v in rep["homology"].values())
    assert rep["ok"] is True


def test_run_small_integer_complex(tmp_path):
    assert main(["run", "complex_m", "--report-dir", str(tmp_path), "--quiet"]) == 0
    rep = json.loads((tmp_path / "complex_m.json").read_text())
    assert [rep["homology"][str(k)]["group"] for k in range(5)] == ["Z", "0", "Z2", "0", "0"]
    assert (tmp_path / "complex_m.txt").read_text().startswith("problem: complex_m")


def test_parse_error_exit_code(tmp_path, capsys):
    path = write(tmp_path, "{not json")
    assert main(["run", path, "--report-dir", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "p.json:1:2" in err
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_schema_error_is_located(tmp_path, capsys):
    doc = load_problem("empty")
    doc["max_degree"] = "three"
    assert main(["validate", write(tmp_path, doc)]) == 3
    assert "max_degree" in capsys.readouterr().out
    assert main(["run", write(tmp_path, doc), "--report-dir", str(tmp_path)]) == 3


def test_mixed_degree_relation_is_located():
    problems = validate(algebra_doc(["a+c"]))
    assert len(problems) == 1
    assert problems[0].startswith("algebra:") and "relation 1" in problems[0]


def test_unparsable_relation_is_located(tmp_path, capsys):
    doc = algebra_doc(["a+"])
    assert main(["validate", write(tmp_path, doc)]) == 2
    assert "algebra/relations/0" in capsys.readouterr().err


def test_ideal_not_closed_is_located():
    gens = [{"name": "a", "degree": 2}, {"name": "c", "degree": 3, "d": "a^2"}]
    problems = validate(algebra_doc(["c"], gens))
    assert problems and "not in the ideal" in problems[0] and "degree 3" in problems[0]


def test_nonassociative_table_is_located():
    good = bar_doc([["x", "y", "z"]])
    assert validate(good) == []
    bad = bar_doc([["x", "y", "z"], ["z", "x", "w"]])
    problems = validate(bad)
    assert problems and problems[0].startswith("bar:") and "not associative at ('x', 'y', 'x')" in problems[0]


def test_complex_d_squared_is_located():
    doc = {
        "name": "bad",
        "coefficients": "Z",
        "max_degree": 2,
        "pipeline": "homology",
        "complex": {"groups": {"0": [0], "1": [0], "2": [0]}, "differentials": {"0": [[1]], "1": [[1]]}},
    }
    problems = validate(doc)
    assert problems == ["complex/differentials/0: d^2 != 0"]


def test_bad_pin_override(tmp_path):
    assert main(["run", "empty", "--pin", "nonsense", "--report-dir", str(tmp_path), "--quiet"]) == 2


def test_verification_failure_exit_code(tmp_path):
    doc = load_problem("torsion_dga")
    doc["transfer"]["max_arity"] = 3
    doc["transfer"]["iso_checks"] = [[1, 2, 0]]
    doc["transfer"].pop("iso_findings")
    assert main(["run", write(tmp_path, doc), "--report-dir", str(tmp_path), "--quiet"]) == 1
    rep = json.loads((tmp_path / "torsion_dga.json").read_text())
    assert rep["ok"] is False
    assert rep["homology_isomorphisms"]["required"][0]["failures"]


def test_report_diff_basics():
    a = {"x": 1, "y": {"z": [1, 2]}}
    assert report_diff(a, copy.deepcopy(a)) == []
    b = {"x": 1, "y": {"z": [1, 3]}, "w": 0}
    assert report_diff(a, b) == [
        {"path": "/w", "change": "added", "new": 0},
        {"path": "/y/z/1", "change": "changed", "old": 2, "new": 3},
    ]


def test_diff_command(tmp_path, capsys):
    p = write(tmp_path, {"a": 1}, "a.json")
    q = write(tmp_path, {"a": 2}, "b.json")
    assert main(["diff", p, p]) == 0
    assert json.loads(capsys.readouterr().out) == []
    assert main(["diff", p, q]) == 1


def fast_bar_bialgebra():
    doc = load_problem("bar_bialgebra")
    doc["bar"].pop("checks_max_degree")
    return doc


@pytest.fixture(scope="module")
def bar_bialgebra_pin_reports():
    a, ok_a = run_problem(fast_bar_bialgebra())
    b, ok_b = run_problem(fast_bar_bialgebra(), pins=["g2:beta|beta=[a3|a2]"])
    assert ok_a and ok_b
    return a, b


def test_diff_localizes_to_pins(bar_bialgebra_pin_reports):
    a, b = bar_bialgebra_pin_reports
    paths = {d["path"] for d in report_diff(a, b)}
    assert "/homotopies/g2/beta|beta" in paths
    assert all(p.startswith(("/homotopies/g2/", "/operations/w22/", "/paths/w22/", "/choices/")) for p in paths)
    assert a["operations"]["w22"]["beta|beta"] == "alpha2|alpha3"


def test_diff_localizes_to_truncation():
    a, _ = run_problem(load_problem("torsion_dga"), arity=4)
    b, _ = run_problem(load_problem("torsion_dga"), max_degree=14, arity=4)
    paths = [d["path"] for d in report_diff(a, b)]
    assert paths and all(p.startswith("/truncation/") for p in paths)


def test_reports_are_deterministic(tmp_path):
    a, _ = run_problem(load_problem("torsion_dga"), arity=3)
    b, _ = run_problem(load_problem("torsion_dga"), arity=3)
    assert to_json(a) == to_json(b)
    assert to_text(a) == to_text(b)
    assert main(["run", "complex_m", "--report-dir", str(tmp_path / "1"), "--quiet"]) == 0
    assert main(["run", "complex_m", "--report-dir", str(tmp_path / "2"), "--quiet"]) == 0
    assert (tmp_path / "1" / "complex_m.json").read_bytes() == (tmp_path / "2" / "complex_m.json").read_bytes()


def test_text_report_mentions_results(tmp_path, capsys):
    assert main(["run", "torsion_dga", "--arity", "3", "--report-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "mu_H(u|v) = w" in out
    assert "mu_H(v|u) = w" in out
    assert "m3(u|u|u) = v" in out
    assert "result: ok" in out
