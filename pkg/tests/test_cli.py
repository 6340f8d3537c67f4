import csv
import io
import json
import math

import pytest

from combmag.cli import main


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


EXAMPLE = {"kind": "category", "objects": ["a", "b", "c"], "hom": {"a->b": 2, "a->c": 2, "b->c": 3},
           "flags": {"skeletal": True, "idempotents_trivial": True}}
ONES = {"kind": "category", "objects": ["u", "v"], "hom": {"u->v": 1, "v->u": 1}}
GRID = {"kind": "metric", "points": {f"x{k + 1}": [i, j] for k, (j, i) in enumerate(
    [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3)])}}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_det_example(tmp_path, capsys):
    code, out, _ = run(capsys, "det", write(tmp_path, "c.json", EXAMPLE))
    rep = json.loads(out)
    assert code == 0
    assert rep["determinant"] == "1" and rep["linear_subdigraph_count"] == 1
    assert rep["residual_bareiss"] == "0"


def test_det_identity(tmp_path, capsys):
    ident = {"kind": "matrix", "entries": [[int(i == j) for j in range(4)] for i in range(4)]}
    code, out, _ = run(capsys, "det", write(tmp_path, "i.json", ident))
    assert code == 0 and json.loads(out)["determinant"] == "1"


def test_moebius_example(tmp_path, capsys):
    code, out, _ = run(capsys, "moebius", write(tmp_path, "c.json", EXAMPLE))
    rep = json.loads(out)
    assert code == 0
    assert rep["moebius"]["entries"][0][2] == "4"
    ac = rep["connections"]["a->c"]
    assert ac["census_by_cycle_count"] == {"0": 6, "1": 2}
    assert (ac["positive_weight"], ac["negative_weight"]) == ("6", "2")
    assert rep["method_cross_checks"]["leinster_residual"] == "0"
    assert rep["vanishing_violations"] == []


def test_moebius_poset_runs_hall(tmp_path, capsys):
    chain = {"kind": "poset", "elements": ["a", "b", "c"], "covers": [["a", "b"], ["b", "c"]]}
    code, out, _ = run(capsys, "moebius", write(tmp_path, "p.json", chain))
    assert code == 0 and json.loads(out)["method_cross_checks"]["hall_residual"] == "0"


def test_singular_needs_general(tmp_path, capsys):
    path = write(tmp_path, "o.json", ONES)
    code, _, err = run(capsys, "moebius", path)
    assert code == 2 and "--general" in err
    code, out, _ = run(capsys, "moebius", path, "--general")
    assert code == 0 and json.loads(out)["magnitude"] == "1"
    code, out, _ = run(capsys, "pseudoinverse", path)
    assert code == 0 and json.loads(out)["rank"] == 1


def test_magnitude_two_point_csv(tmp_path, capsys):
    two = {"kind": "metric", "distances": [[0, 1], [1, 0]]}
    code, out, _ = run(capsys, "magnitude", write(tmp_path, "m.json", two), "--t-min", "0.1", "--t-max", "10",
                       "--t-steps", "12", "--out", "csv", "--threads", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 12
    for r in rows:
        t = float(r["t"])
        assert float(r["magnitude"]) == pytest.approx(2 / (1 + math.exp(-t)), rel=1e-9)
        assert float(r["residual"]) < 1e-9


def test_magnitude_paths(tmp_path, capsys):
    code, out, _ = run(capsys, "magnitude", write(tmp_path, "g.json", GRID), "--t", "1", "--paths")
    rep = json.loads(out)
    assert code == 0 and rep["max_paths_discrepancy"] < 1e-9


def test_one_point_constant(tmp_path, capsys):
    one = {"kind": "metric", "distances": [[0]]}
    code, out, _ = run(capsys, "magnitude", write(tmp_path, "1.json", one), "--t", "0.1,1,10")
    assert [r["magnitude"] for r in json.loads(out)["curve"]] == [1.0, 1.0, 1.0]


def test_error_codes(tmp_path, capsys):
    two = write(tmp_path, "m.json", {"kind": "metric", "distances": [[0, 1], [1, 0]]})
    assert run(capsys, "magnitude", two, "--t", "0")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "det", str(tmp_path / "missing.json"))[0] == 1
    bad = write(tmp_path, "b.json", "{")
    assert run(capsys, "det", bad)[0] == 1
    assert run(capsys, "magnitude", write(tmp_path, "g.json", GRID), "--max-n", "3")[0] == 4


def test_verify_triangle_violation(tmp_path, capsys):
    bad = {"kind": "metric", "distances": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}
    code, out, _ = run(capsys, "verify", write(tmp_path, "b.json", bad))
    assert code == 3 and json.loads(out)["failed"] >= 1


def test_verify_matrix_deterministic(tmp_path, capsys):
    m = {"kind": "matrix", "entries": [[2, -1, 0], [1, 3, 1], [0, 2, -2]]}
    path = write(tmp_path, "m.json", m)
    first = run(capsys, "verify", path, "--seed", "7")
    second = run(capsys, "verify", path, "--seed", "7")
    assert first == second and first[0] == 0


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "det", write(tmp_path, "c.json", EXAMPLE), "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["determinant"] == "1"


def test_metric_singular_sample_falls_back_with_general(tmp_path, capsys):
    dup = {"kind": "metric", "distances": [[0, 0, 1], [0, 0, 1], [1, 1, 0]]}
    path = write(tmp_path, "d.json", dup)
    code, out, _ = run(capsys, "magnitude", path, "--t", "1")
    assert code == 0 and json.loads(out)["curve"][0]["singular"]
    code, out, _ = run(capsys, "magnitude", path, "--t", "1", "--general")
    row = json.loads(out)["curve"][0]
    assert row["rank"] == 2
    assert row["magnitude"] == pytest.approx(2 / (1 + math.exp(-1)), rel=1e-12)
