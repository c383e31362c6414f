import csv
import io
import json

import pytest

from incpar.cli import main
from incpar.metrics import COUNTERS, MetricsReport


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_documented_invocations(tmp_path, capsys):
    assert run(["sort", "--n", "1000", "--seed", "1", "--mode", "par", "--validate"], capsys)[0] == 0
    metrics = tmp_path / "m.jsonl"
    code, out, _ = run(["delaunay", "--n", "500", "--seed", "3", "--mode", "seq", "--validate",
                        "--metrics-out", str(metrics)], capsys)
    assert code == 0 and len(out.splitlines()) > 900
    rep = MetricsReport.from_json(metrics.read_text().strip())
    assert rep.validated is True and rep.counters["incircle_count"] > 0
    assert set(rep.counters) == set(COUNTERS["delaunay"])


@pytest.mark.parametrize("algo", ["lp", "closest-pair", "seb", "le-lists", "scc"])
@pytest.mark.parametrize("mode", ["seq", "par"])
def test_each_algorithm_validates(algo, mode, capsys):
    assert run([algo, "--n", "300", "--seed", "2", "--mode", mode, "--validate"], capsys)[0] == 0


def test_file_inputs(tmp_path, capsys):
    pts = tmp_path / "p.txt"
    assert run(["gen", "points", "--n", "50", "--seed", "1", "--out", str(pts)], capsys)[0] == 0
    code, out, _ = run(["closest-pair", "--points", str(pts), "--validate"], capsys)
    assert code == 0 and len(out.split()) == 3
    graph = tmp_path / "g.txt"
    run(["gen", "graph", "--n", "40", "--m", "90", "--seed", "2", "--out", str(graph)], capsys)
    code, out, _ = run(["scc", "--graph", str(graph), "--mode", "par", "--validate"], capsys)
    assert code == 0 and len(out.splitlines()) == 40
    code, out, _ = run(["le-lists", "--input", str(graph), "--validate"], capsys)
    assert code == 0 and out.startswith("0 ")
    keys = tmp_path / "k.txt"
    keys.write_text("3\n1.5\n2\n")
    code, out, _ = run(["sort", "--keys", str(keys), "--validate"], capsys)
    assert code == 0 and out.split() == ["1.5", "2", "3"]
    cons = tmp_path / "c.txt"
    cons.write_text("1 0 1\n0 1 1\n-1 0 0\n0 -1 0\n")
    code, out, _ = run(["lp", "--constraints", str(cons), "--objective", "1,2", "--validate"], capsys)
    assert code == 0 and out.splitlines()[:2] == ["optimal", "1.0 1.0"]


def test_errors_exit_two(tmp_path, capsys):
    assert run(["delaunay", "--points", str(tmp_path / "missing.txt")], capsys)[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n1 nope\n")
    code, _, err = run(["seb", "--points", str(bad)], capsys)
    assert code == 2 and "line 2" in err
    dup = tmp_path / "dup.txt"
    dup.write_text("0 0\n0 0\n1 1\n")
    assert run(["delaunay", "--points", str(dup)], capsys)[0] == 2
    assert run(["delaunay"], capsys)[0] == 2
    with pytest.raises(SystemExit) as ex:
        main(["sort", "--bogus"])
    assert ex.value.code == 2
    with pytest.raises(SystemExit) as ex:
        main(["nosuch"])
    assert ex.value.code == 2


def test_bench_rows(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, _ = run(["bench", "--algo", "sort", "--n", "100,200", "--seeds", "1..3",
                      "--mode", "both", "--out", str(out)], capsys)
    rows = list(csv.DictReader(out.open()))
    assert code == 0 and len(rows) == 12
    keys = [(r["n"], r["seed"], r["mode"]) for r in rows]
    assert keys == [(n, s, m) for n in ("100", "200") for s in ("1", "2", "3") for m in ("seq", "par")]
    code, text, _ = run(["bench", "--algo", "delaunay", "--n", "50", "--seeds", "4",
                         "--mode", "seq"], capsys)
    assert code == 0 and len(list(csv.DictReader(io.StringIO(text)))) == 1


def test_bench_flags_failed_row(capsys):
    # n=1 is too small for closest pair; that row fails and the sweep continues
    code, text, _ = run(["bench", "--algo", "closest-pair", "--n", "1,20", "--seeds", "1",
                         "--mode", "seq"], capsys)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 1 and [r["ok"] for r in rows] == ["False", "True"]
    assert "ValueError" in rows[0]["error"]


def test_bench_output_is_stable_apart_from_wall_time(capsys):
    argv = ["bench", "--algo", "scc", "--n", "200", "--seeds", "1,2", "--mode", "both",
            "--threads", "1"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]

    def strip(text):
        return [{k: v for k, v in r.items() if k != "wall_ms"} for r in csv.DictReader(io.StringIO(text))]

    assert strip(a) == strip(b)


def test_metrics_report_schema():
    rep = MetricsReport("seb", 10, 0, 1, "seq", 1, 10, None,
                        {"update1_calls": 1, "update2_calls": 2}, 1.0, True)
    assert json.loads(rep.to_json())["counters"] == {"update1_calls": 1, "update2_calls": 2}
    with pytest.raises(ValueError):
        MetricsReport("seb", 10, 0, 1, "seq", 1, 10, None, {"visits": 1})
