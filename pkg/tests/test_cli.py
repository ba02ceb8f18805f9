import csv
import io
import json
from fractions import Fraction as F

import pytest

from bvmax import cli, theorems
from bvmax.funcspace import Interval, StepFunction, dump_function, load_function
from bvmax.gallery import char_interval, sawtooth_example


@pytest.fixture
def indicator(tmp_path):
    path = tmp_path / "f.json"
    dump_function(char_interval(0, 1), path)
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_closed_form(capsys, indicator):
    code, out, _ = run(capsys, "eval", indicator, "--x", "2", "-1", "1/2")
    assert code == 0
    assert out == "2,0.5\n-1,0.5\n0.5,1\n"


def test_eval_exact_rationals_json(capsys, indicator):
    code, out, _ = run(capsys, "eval", indicator, "--x", "3", "--format", "json", "--exact-rationals")
    assert json.loads(out) == [{"x": "3", "value": "1/3"}]


def test_eval_seventeen_digits(capsys, indicator):
    _, out, _ = run(capsys, "eval", indicator, "--x", "3")
    assert float(out.split(",")[1]) == 1 / 3


def test_eval_constant(capsys, tmp_path):
    path = tmp_path / "c.json"
    dump_function(StepFunction.constant(3, Interval(0, 5)), path)
    _, out, _ = run(capsys, "eval", str(path), "--x", "1", "4")
    assert out == "1,3\n4,3\n"


def test_eval_two_pieces(capsys, tmp_path):
    # pieces 2 on [0, 1], 1 on [1, 3]: at x = 2 the best window is [0, 2]
    path = tmp_path / "p.json"
    dump_function(StepFunction(Interval(0, 3), (1,), (2, 1)), path)
    _, out, _ = run(capsys, "eval", str(path), "--x", "2")
    assert out == "2,1.5\n"


def test_eval_local(capsys, indicator):
    _, out, _ = run(capsys, "eval", indicator, "--x", "2", "--R", "2", "--exact-rationals")
    assert out == "2,1/2\n"


def test_eval_grid_discrete(capsys, tmp_path):
    path = tmp_path / "f.json"
    dump_function(char_interval(0, 1, Interval(-1, 2)), path)
    _, out, _ = run(capsys, "eval", str(path), "--grid=-1:2:3", "--engine", "discrete", "--format", "tsv")
    assert out == "-0.5\t0.5\n0.5\t1\n1.5\t0.5\n"


def test_eval_pwl(capsys, tmp_path):
    u, _ = sawtooth_example(2)
    path = tmp_path / "u.json"
    dump_function(u, path)
    code, out, _ = run(capsys, "eval", str(path), "--x", "1/8")
    assert code == 0 and float(out.split(",")[1]) > 0


@pytest.mark.parametrize(
    "extra",
    [["--R", "0", "--x", "1"], ["--R", "-1", "--x", "1"], [], ["--grid", "2:1:4"], ["--engine", "discrete", "--x", "1"]],
)
def test_eval_bad_arguments(capsys, indicator, extra):
    code, _, err = run(capsys, "eval", indicator, *extra)
    assert code == 2 and err.startswith("error:")


def test_eval_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "eval", str(bad), "--x", "0")[0] == 2
    bad.write_text(json.dumps({"kind": "step", "domain": [0, 1], "breakpoints": [2], "values": [1, 2]}))
    assert run(capsys, "eval", str(bad), "--x", "0")[0] == 2
    assert run(capsys, "eval", str(tmp_path / "missing.json"), "--x", "0")[0] == 2


def test_verify_theorem_main(capsys):
    code, out, err = run(capsys, "verify", "theorem-main", "--count", "20", "--seed", "7")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 20 and all(r["passed"] for r in reports)
    assert "20/20 passed" in err


def test_verify_deterministic(capsys):
    a = run(capsys, "verify", "structure", "--count", "5", "--seed", "2")[1]
    b = run(capsys, "verify", "structure", "--count", "5", "--seed", "2")[1]
    assert a == b


def test_verify_cantor(capsys):
    code, out, _ = run(capsys, "verify", "cantor", "--n", "1")
    (r,) = json.loads(out)
    assert code == 0 and r["notes"]["measure"]["exact"] == "3/4"


def test_verify_tsv(capsys):
    code, out, _ = run(capsys, "verify", "usc", "--K", "8", "--format", "tsv")
    rows = list(csv.reader(io.StringIO(out), delimiter="\t"))
    assert rows[0][0] == "claim" and rows[1][-1] == "pass"


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "nope")[0] == 2


def test_verify_precondition_exit(capsys):
    assert run(capsys, "verify", "cantor", "--n", "5")[0] == 2


def test_verify_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(theorems, "run_suite", lambda *a, **k: [{"passed": False, "claim": "c"}])
    code, _, err = run(capsys, "verify", "theorem-main")
    assert code == 1 and "0/1 passed" in err


def test_gallery_char_interval(capsys, tmp_path):
    code, out, _ = run(capsys, "gallery", "char-interval", "0", "1", "--out", str(tmp_path))
    info = json.loads(out)
    assert code == 0 and info["generator"] == "char-interval"
    assert load_function(info["files"][0]) == char_interval(0, 1)


def test_gallery_fat_cantor_measure(capsys, tmp_path):
    _, out, _ = run(capsys, "gallery", "fat-cantor", "2", "--out", str(tmp_path))
    assert json.loads(out)["measure"] == "45/64"


def test_gallery_sawtooth_both(capsys, tmp_path):
    code, out, _ = run(capsys, "gallery", "sawtooth", "16", "--emit", "both", "--out", str(tmp_path), "--samples", "50")
    files = json.loads(out)["files"]
    assert code == 0 and len(files) == 3
    u, du = sawtooth_example(16)
    assert load_function(files[0]) == u and load_function(files[1]) == du
    rows = list(csv.reader(open(files[2])))
    assert len(rows) == 50 and all(float(v) >= 0 for _, v in rows)


def test_gallery_maximal_exact(capsys, tmp_path):
    run(capsys, "gallery", "char-interval", "0", "1", "--emit", "maximal", "--out", str(tmp_path),
        "--samples", "4", "--exact-rationals")
    rows = list(csv.reader(open(tmp_path / "char-interval-0-1.maximal.csv")))
    # window [-1, 2]: first midpoint -5/8 where Mf = 1/(1 - x)
    assert rows[0] == ["-5/8", "8/13"]


def test_gallery_sqrt_cusp(capsys, tmp_path):
    code, out, _ = run(capsys, "gallery", "sqrt-cusp", "64", "--emit", "both", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["files"][0].endswith(".csv")


@pytest.mark.parametrize("argv", [["gallery", "nope"], ["gallery", "fat-cantor", "9"], ["gallery", "plateau"]])
def test_gallery_errors(capsys, tmp_path, argv):
    assert run(capsys, *argv, "--out", str(tmp_path))[0] == 2


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--n", "1000", "2000", "--repetitions", "1")
    rows = list(csv.DictReader(io.StringIO(out), delimiter="\t"))
    assert code == 0 and [r["n"] for r in rows] == ["1000", "2000"]
    assert all(float(r["hull_ops_per_n"]) <= 4 for r in rows)
    assert all(r["oracle_s"] for r in rows)


def test_bench_bad_size(capsys):
    assert run(capsys, "bench", "--n", "0")[0] == 2


def test_config_defaults_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "bvmax.conf"
    cfg.write_text("# defaults\ncount = 3\nseed = 5\nformat = tsv\n")
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "theorem-main")
    assert code == 0 and len(out.strip().splitlines()) == 4
    _, out, _ = run(capsys, "--config", str(cfg), "verify", "theorem-main", "--format", "json")
    assert len(json.loads(out)) == 3


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("no equals sign here\n")
    assert run(capsys, "--config", str(cfg), "verify", "usc")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing"), "verify", "usc")[0] == 2
