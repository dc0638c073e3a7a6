import subprocess
import sys

import numpy as np
import pytest

from matpoafd.bench import read_records
from matpoafd.cli import build_parser, main
from matpoafd.csvio import read_matrix, write_matrix


@pytest.fixture
def files(tmp_path):
    def make(name, a):
        p = tmp_path / name
        write_matrix(p, np.asarray(a, dtype=float))
        return str(p)

    return make


def run_ok(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    assert code == 0, out.err
    return out.out


def test_solve_identity(files, tmp_path, capsys):
    out = run_ok(["solve", "--matrix", files("I3.csv", np.eye(3)), "--rhs", files("y.csv", [[1], [2], [3]]),
                  "--out", str(tmp_path / "w.csv")], capsys)
    assert (tmp_path / "w.csv").read_text() == "1\n2\n3\n"
    assert "residual=0" in out and "norm=" in out and "steps=3" in out


@pytest.mark.parametrize("method,extra", [
    ("poafd", ["--max-select", "2", "--tol", "1e-10"]), ("lsqr", ["--tol", "1e-12"]), ("cgls", []),
    ("ridge", ["--lambda", "0"]), ("pcr", ["--k", "3"]), ("lasso", ["--lambda", "1e-9"]),
])
def test_solve_methods(files, tmp_path, capsys, rng, method, extra):
    x = rng.standard_normal((12, 3))
    w_true = np.array([1.0, -2.0, 0.5])
    out = tmp_path / "w.csv"
    run_ok(["solve", "--matrix", files("x.csv", x), "--rhs", files("y.csv", (x @ w_true)[:, None]),
            "--out", str(out), "--method", method, *extra], capsys)
    w = read_matrix(out)[:, 0]
    if method == "poafd":
        assert np.count_nonzero(w) == 2
    else:
        np.testing.assert_allclose(w, w_true, atol=1e-6)


def test_pinv_one_step_parallel(files, tmp_path, capsys):
    for method in ("one-step", "two-step", "svd"):
        for inner in ("poafd", "lsqr", "cgls"):
            out = tmp_path / "w.csv"
            run_ok(["pinv", "--matrix", files("p.csv", [[1, 1], [0, 0]]), "--rhs", files("y.csv", [[2], [0]]),
                    "--out", str(out), "--method", method, "--inner", inner], capsys)
            np.testing.assert_allclose(read_matrix(out)[:, 0], [1, 1], atol=1e-12)


def test_missing_file(files, tmp_path, capsys):
    missing = str(tmp_path / "missing.csv")
    code = main(["solve", "--matrix", missing, "--rhs", files("y.csv", [[1]]), "--out", str(tmp_path / "w")])
    err = capsys.readouterr().err
    assert code == 3 and missing in err and err.count("\n") == 1


def test_malformed_csv(files, tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,oops\n")
    code = main(["solve", "--matrix", str(bad), "--rhs", files("y.csv", [[1], [2]]), "--out", str(tmp_path / "w")])
    err = capsys.readouterr().err
    assert code == 3 and str(bad) in err and "row 2, column 2" in err


def test_dimension_mismatch(files, tmp_path, capsys):
    code = main(["pinv", "--method", "svd", "--matrix", files("x.csv", np.eye(2)),
                 "--rhs", files("y.csv", [[1], [2], [3]]), "--out", str(tmp_path / "w")])
    err = capsys.readouterr().err
    assert code == 3 and "y.csv" in err and "row" in err


def test_numerical_failure(files, tmp_path, capsys):
    code = main(["solve", "--method", "ridge", "--lambda", "0", "--matrix", files("x.csv", [[1, 1], [1, 1]]),
                 "--rhs", files("y.csv", [[1], [1]]), "--out", str(tmp_path / "w")])
    assert code == 4 and "numerical failure" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [], ["solve"], ["solve", "--matrix", "a", "--rhs", "b", "--out", "c", "--method", "magic"],
    ["pinv", "--matrix", "a", "--rhs", "b", "--out", "c"],
    ["bench", "--preset", "fig9", "--out", "c"], ["bench", "--preset", "fig1", "--out", "c", "--trials", "0"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_compare_unknown_method(files, tmp_path, capsys):
    code = main(["compare", "--matrix", files("x.csv", np.eye(2)), "--rhs", files("y.csv", [[1], [2]]),
                 "--methods", "poafd,magic", "--out", str(tmp_path / "c.csv")])
    assert code == 2


def test_compare(files, tmp_path, capsys, rng):
    x = rng.standard_normal((15, 4))
    out = tmp_path / "c.csv"
    run_ok(["compare", "--matrix", files("x.csv", x), "--rhs", files("y.csv", rng.standard_normal((15, 1))),
            "--methods", "poafd,lsqr,two-step,mp,fs", "--out", str(out)], capsys)
    recs = read_records(out)
    assert sorted(r.method for r in recs) == ["fs", "lsqr", "mp", "poafd", "two_step"]
    errs = [r.error for r in recs]
    assert max(errs) == pytest.approx(min(errs), rel=1e-8)


def test_bench_summary_and_idempotence(tmp_path, capsys):
    out = tmp_path / "b.csv"
    argv = ["bench", "--preset", "fig1", "--seed", "4", "--trials", "2", "--out", str(out), "--summary"]
    text = run_ok(argv, capsys)
    assert "Method" in text and (tmp_path / "b.csv.summary.txt").exists()
    first = [(r.error, r.solution_norm) for r in read_records(out)]
    run_ok(argv, capsys)
    assert [(r.error, r.solution_norm) for r in read_records(out)] == first
    assert len(first) == 5 * 2 * 10


def test_solve_is_idempotent(files, tmp_path, capsys, rng):
    args = ["solve", "--matrix", files("x.csv", rng.standard_normal((9, 4))),
            "--rhs", files("y.csv", rng.standard_normal((9, 1))), "--out", str(tmp_path / "w.csv")]
    run_ok(args, capsys)
    first = (tmp_path / "w.csv").read_bytes()
    run_ok(args, capsys)
    assert (tmp_path / "w.csv").read_bytes() == first


@pytest.mark.parametrize("cmd", ["solve", "pinv", "bench", "compare"])
def test_help_documents_every_flag(cmd, capsys):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args([cmd, "--help"])
    assert info.value.code == 0
    text = capsys.readouterr().out
    sub = build_parser()._subparsers._group_actions[0].choices[cmd]
    for action in sub._actions:
        for flag in action.option_strings:
            assert flag in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "matpoafd", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "matpoafd" in proc.stdout
