import subprocess
import sys

import pytest

from narylevel.classification import FAMILY_BY_ID
from narylevel.cli import golden_text, main, resolve_seed
from narylevel.fileformats import parse_structure, render_structure


@pytest.fixture
def write(tmp_path):
    def _write(name, mu_or_text):
        path = tmp_path / name
        text = mu_or_text if isinstance(mu_or_text, str) else render_structure(mu_or_text)
        path.write_text(text)
        return str(path)

    return _write


def test_check_subalgebraic_on_nu(write, capsys):
    path = write("nu.alg", FAMILY_BY_ID["nu"].instantiate(2))
    assert main(["check", "--property", "subalgebraic", path]) == 0
    assert capsys.readouterr().out.startswith("holds")


def test_check_reports_certificate(write, fx, capsys):
    path = write("a3.alg", fx.A3)
    assert main(["check", "--property", "anticommutative", "--partition", "(1,1)", path]) == 1
    out = capsys.readouterr().out
    assert out.startswith("fails") and "arguments:" in out


def test_check_k_subalgebra(write, fx):
    nu = write("nu.alg", fx.nu)
    a3 = write("a3.alg", fx.A3)
    assert main(["check", "--property", "k-subalgebra", "--k", "2", "--subspace", "1", nu]) == 0
    assert main(["check", "--property", "k-subalgebra", "--k", "2", "--subspace", "1", a3]) == 1
    assert main(["check", "--property", "k-subalgebra", "--k", "2", "--subspace", "3", a3]) == 2
    assert main(["check", "--property", "attractive", a3]) == 2


def test_truncated_file_is_input_error(write, capsys):
    path = write("bad.alg", "nary-structure v1\n")
    assert main(["classify", path]) == 2
    err = capsys.readouterr().err
    assert "bad.alg" in err and "line 2" in err


def test_missing_file_and_usage_errors(tmp_path):
    assert main(["classify", str(tmp_path / "absent.alg")]) == 2
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_classify_exit_codes(write, fx, capsys):
    assert main(["classify", write("n3.alg", fx.n3)]) == 0
    assert "family: n3" in capsys.readouterr().out
    assert main(["classify", write("sq.alg", fx.square)]) == 1
    assert main(["classify", write("zero.alg", fx.zero2)]) == 1
    assert "level-zero" in capsys.readouterr().out


def test_pipeline_witness_reapplies(write, tmp_path, fx):
    mu = parse_structure(render_structure(fx.ex24))
    src = write("ex24.alg", mu)
    out, wit = tmp_path / "t.alg", tmp_path / "w.wit"
    assert main(["to-attractive", src, "-o", str(out), "-w", str(wit)]) == 0
    again = tmp_path / "again.alg"
    assert main(["degenerate", src, str(wit), "-o", str(again)]) == 0
    assert again.read_text() == out.read_text()


def test_to_minimal_stdout_layout(write, fx, capsys):
    assert main(["to-minimal", write("n3.alg", fx.n3)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("nary-witness v1\n")
    assert "# target\n# nary-structure v1\n" in out


def test_to_minimal_rejects_non_form(write, fx):
    assert main(["to-minimal", write("nu.alg", fx.nu)]) == 1


def test_contract(write, fx, capsys, tmp_path):
    assert main(["contract", write("sq.alg", fx.square), "--l", "1", "--k", "2"]) == 0
    assert parse_structure(capsys.readouterr().out).support() == [(0, 0)]
    assert main(["contract", write("a3.alg", fx.A3), "--l", "1", "--k", "2"]) == 1
    assert main(["contract", write("a3b.alg", fx.A3), "--l", "1", "--k", "5"]) == 2


def test_degenerate_dimension_mismatch(write, fx):
    wit = write("w.wit", "nary-witness v1\nn=2 m=3\nfamily\n1,0,0\n0,1,0\n0,0,1\n")
    assert main(["degenerate", write("a3.alg", fx.A3), wit]) == 2


def test_degenerate_divergent_witness(write, fx):
    wit = write("w.wit", "nary-witness v1\nn=2 m=2\nfamily\nt,0\n0,t^3\n")
    assert main(["degenerate", write("a3.alg", fx.A3), wit]) == 2


@pytest.mark.parametrize("n", [2, 3])
def test_verify_paper(n, capsys):
    assert main(["verify-paper", "--n", str(n)]) == 0
    captured = capsys.readouterr()
    assert captured.out == golden_text(n)
    assert "verify-paper: OK" in captured.err


def test_enumerate(capsys):
    assert main(["enumerate", "--n", "2", "--m", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3
    assert main(["enumerate", "--n", "4", "--m", "2"]) == 2


def test_seed_precedence(monkeypatch):
    monkeypatch.delenv("NARY_SEED", raising=False)
    assert resolve_seed(None) == 0
    monkeypatch.setenv("NARY_SEED", "17")
    assert resolve_seed(None) == 17
    assert resolve_seed(4) == 4
    monkeypatch.setenv("NARY_SEED", "x")
    assert main(["enumerate", "--n", "2", "--m", "1"]) == 2


def test_selfcheck_small(capsys):
    args = ["--seed", "3", "selfcheck", "--sizes", "2x2x6,3x2x4", "--trials", "20"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert first.startswith("seed 3: 10 structures") and first.endswith("OK\n")
    main(args)
    assert capsys.readouterr().out == first
    assert main(["selfcheck", "--sizes", "2x2"]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "narylevel", "verify-paper", "--n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == golden_text(2)
