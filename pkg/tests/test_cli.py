import io
import json
import subprocess
import sys

import pytest

from lbk.cli import main
from lbk.series import Context
from lbk.prelie import project_abelian


def run(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_dims(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["dims", "--order", "5"])
    assert code == 0
    assert "forests: 1, 2, 5, 14, 42" in out
    assert "lie: 1, 1, 3, 8, 25" in out


def test_dims_json(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["dims", "--order", "8", "--format", "json"])
    doc = json.loads(out)
    assert doc["forests"] == [1, 2, 5, 14, 42, 132, 429, 1430]
    assert doc["nonplanar"] == [1, 1, 2, 4, 9, 20, 48, 115]


def test_sharp_from_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["sharp", "--order", "3"], "a[] ; a[]")
    assert code == 0
    line = out.strip()
    assert line == "2*a[] + a[a[]] + 1/2*a[] a[a[]] - 1/2*a[a[]] a[] + 1/2*a[a[] a[]]"
    ctx = Context(("a",), 3)
    assert project_abelian(ctx.parse(line)) == project_abelian(
        ctx.parse("2*a[] + a[a[]] + 1/2*a[a[] a[]]")
    )


def test_flow_subcommand_and_file_input(capsys, monkeypatch, tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("a[]\n")
    code, out, _ = run(capsys, monkeypatch, ["flow", "phi", "--order", "2", "--input", str(path)])
    assert (code, out.strip()) == (0, "a[] + 1/2*a[a[]]")
    code, out, _ = run(capsys, monkeypatch, ["backward-error", "--order", "2", "-e", "a[]"])
    assert out.strip() == "a[] - 1/2*a[a[]]"


def test_products(capsys, monkeypatch):
    cases = {
        "conc": "a[] a[]",
        "shuffle": "2*a[] a[]",
        "gl": "a[] a[] + a[a[]]",
        "graft": "a[a[]]",
    }
    for product, expected in cases.items():
        code, out, _ = run(capsys, monkeypatch, ["mul", "--product", product, "-e", "a[];a[]"])
        assert (code, out.strip()) == (0, expected)


def test_euler_exp_log(capsys, monkeypatch):
    _, out, _ = run(capsys, monkeypatch, ["euler", "-e", "a[] a[a[]]"])
    assert out.strip() == "1/2*a[] a[a[]] - 1/2*a[a[]] a[]"
    _, out, _ = run(capsys, monkeypatch, ["exp", "--product", "gl", "--order", "2", "-e", "a[]"])
    assert out.strip() == "1 + a[] + 1/2*a[] a[] + 1/2*a[a[]]"
    _, out, _ = run(capsys, monkeypatch, ["log", "--product", "gl", "--order", "2"], out)
    assert out.strip() == "a[]"


def test_json_series(capsys, monkeypatch):
    _, out, _ = run(capsys, monkeypatch, ["parse", "--format", "json", "-e", "1/2*a[a[]] + 2"])
    doc = json.loads(out)
    assert doc["terms"] == [{"coeff": "2", "forest": "1"}, {"coeff": "1/2", "forest": "a[a[]]"}]


def test_lie_basis(capsys, monkeypatch):
    _, out, _ = run(capsys, monkeypatch, ["lie-basis", "--grade", "3"])
    assert len(out.strip().splitlines()) == 3
    assert "[a[],a[a[]]]" in out


def test_coproduct_table(capsys, monkeypatch):
    _, out, _ = run(capsys, monkeypatch, ["coproduct", "--which", "gl", "--grade", "2", "--format", "json"])
    doc = json.loads(out)
    assert doc["domain_grade"] == 2
    assert ["a[] ⊗ a[]", "a[a[]]", "1"] in doc["entries"]
    _, out, _ = run(capsys, monkeypatch, ["coproduct", "--which", "deconcat", "-e", "a[] a[a[]]"])
    assert out.strip() == "1 ⊗ a[] a[a[]] + a[] ⊗ a[a[]] + a[] a[a[]] ⊗ 1"


def test_subst(capsys, monkeypatch, tmp_path):
    endo = tmp_path / "endo.txt"
    endo.write_text("# perturbed field\na := a[] + a[a[]]\n")
    code, out, _ = run(
        capsys, monkeypatch, ["subst", "apply", "--endo", str(endo), "--order", "3", "-e", "a[a[]]"]
    )
    assert (code, out.strip()) == (0, "a[a[]] + a[a[] a[]] + 2*a[a[a[]]]")
    code, out, _ = run(capsys, monkeypatch, ["subst", "universal", "--omega", "a[a[]]"])
    doc = json.loads(out)
    assert doc == {
        "omega": "a[a[]]",
        "terms": [
            {"coeff": "a_a(a[a[]])", "target": "a[]"},
            {"coeff": "a_a(a[])^2", "target": "a[a[]]"},
        ],
    }
    code, out, _ = run(capsys, monkeypatch, ["subst", "universal", "--grade", "2", "--one-generator"])
    doc = json.loads(out)
    assert [d["omega"] for d in doc] == ["a[] a[]", "a[a[]]"]
    assert {"coeff": "2*a[] a[]", "target": "a[a[]]"} in doc[1]["terms"]


@pytest.mark.parametrize("check", ["flow", "axioms", "pbw", "recursion"])
def test_verify_passes(capsys, monkeypatch, check):
    code, out, _ = run(capsys, monkeypatch, ["verify", check, "--order", "4"])
    assert code == 0
    assert out.strip().endswith("PASS")


def test_verify_flow_table(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["verify", "flow", "--f", "y^2", "--order", "6"])
    assert code == 0
    assert "h^6\ty^7\ty^7\tok" in out


def test_verify_failure_reports_counterexample(capsys, monkeypatch):
    import lbk.verify as verify

    real = verify.exact_flow_taylor

    def broken(f, order):
        out = real(f, order)
        out[3] = out[3] * 2
        return out

    monkeypatch.setattr(verify, "exact_flow_taylor", broken)
    code, out, _ = run(capsys, monkeypatch, ["verify", "flow", "--order", "4"])
    assert code == 1
    assert "counterexample: h^3" in out
    assert out.strip().endswith("FAIL")


def test_usage_errors(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["sharp", "-e", "a["])[0] == 2
    assert run(capsys, monkeypatch, ["sharp", "-e", "a[]"])[0] == 2
    assert run(capsys, monkeypatch, ["sharp", "-e", "a[] a[]; a[]"])[0] == 2
    assert run(capsys, monkeypatch, ["parse", "--input", "/nonexistent/file"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_capacity(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, ["dims", "--order", "9"])
    assert code == 3
    assert "capacity" in err


def test_deterministic_output(capsys, monkeypatch):
    argv = ["coproduct", "--which", "graft", "--grade", "3", "--format", "json"]
    _, first, _ = run(capsys, monkeypatch, argv)
    _, second, _ = run(capsys, monkeypatch, argv)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lbk", "sharp", "--order", "3"],
        input="a[] ; a[]",
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.startswith("2*a[] + a[a[]]")
