from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from coregkit.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def tsv(text: str) -> dict[str, str]:
    return dict(line.split("\t", 1) for line in text.splitlines() if "\t" in line)


def test_lct(capsys):
    code, out, _ = run(capsys, "lct", "x1^2*x2 + x2^4")
    assert code == 0 and tsv(out)["value"] == "5/8"
    code, out, _ = run(capsys, "lct", "x1^3 + x2^4", "--weights", "4,3", "--json")
    data = json.loads(out)
    assert data["value"] == "7/12" and data["kind"] == "Exact"
    code, out, _ = run(capsys, "lct", "x1^3 + x1*x2^3", "--search")
    assert tsv(out)["value"] == "5/9"


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "x1*x2*x3", "--cubic")
    assert code == 0 and "triangle" in tsv(out)["tag"].lower()
    code, out, _ = run(capsys, "classify", "x1^2*x2 + x2^4 + x3^5", "--json")
    data = json.loads(out)
    assert data["lc2"]["tag"] == "KltCertified"


def test_dualcx(capsys, tmp_path):
    fig = tmp_path / "pair.png"
    code, out, _ = run(capsys, "dualcx", str(FIXTURES / "nodal_pair.json"), "--figure", str(fig))
    rows = tsv(out)
    assert code == 0 and rows["dim"] == "1" and rows["euler"] == "0"
    assert fig.stat().st_size > 0


def test_toric(capsys):
    code, out, _ = run(capsys, "toric", "P1xP1xP1", "--json")
    data = json.loads(out)
    assert code == 0 and data["cells"] == [6, 12, 8] and data["coreg"] == 0


def test_blowup(capsys):
    code, out, _ = run(capsys, "blowup", "0", "1", "--ldot", "2", "--other", "2")
    rows = tsv(out)
    assert code == 0 and rows["D_restrict"] == "s+2f" and rows["certified"] == "true"


def test_dp1(capsys):
    code, out, _ = run(capsys, "dp1", "0", "x1^6 - x1^2*x2^4 + 3*x2^6 + x1*x2^5", "--json")
    data = json.loads(out)
    assert (data["nodal_count"], data["cusp_count"]) == (0, 6)


def test_codim(capsys):
    code, out, _ = run(capsys, "codim", "--nvars", "3", "--degree", "3", "--locus", "triple_line", "--offset", "3")
    rows = tsv(out)
    assert code == 0 and rows["codim"] == "7" and rows["on_f"] == "4"
    code, out, _ = run(capsys, "codim", "--nvars", "3", "--degree", "2")
    assert tsv(out)["codim"] == "6"


def test_codim_needs_arguments(capsys):
    code, _, err = run(capsys, "codim")
    assert code == 2 and "error" in err


def test_run_pass_and_fail(capsys):
    code, out, _ = run(capsys, "run", "--shipped")
    assert code == 0
    assert out.splitlines()[0].startswith("scenario\tstep\tfield")
    assert "FAIL" not in out
    code, out, _ = run(capsys, "run", str(FIXTURES / "cusp_wrong.json"))
    assert code == 1 and "5/6 ≠ 5/9" in out


def test_run_json_and_figures(capsys, tmp_path):
    from coregkit.scenario import shipped_scenarios

    path = shipped_scenarios()["cor_curve_x2y"]
    code, out, err = run(capsys, "run", str(path), "--json", "--figures", str(tmp_path))
    assert code == 0 and json.loads(out)["summary"]["passed"]
    written = [line.split("\t")[1] for line in err.splitlines() if line.startswith("figure\t")]
    assert written and all(Path(p).exists() for p in written)


def test_run_input_errors(capsys):
    assert run(capsys, "run", str(FIXTURES / "untagged.json"))[0] == 2
    assert run(capsys, "run", str(FIXTURES / "bad_germ.json"))[0] == 2
    assert run(capsys, "run", str(FIXTURES / "absent.json"))[0] == 2
    assert run(capsys, "run")[0] == 2


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--verdict", "CoregZeroAll", "--verdict", "CoregZeroGeneral")
    assert code == 0 and out.strip().endswith("# 100 records")
    code, out, _ = run(capsys, "table", "--toric", "true", "--json")
    assert len(json.loads(out)) == 18
    assert run(capsys, "table", "--id", "99.9")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "2.33", "2.26", "1.1")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[1].split("\t")[:3] == ["2.33", "toric", "true"]
    assert run(capsys, "verify")[0] == 2


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "coregkit.cli", "lct", "x1^2 + x2^3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "5/6" in proc.stdout


def test_argparse_errors_exit_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["lct"])
    assert exc.value.code == 2
