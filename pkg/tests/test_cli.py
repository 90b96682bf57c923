import json
import shutil
import subprocess
import sys

import pytest

from geocrystal.cli import EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, main
from geocrystal.kashiwara import from_json, is_normal


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enum_json(capsys):
    code, out, err = run(capsys, "enum", "--gl", "3", "--lambda", "2,1,0", "--out", "json")
    assert code == EXIT_OK
    crystal = from_json(out)
    assert len(crystal) == 8
    assert is_normal(crystal).normal
    assert "elements: 8" in err


def test_enum_edge_cases(capsys):
    code, out, _ = run(capsys, "enum", "--gl", "3", "--lambda", "0,1,0")
    assert code == EXIT_OK and len(from_json(out)) == 0
    code, out, _ = run(capsys, "enum", "--gl", "3", "--lambda", "0,0,0")
    assert code == EXIT_OK and len(from_json(out)) == 1
    code, out, _ = run(capsys, "enum", "--gl", "2", "--lambda=-1,-2")
    assert code == EXIT_OK and len(from_json(out)) == 2


def test_enum_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "enum", "--gl", "3", "--lambda", "1,0,0", "--out", "dot")
    assert code == EXIT_OK and out.startswith("digraph crystal {")
    code, out, _ = run(capsys, "enum", "--gl", "3", "--lambda", "1,0,0", "--out", "csv")
    assert out.splitlines()[0] == "weight,multiplicity"
    target = tmp_path / "b.json"
    code, out, _ = run(capsys, "enum", "--gl", "3", "--lambda", "1,1,0", "-o", str(target))
    assert code == EXIT_OK
    assert "elements: 3" in out and f"wrote {target}" in out
    assert len(from_json(target.read_text())) == 3


def test_output_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "enum", "--gl", "3", "--lambda", "3,1,0", "-o", str(a))
    run(capsys, "enum", "--gl", "3", "--lambda", "3,1,0", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    _, first, _ = run(capsys, "verify", "--gl", "3", "--trials", "5", "--seed", "3")
    _, second, _ = run(capsys, "verify", "--gl", "3", "--trials", "5", "--seed", "3")
    assert first == second


def test_tensor_tables(capsys):
    code, out, _ = run(capsys, "tensor", "--gl", "3", "--lambda", "1,0,0", "--mu", "1,1,0")
    assert code == EXIT_OK
    assert out.splitlines() == ["nu,multiplicity", "2;1;0,1", "1;1;1,1"]
    _, out, _ = run(capsys, "tensor", "--gl", "3", "--lambda", "2,1,0", "--mu", "0,0,0")
    assert out.splitlines()[1:] == ["2;1;0,1"]
    _, out, _ = run(capsys, "tensor", "--gl", "2", "--lambda", "3,0", "--mu", "2,0", "--q")
    assert out.splitlines() == ["nu,multiplicity,q_polynomial", "5;0,1,1", "4;1,1,q", "3;2,1,1"]


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--gl", "3", "--word", "1,2,1", "--trials", "100", "--seed", "7")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "overall,pass"
    code, out, _ = run(capsys, "verify", "--gl", "3", "--trials", "0")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "verify", "--gl", "4", "--word", "1,2,1,3,2,1", "--trials", "10",
                       "--seed", "1", "--normal-top", "1")
    assert code == EXIT_OK
    assert "braid" in out


def test_trop(capsys):
    code, out, _ = run(capsys, "trop", "--expr", "x+y", "--at", "3,5")
    assert code == EXIT_OK and out.splitlines()[-1] == "3;5,3"
    code, out, _ = run(capsys, "trop", "--expr", "x^2*y^-3", "--at=1,-1")
    assert out.splitlines()[-1] == "1;-1,5"
    # Both summands of eps_1 = 1/c3 + c2/(c1 c3^2) matter at (0, 0, 1).
    code, out, _ = run(capsys, "trop", "--expr", "1/c3 + c2/(c1*c3^2)", "--at", "0,0,1",
                       "--at", "0,5,1")
    assert out.splitlines()[0] == "# variables: c1;c2;c3"
    assert out.splitlines()[2:] == ["0;0;1,-2", "0;5;1,-1"]


def test_trop_from_file_with_variable_order(capsys, tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("a + b*c\n")
    code, out, _ = run(capsys, "trop", "--expr-file", str(f), "--vars", "c,b,a", "--at", "1,2,4")
    assert code == EXIT_OK and out.splitlines()[-1] == "1;2;4,3"


def test_character(capsys):
    code, out, _ = run(capsys, "character", "--gl", "3", "--lambda", "1,0,0")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "# character: x1 + x2 + x3"


def test_schubert(capsys):
    code, out, err = run(capsys, "schubert", "--gl", "2", "--word", "1", "--height-bound", "3",
                         "--out", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["weight,multiplicity", "0;0,1", "-1;1,1", "-2;2,1", "-3;3,1"]
    assert "upper normal: True" in err


@pytest.mark.parametrize("argv", [
    ["enum", "--gl", "3", "--lambda", "1,0"],
    ["enum", "--gl", "3", "--lambda", "a,b,c"],
    ["enum", "--gl", "3", "--lambda", "1,0,0", "--word", "1,1,2"],
    ["enum", "--gl", "3", "--lambda", "1,0,0", "--word", "1,2"],
    ["enum", "--gl", "3"],
    ["tensor", "--gl", "3", "--lambda", "0,1,0", "--mu", "1,0,0"],
    ["verify", "--gl", "3", "--trials", "-1"],
    ["schubert", "--gl", "3", "--word", "1,2", "--height-bound", "-2"],
    ["schubert", "--gl", "3"],
    ["trop", "--expr", "x +", "--at", "1"],
    ["trop", "--expr", "x+y", "--at", "1"],
    ["trop", "--expr", "x+y"],
    ["trop", "--expr", "x+y", "--vars", "x", "--at", "1"],
    ["trop", "--expr-file", "/nonexistent/file", "--at", "1"],
    ["enum", "--gl", "3", "--lambda", "1,0,0", "--out", "xml"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_positivity_failure_is_internal(capsys):
    code, _, err = run(capsys, "trop", "--expr", "x - y", "--at", "1,2")
    assert code == EXIT_INTERNAL
    assert "internal error" in err


def test_figures(capsys, tmp_path):
    paths = {
        "enum": tmp_path / "enum.png",
        "tensor": tmp_path / "tensor.svg",
        "character": tmp_path / "char.pdf",
        "schubert": tmp_path / "depth.png",
    }
    run(capsys, "enum", "--gl", "3", "--lambda", "2,1,0", "--figure", str(paths["enum"]))
    run(capsys, "tensor", "--gl", "3", "--lambda", "1,0,0", "--mu", "1,0,0", "--q",
        "--figure", str(paths["tensor"]))
    run(capsys, "character", "--gl", "2", "--lambda", "3,0", "--figure", str(paths["character"]))
    run(capsys, "schubert", "--gl", "3", "--word", "1,2,1", "--height-bound", "2",
        "--figure", str(paths["schubert"]))
    assert paths["enum"].read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert b"<svg" in paths["tensor"].read_bytes()
    assert paths["character"].read_bytes()[:4] == b"%PDF"
    assert paths["schubert"].stat().st_size > 0


def test_png_figures_are_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    run(capsys, "enum", "--gl", "3", "--lambda", "1,1,0", "--figure", str(a))
    run(capsys, "enum", "--gl", "3", "--lambda", "1,1,0", "--figure", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "geocrystal.cli", "trop", "--expr", "x+y",
                           "--at", "3,5"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "3;5,3"


@pytest.mark.skipif(shutil.which("crystal") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["crystal", "enum", "--gl", "2", "--lambda", "1,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["elements"]) == 2
