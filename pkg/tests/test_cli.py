import io
import json
import subprocess
import sys

import pytest

from yeegrid import EXAMPLE_SCENE
from yeegrid.cli import output_paths, run
from yeegrid.export import read_lines_json


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def scene(tmp_path):
    doc = {
        "materials": [{"id": "cu", "kind": "conductor"}, {"id": "fr4", "epsilon_r": 4.4}],
        "root": {"compound": {"id": "board", "children": [
            {"shape": {"id": "sub", "material": "fr4", "box": {"min": [0, 0, 0], "max": [0.04, 0.03, 0.0016]}}},
            {"shape": {"id": "trace", "material": "cu", "box": {"min": [0.005, 0.014, 0.0016], "max": [0.035, 0.017, 0.00165]}}},
        ]}},
    }
    p = tmp_path / "board.json"
    p.write_text(json.dumps(doc))
    return p


def test_happy_path(scene, tmp_path):
    out = tmp_path / "grid.json"
    code, text, err = call("--scene", str(scene), "--f-min", "0", "--f-max", "4e9", "--out", str(out))
    assert code == 0, err
    grid = read_lines_json(out)
    assert min(grid.shape) >= 2
    assert "audit: all rules pass" in text


def test_report_echoes_parameters(scene):
    code, text, _ = call("--scene", str(scene), "--f-max", "4e9",
                         "--max-cell-model", "40", "--max-cell-space", "30", "--min-cell-global", "300")
    assert code == 0
    assert "max_cell_model=40 max_cell_space=30 min_cell_global=300" in text
    for key in ("cells:", "min delta", "CFL timestep bound", "ingestion", "meshing"):
        assert key in text


def test_pml_out_of_range(scene):
    code, _, err = call("--scene", str(scene), "--f-max", "4e9", "--pml-n", "3")
    assert code == 1
    assert "[4, 50]" in err


def test_help_lists_flags_and_defaults(capsys):
    code = run(["--help"])
    assert code == 0
    text = capsys.readouterr().out
    for flag in ("--scene", "--f-min", "--f-max", "--max-cell-model", "--max-cell-space", "--min-cell-global",
                 "--n", "--res-fraction", "--pml-n", "--grading-ratio-max", "--out", "--format", "--report",
                 "--threads", "--config"):
        assert flag in text
    assert "lambda_min" in text and "default: 300" in text


@pytest.mark.parametrize("argv", [[], ["--scene", "x.json"], ["--f-max", "1e9", "--bogus"]])
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 1 and err


def test_missing_scene_file(tmp_path):
    code, _, err = call("--scene", str(tmp_path / "none.json"), "--f-max", "1e9")
    assert code == 1 and "error" in err


def test_config_precedence(scene, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scene": str(scene), "f-max": 4e9, "pml-n": 10, "max-cell-model": 50}))
    code, text, _ = call("--config", str(cfg), "--pml-n", "12", "--report", "json")
    assert code == 0
    doc = json.loads(text)
    assert doc["parameters"]["pml_n"] == 12
    assert doc["parameters"]["max_cell_model"] == 50
    assert doc["parameters"]["max_cell_space"] == 30


def test_unknown_config_key(scene, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "blue"}))
    code, _, err = call("--config", str(cfg), "--scene", str(scene), "--f-max", "1e9")
    assert code == 1 and "colour" in err


def test_all_formats_byte_identical_reruns(scene, tmp_path):
    fmts = ["--format", "json", "--format", "vtk", "--format", "solver-xml", "--format", "csv"]
    blobs = []
    for run_dir in ("a", "b"):
        d = tmp_path / run_dir
        d.mkdir()
        code, _, err = call("--scene", str(scene), "--f-max", "4e9", "--out", str(d / "grid"), *fmts)
        assert code == 0, err
        blobs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert sorted(blobs[0]) == ["grid.csv", "grid.json", "grid.vtk", "grid.xml"]
    assert blobs[0] == blobs[1]


def test_violations_exit_2(scene):
    # ratio below 2 cannot always be met by halving, so the audit reports it
    code, text, _ = call("--scene", str(scene), "--f-max", "4e9", "--grading-ratio-max", "1.1")
    assert code == 2
    assert "violations:" in text


def test_output_paths():
    assert output_paths(None, ["json"]) == {}
    assert {k: p.name for k, p in output_paths("out/g.json", ["json"]).items()} == {"json": "g.json"}
    assert output_paths("g", ["vtk", "csv"])["vtk"].name == "g.vtk"


def test_example_scene_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "yeegrid.cli", "--scene", str(EXAMPLE_SCENE), "--f-max", "4e9"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0, proc.stderr
    assert "audit: all rules pass" in proc.stdout
