import json
import pathlib

import pytest

from paratile.cli import main
from paratile.linalg import IntMatrix
from paratile.polytopes import HPolytope
from paratile.lattices import Lattice
from paratile.serialization import (dump_json, lattice_to_json, matrix_to_json,
                                    parse_hrep, polytope_to_json,
                                    validate_document)

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

WORKED_B = IntMatrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 1]])


def write_json(path, doc):
    path.write_text(dump_json(doc))
    return str(path)


# --- construct --------------------------------------------------------------


def test_construct_writes_report_to_stdout(capsys):
    assert main(["construct", "--n", "3"]) == 0
    cap = capsys.readouterr()
    doc = json.loads(cap.out)
    validate_document("construction_report", doc)
    assert doc["final"]["ratio_hi"] == "6"
    assert "ratio = 6" in cap.err


def test_construct_writes_report_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["construct", "--n", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    validate_document("construction_report", doc)
    assert f"wrote {out}" in capsys.readouterr().out


def test_report_dir_env_applies_to_bare_names(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("PARATILE_REPORT_DIR", str(tmp_path))
    assert main(["construct", "--n", "2", "--out", "bare.json"]) == 0
    capsys.readouterr()
    assert (tmp_path / "bare.json").exists()


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {"kappa": 5, "seed": 7})
    assert main(["--config", cfg, "construct", "--n", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kappa"] == 5
    assert doc["seeds"]["construction"] == 7


def test_explicit_flag_beats_config(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {"kappa": 5})
    assert main(["--config", cfg, "construct", "--n", "3",
                 "--kappa", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["kappa"] == 4


def test_construct_with_matrix_override(tmp_path, capsys):
    mat = write_json(tmp_path / "b.json", matrix_to_json(WORKED_B))
    assert main(["construct", "--n", "4", "--matrix-override", mat,
                 "--override-s", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["final"]["ratio_exact"]["terms"] == [
        {"coeff": "6", "radicand": "2"}]
    assert doc["levels"][0]["mode"] == "step"


def test_construct_body_out_hrep(tmp_path, capsys):
    body_path = tmp_path / "body.hrep"
    assert main(["construct", "--n", "3", "--body-out", str(body_path),
                 "--format", "hrep", "--out", str(tmp_path / "r.json")]) == 0
    capsys.readouterr()
    back = parse_hrep(body_path.read_text())
    assert back.ratio() == HPolytope.cube(3).ratio()


def test_override_must_be_integer(tmp_path, capsys):
    doc = {"rows": 1, "cols": 2, "entries": [["1/2", "1"]]}
    mat = write_json(tmp_path / "half.json", doc)
    assert main(["construct", "--n", "2", "--matrix-override", mat]) == 2
    assert "integer" in capsys.readouterr().err


def test_missing_override_file(capsys):
    assert main(["construct", "--n", "2",
                 "--matrix-override", "/nonexistent/b.json"]) == 2
    assert "error" in capsys.readouterr().err


def test_construct_rejects_bad_dimension(capsys):
    assert main(["construct", "--n", "0"]) == 2
    assert "invalid parameters" in capsys.readouterr().err


# --- verify -----------------------------------------------------------------


def test_verify_cube_fixture_passes(capsys):
    fx = str(FIXTURE_DIR / "cube3.json")
    assert main(["verify", "--fixture", fx, "--samples", "1500"]) == 0
    cap = capsys.readouterr()
    assert "tiling: PASS" in cap.err
    assert "ratio check: PASS" in cap.err
    doc = json.loads(cap.out)
    validate_document("tiling_report", doc)


def test_verify_worked_fixture_checks_additivity(capsys):
    fx = str(FIXTURE_DIR / "worked_n4.json")
    assert main(["verify", "--fixture", fx, "--samples", "1500"]) == 0
    cap = capsys.readouterr()
    assert "additivity" in cap.err


def test_verify_scaled_cube_fails(capsys):
    fx = str(FIXTURE_DIR / "scaled_cube3.json")
    assert main(["verify", "--fixture", fx, "--samples", "1500"]) == 1
    assert "tiling: FAIL" in capsys.readouterr().err


def test_verify_requires_inputs(capsys):
    assert main(["verify"]) == 2
    assert "need --fixture" in capsys.readouterr().err


def test_verify_separate_body_and_lattice(tmp_path, capsys):
    body = write_json(tmp_path / "body.json",
                      polytope_to_json(HPolytope.cube(2)))
    lat = write_json(tmp_path / "lat.json",
                     lattice_to_json(Lattice.standard(2)))
    assert main(["verify", "--body", body, "--lattice", lat,
                 "--samples", "800"]) == 0
    capsys.readouterr()


# --- sample-matrix ------------------------------------------------------------


def test_sample_matrix_combined_stdout(capsys):
    assert main(["sample-matrix", "--m", "8", "--n", "32", "--d", "4"]) == 0
    cap = capsys.readouterr()
    doc = json.loads(cap.out)
    validate_document("matrix", doc["matrix"])
    validate_document("sampler_stats", doc["stats"])
    assert "admissible s" in cap.err


def test_sample_matrix_rejects_small_d(capsys):
    assert main(["sample-matrix", "--m", "8", "--n", "32", "--d", "2"]) == 2
    assert "at least 3" in capsys.readouterr().err


def test_sample_matrix_verify_s_failure(capsys):
    # this seed yields a zero column, so single-column independence fails
    assert main(["sample-matrix", "--m", "32", "--n", "256", "--d", "4",
                 "--seed", "0", "--verify-s", "1"]) == 1
    assert "FAILED" in capsys.readouterr().err


def test_sample_matrix_verify_s_success(tmp_path, capsys):
    out = tmp_path / "m.json"
    stats = tmp_path / "s.json"
    assert main(["sample-matrix", "--m", "8", "--n", "16", "--d", "3",
                 "--seed", "1", "--verify-s", "1",
                 "--out", str(out), "--stats-out", str(stats)]) == 0
    capsys.readouterr()
    sdoc = json.loads(stats.read_text())
    assert sdoc["verified_s"] == 1


# --- walk-stats -----------------------------------------------------------------


def test_walk_stats_document(tmp_path, capsys):
    out = tmp_path / "walk.json"
    assert main(["walk-stats", "--m", "2,4", "--t-max", "6",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads(out.read_text())
    validate_document("walk_stats", doc)
    assert len(doc["rows"]) == 2 * 7


def test_walk_stats_empirical_column(capsys):
    assert main(["walk-stats", "--m", "2", "--t-max", "4",
                 "--samples", "200"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all("empirical" in r for r in doc["rows"])


# --- parser ----------------------------------------------------------------------


def test_version_flag_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    capsys.readouterr()


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    capsys.readouterr()
