"""Command-line interface: report shapes, exit statuses, expectation gate."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from tcwavelets.cli import main
from tcwavelets.grid import frequency_bump


@pytest.fixture()
def runner():
    return CliRunner()


def _json_out(result):
    return json.loads(result.stdout)


def test_catalog_list(runner):
    res = runner.invoke(main, ["catalog", "list"])
    assert res.exit_code == 0
    assert "dim2_family" in json.loads(res.stdout)


def test_catalog_emit(runner):
    res = runner.invoke(main, ["catalog", "emit", "dim2_family", "--params", "0,1"])
    assert res.exit_code == 0
    doc = _json_out(res)
    assert doc["n"] == 2 and doc["k"] == 1
    assert doc["expected"]["open_orbit_count"] == 2


def test_group_check_passes_for_catalog_entry(runner):
    res = runner.invoke(main, ["group", "check", "--catalog", "dim2_family:0,1",
                               "--expect", '{"translation_complete": true}'])
    assert res.exit_code == 0


def test_group_check_rejects_incompatible_v(runner, tmp_path):
    """The rotation block does not leave a 1-D V invariant."""
    doc = {"n": 3, "k": 1,
           "generators": [[[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]]}
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(doc))
    res = runner.invoke(main, ["group", "check", "--group", str(p)])
    assert res.exit_code != 0
    assert "not translation complete" in res.stdout


def test_modular_report_with_expectation(runner):
    res = runner.invoke(main, ["modular", "--catalog", "heisenberg:1",
                               "--expect", '{"unimodular": true}'])
    assert res.exit_code == 0
    rep = _json_out(res)
    assert rep["delta_g_closed_form"] == 1.0


def test_expect_mismatch_gives_nonzero_exit(runner):
    res = runner.invoke(main, ["modular", "--catalog", "dim2_family:0,1",
                               "--expect", '{"unimodular": true}'])
    assert res.exit_code == 1
    assert "expect_mismatches" in res.stderr


def test_missing_group_flag_fails_with_error_json(runner):
    res = runner.invoke(main, ["orbits"])
    assert res.exit_code == 2
    assert "error" in json.loads(res.stderr)


def test_orbits_report(runner):
    res = runner.invoke(main, ["orbits", "--catalog", "affine_1d",
                               "--expect", '{"open_orbit_count": 2}'])
    assert res.exit_code == 0


def test_make_wavelet_and_admissibility(runner, tmp_path):
    args = ["--catalog", "dim2_family:0,1", "--grid", "64,12",
            "--center", "0,2.1", "--width", "0.7",
            "--quad-xi", "-4,4,32", "--quad-t", "-4,4.5,96"]
    res = runner.invoke(main, ["make-wavelet", *args, "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    rep = _json_out(res)
    assert (tmp_path / "wavelet.bin").exists()
    assert abs(rep["phi_at_center_offset"] - 1.0) < 0.05

    res2 = runner.invoke(main, [
        "admissibility", "--catalog", "dim2_family:0,1",
        "--wavelet", str(tmp_path / "wavelet.bin"), "--center", "0,2.1",
        "--quad-xi", "-4,4,32", "--quad-t", "-4,4.5,96",
        "--freq", "0.2,2.0", "--freq", "-0.1,2.2", "--freq", "0.4,1.9"])
    assert res2.exit_code == 0, res2.output
    rep2 = _json_out(res2)
    assert rep2["verdict"] in ("admissible", "weakly-admissible")
    assert rep2["phi_min"] > 0.9 and rep2["phi_max"] < 1.1


def test_transform_reconstruct_pipeline(runner, tmp_path):
    f = frequency_bump(2, 64, 12.0, center=[0.5, 2.2], width=0.5)
    f.save(tmp_path / "signal.bin")
    wav = ["make-wavelet", "--catalog", "dim2_family:0,1", "--grid", "64,12",
           "--center", "0,2.1", "--width", "0.7",
           "--quad-xi", "-4,4,32", "--quad-t", "-4,4.5,96",
           "--out", str(tmp_path)]
    assert runner.invoke(main, wav).exit_code == 0
    res = runner.invoke(main, [
        "transform", "--catalog", "dim2_family:0,1",
        "--signal", str(tmp_path / "signal.bin"),
        "--wavelet", str(tmp_path / "wavelet.bin"),
        "--quad-xi", "-5.5,9,48", "--quad-t", "-1.6,1.4,32",
        "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    rep = _json_out(res)
    assert abs(rep["coefficient_norm_sq"] / rep["signal_norm_sq"] - 1.0) < 0.05

    res2 = runner.invoke(main, [
        "reconstruct", "--catalog", "dim2_family:0,1",
        "--coeffs", str(tmp_path / "coefficients.bin"),
        "--wavelet", str(tmp_path / "wavelet.bin"),
        "--signal", str(tmp_path / "signal.bin"),
        "--out", str(tmp_path),
        "--expect", '{"relative_residual": 0.0}', "--tol", "0.05"])
    assert res2.exit_code == 0, res2.output


def test_wigner_compare_subcommand(runner, tmp_path):
    frequency_bump(1, 256, 16.0, center=[2.0], width=0.5).save(
        tmp_path / "w1d.bin")
    res = runner.invoke(main, [
        "wigner-compare", "--catalog", "affine_1d",
        "--wavelet", str(tmp_path / "w1d.bin"),
        "--point", "0.3,2.0", "--quad-t", "-3,2,64",
        "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    rep = _json_out(res)
    assert rep["max_rel_deviation"] < 0.03
    assert (tmp_path / "wigner_compare.csv").exists()
