"""Command-line interface: formats, provenance, exit codes, reproducibility."""

import json
import math
import subprocess
import sys

import pytest

from corrwishart import cli


@pytest.fixture()
def fig1_spec(tmp_path):
    path = tmp_path / "fig1.json"
    path.write_text(
        json.dumps(
            {
                "gamma": 0.337316782197,
                "atoms": [
                    {"lambda": 1.0, "weight": 0.7},
                    {"lambda": 3.0, "weight": 0.3},
                ],
            }
        )
    )
    return str(path)


@pytest.fixture()
def square_spec(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(
        json.dumps(
            {
                "gamma": 1.0,
                "atoms": [
                    {"lambda": 1.0, "weight": 0.5},
                    {"lambda": 2.0, "weight": 0.5},
                ],
            }
        )
    )
    return str(path)


def _header_hash(text: str) -> str:
    first = text.splitlines()[0]
    assert first.startswith("# ")
    return json.loads(first[2:])["config_sha256"]


class TestDensityCommand:
    def test_csv_matches_library_values(self, fig1_spec, tmp_path):
        out = tmp_path / "density.csv"
        code = cli.main(
            [
                "density",
                "--spec",
                fig1_spec,
                "--range",
                "0.5:3.0",
                "--points",
                "7",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "x,rho"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 7

        from corrwishart import PopulationSpectrum, density_grid

        spec = PopulationSpectrum(atoms=((1.0, 0.7), (3.0, 0.3)), gamma=0.337316782197)
        curve = density_grid(spec, 0.5, 3.0, 7)
        for (x_text, rho_text), x, rho in zip(rows, curve.grid, curve.values):
            assert float(x_text) == pytest.approx(x, abs=0)
            assert float(rho_text) == pytest.approx(rho, abs=0)

    def test_rerun_is_byte_identical(self, fig1_spec, tmp_path):
        args = ["density", "--spec", fig1_spec, "--range", "0.2:4", "--points", "25"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_hash_tracks_effective_knobs_only(self, fig1_spec, tmp_path):
        base = ["density", "--spec", fig1_spec, "--range", "0.2:4"]
        p1, p2, p3 = (tmp_path / n for n in ("h1.csv", "h2.csv", "h3.csv"))
        cli.main(base + ["--points", "25", "--out", str(p1)])
        cli.main(base + ["--points", "26", "--out", str(p2)])
        cli.main(base + ["--points", "25", "--out", str(p3)])
        h1 = _header_hash(p1.read_text())
        h2 = _header_hash(p2.read_text())
        h3 = _header_hash(p3.read_text())
        assert h1 != h2  # a changed knob changes the hash
        assert h1 == h3  # the output path does not

    def test_hash_tracks_spec_content(self, fig1_spec, square_spec, tmp_path):
        p1, p2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        cli.main(["density", "--spec", fig1_spec, "--out", str(p1)])
        cli.main(["density", "--spec", square_spec, "--out", str(p2)])
        assert _header_hash(p1.read_text()) != _header_hash(p2.read_text())


class TestSupportCommand:
    def test_json_structure(self, fig1_spec, capsys):
        assert cli.main(["support", "--spec", fig1_spec]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["intervals"]) == 1
        lo, hi = payload["intervals"][0]
        assert 0 < lo < hi
        assert payload["mass_at_zero"] == pytest.approx(1 - 0.337316782197)
        assert "config_sha256" in payload["provenance"]


class TestCuspScanCommand:
    def test_reports_edges_and_gamma_star(self, fig1_spec, capsys):
        code = cli.main(["cusp-scan", "--spec", fig1_spec, "--gamma-star"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        kinds = {rec["kind"] for rec in payload["critical_points"]}
        assert kinds == {"edge"}
        assert payload["gamma_star"] == pytest.approx(0.337316782197, abs=1e-9)
        assert payload["c_star"] == pytest.approx(0.562197877271, abs=1e-9)


class TestPearceyCommand:
    def test_grid_has_negation_symmetry(self, capsys):
        assert cli.main(["pearcey", "--tau", "1.0", "--grid=-2:2:5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "x,y,K"
        table = {}
        for line in lines[2:]:
            x, y, k = (float(v) for v in line.split(","))
            table[(x, y)] = k
        assert len(table) == 25
        for (x, y), k in table.items():
            assert table[(-x, -y)] == pytest.approx(k, abs=1e-12)

    def test_gap_row_per_interval(self, capsys):
        code = cli.main(
            ["pearcey", "--gap", "--tau", "0", "--interval=-1:1", "--interval=-2:2"]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "s,t,tau,det"
        assert len(lines) == 4
        dets = [float(line.split(",")[3]) for line in lines[2:]]
        assert 0 < dets[1] < dets[0] < 1  # wider gap is less likely


class TestHardEdgeCommand:
    def test_constants_json(self, square_spec, capsys):
        code = cli.main(
            ["hard-edge", "--spec", square_spec, "--N", "100", "--alpha", "2"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["present"] is True
        assert payload["sigma_N"] == pytest.approx(3.06)
        assert payload["zeta_N"] == pytest.approx(5.1)

    def test_absent_for_rectangular_limit(self, fig1_spec, capsys):
        assert cli.main(["hard-edge", "--spec", fig1_spec]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["present"] is False

    def test_expansion_csv_columns(self, capsys):
        code = cli.main(
            ["hard-edge", "--expansion", "--alpha", "2", "--N", "40", "--s", "1:4:2"]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "s,F_alpha,correction,prediction,finiteN_det,residual"
        for line in lines[2:]:
            s, f, corr, pred, det, resid = (float(v) for v in line.split(","))
            assert pred == pytest.approx(f + corr, abs=1e-15)
            assert resid == pytest.approx(abs(det - pred), abs=1e-15)
            assert resid < 1e-4  # first-order theory tracks the exact value

    def test_expansion_requires_size(self):
        assert cli.main(["hard-edge", "--expansion", "--alpha", "2"]) == 2


class TestSimulateCommand:
    def test_seed_determinism(self, tmp_path):
        args = ["simulate", "--N", "12", "--n", "12", "--reps", "4", "--mode", "hard-edge"]
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        assert cli.main(args + ["--seed", "9", "--out", str(a)]) == 0
        assert cli.main(args + ["--seed", "9", "--out", str(b)]) == 0
        assert cli.main(args + ["--seed", "10", "--out", str(c)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_summary_sidecar(self, tmp_path):
        out = tmp_path / "sim.csv"
        code = cli.main(
            [
                "simulate",
                "--N",
                "10",
                "--n",
                "6",
                "--reps",
                "3",
                "--seed",
                "1",
                "--mode",
                "global",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        summary = json.loads((tmp_path / "sim.csv.summary.json").read_text())
        assert summary["zero_columns"] == 4
        assert summary["reps"] == 3
        body = out.read_text().splitlines()
        assert body[1] == "rep,index,value"
        assert len(body) == 2 + 3 * 10

    def test_cusp_mode_needs_center(self, fig1_spec):
        code = cli.main(
            ["simulate", "--spec", fig1_spec, "--N", "30", "--reps", "2", "--mode", "cusp"]
        )
        assert code == 2

    def test_cusp_mode_window(self, fig1_spec, tmp_path, capsys):
        out = tmp_path / "cusp.csv"
        code = cli.main(
            [
                "simulate",
                "--spec",
                fig1_spec,
                "--N",
                "30",
                "--reps",
                "3",
                "--seed",
                "2",
                "--mode",
                "cusp",
                "--center",
                "1.876",
                "--halfwidth",
                "0.4",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        for line in out.read_text().splitlines()[2:]:
            value = float(line.split(",")[2])
            assert math.isclose(value, 1.876, abs_tol=0.4 + 1e-12) or abs(
                value - 1.876
            ) <= 0.4


class TestValidateCommand:
    def test_quick_suite_passes(self, capsys):
        assert cli.main(["validate", "--quick"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 4
        assert all(line.startswith("ok ") for line in lines)

    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert cli.main(["validate", "--quick", "--out", str(out)]) == 0
        capsys.readouterr()
        payload = json.loads(out.read_text())
        assert payload["passed"] is True
        assert len(payload["checks"]) == 4


class TestExitCodes:
    def test_missing_spec_file(self):
        assert cli.main(["density", "--spec", "/nonexistent/spec.json"]) == 2

    def test_malformed_spec(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli.main(["density", "--spec", str(bad)]) == 2

    def test_spec_with_unknown_keys(self, tmp_path):
        bad = tmp_path / "extra.json"
        bad.write_text(
            json.dumps({"gamma": 1.0, "atoms": [{"lambda": 1, "weight": 1}], "x": 1})
        )
        assert cli.main(["density", "--spec", str(bad)]) == 2

    def test_bad_range_string(self, fig1_spec):
        assert cli.main(["density", "--spec", fig1_spec, "--range", "oops"]) == 2

    def test_unknown_command(self, capsys):
        assert cli.main(["frobnicate"]) == 2
        capsys.readouterr()

    def test_negative_size_rejected(self):
        assert cli.main(["hard-edge", "--expansion", "--alpha", "2", "--N=-5"]) == 2

    def test_negative_alpha_allowed(self, capsys):
        code = cli.main(
            ["hard-edge", "--expansion", "--alpha=-1", "--N", "30", "--s", "1:1:1"]
        )
        assert code == 0
        capsys.readouterr()

    def test_nonconvergence_is_exit_three(self, capsys):
        code = cli.main(["pearcey", "--gap", "--tau=-2", "--interval=-3:3", "--order", "2"])
        assert code == 3
        capsys.readouterr()


class TestShowConfig:
    def test_prints_resolved_defaults(self, fig1_spec, capsys):
        assert cli.main(["density", "--spec", fig1_spec, "--show-config"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["command"] == "density"
        assert payload["knobs"] == {"range": "0:4", "points": 800}
        assert "config_sha256" in payload


class TestEnvironmentOverrides:
    def test_outdir_redirects_relative_outputs(self, fig1_spec, tmp_path, monkeypatch):
        monkeypatch.setenv("CORRWISHART_OUTDIR", str(tmp_path))
        assert cli.main(["support", "--spec", fig1_spec, "--out", "sup.json"]) == 0
        assert (tmp_path / "sup.json").exists()

    def test_threads_env_must_be_integer(self, monkeypatch):
        monkeypatch.setenv("CORRWISHART_THREADS", "many")
        assert cli.main(["validate", "--quick"]) == 2

    def test_threads_flag_sets_blas_caps(self, monkeypatch, capsys):
        for var in cli._THREAD_ENV_VARS:
            monkeypatch.delenv(var, raising=False)
        assert cli.main(["--threads", "1", "validate", "--quick"]) == 0
        capsys.readouterr()
        import os

        assert all(os.environ[var] == "1" for var in cli._THREAD_ENV_VARS)


class TestConsoleScript:
    def test_entry_point_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "corrwishart.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "density" in proc.stdout and "simulate" in proc.stdout
