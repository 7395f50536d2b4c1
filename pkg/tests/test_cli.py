import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from susy2.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def _read(path):
    with open(path) as fh:
        return json.load(fh)


class TestTransformCommand:
    def test_free_writes_trivial_partner(self, runner, tmp_path):
        out = tmp_path / "t.json"
        result = runner.invoke(main, ["transform", "--potential", "free",
                                      "--k1", "1", "--k2", "1", "--side", "left",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        j = _read(out)
        assert max(abs(v) for v in j["arrays"]["v_tilde"]) < 1e-10

    def test_pt_displaced(self, runner, tmp_path):
        out = tmp_path / "t.json"
        result = runner.invoke(main, ["transform", "--potential", "pt", "--k0", "1",
                                      "--k1", "0.5", "--k2", "0.3", "--side", "right",
                                      "--out", str(out)])
        assert result.exit_code == 0
        j = _read(out)
        x = np.array(j["arrays"]["x"])
        ref = -2 / np.cosh(x + math.atanh(1 / 1.34)) ** 2
        assert np.max(np.abs(np.array(j["arrays"]["v_tilde"]) - ref)) < 1e-8

    def test_byte_determinism(self, runner, tmp_path):
        args = ["transform", "--potential", "oscillator", "--eps-re", "10",
                "--eps-im", "0.1", "--nu", "-1"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_degenerate_energy_exit_3(self, runner, tmp_path):
        result = runner.invoke(main, ["transform", "--eps-re", "1", "--eps-im", "0",
                                      "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 3
        assert "Im(eps1)" in result.output

    def test_missing_energy_exit_3(self, runner, tmp_path):
        result = runner.invoke(main, ["transform", "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 3

    def test_both_routes_exit_3(self, runner, tmp_path):
        result = runner.invoke(main, ["transform", "--k1", "1", "--k2", "1",
                                      "--eps-re", "2", "--eps-im", "1",
                                      "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 3

    def test_compute_failure_exit_2(self, runner, tmp_path):
        table = tmp_path / "v.txt"
        xs = np.linspace(-10, 10, 2001)
        table.write_text("\n".join(f"{x} 0.0" for x in xs))
        result = runner.invoke(main, ["transform", "--potential", "tabulated",
                                      "--potential-file", str(table),
                                      "--k1", "2", "--k2", "0.1", "--side", "left",
                                      "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 2

    def test_tabulated_happy_path(self, runner, tmp_path):
        table = tmp_path / "v.txt"
        xs = np.linspace(-10, 10, 2001)
        rows = ["# an empty well"]
        rows += [f"{x:.17g} 0.0" for x in xs]
        table.write_text("\n".join(rows))
        out = tmp_path / "t.json"
        result = runner.invoke(main, ["transform", "--potential", "tabulated",
                                      "--potential-file", str(table),
                                      "--k1", "0.7", "--k2", "0.4", "--side", "left",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        j = _read(out)
        assert max(abs(v) for v in j["arrays"]["v_tilde"]) < 1e-5

    def test_corrupt_table_exit_3(self, runner, tmp_path):
        table = tmp_path / "v.txt"
        rows = [f"{x} 0.0" for x in range(20)]
        rows[7] = "7 nan"
        table.write_text("\n".join(rows))
        result = runner.invoke(main, ["transform", "--potential", "tabulated",
                                      "--potential-file", str(table),
                                      "--k1", "1", "--k2", "1", "--side", "left",
                                      "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 3
        assert "line 8" in result.output

    def test_seed_tol_env_override(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("SUSY2_SEED_TOL", "1e-30")
        result = runner.invoke(main, ["transform", "--k1", "1", "--k2", "1",
                                      "--side", "left",
                                      "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 2
        assert "residual" in result.output


class TestVerifyCommand:
    def test_pt_all_pass_exit_0(self, runner, tmp_path):
        out = tmp_path / "v.json"
        result = runner.invoke(main, ["verify", "--potential", "pt", "--k0", "1",
                                      "--k1", "0.5", "--k2", "0.3", "--side", "right",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        j = _read(out)
        assert j["all_pass"] is True
        assert {"reports", "spectrum_v", "spectrum_v_tilde"} <= set(j)

    def test_failing_reports_exit_1(self, runner, tmp_path):
        # near-real energy: sub-grid seed features defeat the FD certification
        out = tmp_path / "v.json"
        result = runner.invoke(main, ["verify", "--potential", "oscillator",
                                      "--eps-re", "10", "--eps-im", "0.1",
                                      "--out", str(out)])
        assert result.exit_code == 1
        assert "FAILED checks" in result.output
        j = _read(out)
        # the spectral certification itself still passes
        iso = [r for r in j["reports"] if r["name"].startswith("isospectrality")]
        assert iso and all(r["pass"] for r in iso)


class TestSpectrumCommand:
    def test_base_oscillator(self, runner, tmp_path):
        out = tmp_path / "s.json"
        result = runner.invoke(main, ["spectrum", "--potential", "oscillator",
                                      "--out", str(out)])
        assert result.exit_code == 0
        levels = _read(out)["spectrum"]["levels"]
        assert [lv["nodes"] for lv in levels] == list(range(6))

    def test_partner_spectrum(self, runner, tmp_path):
        out = tmp_path / "s.json"
        result = runner.invoke(main, ["spectrum", "--potential", "pt",
                                      "--k1", "0.5", "--k2", "0.3", "--side", "right",
                                      "--of", "v_tilde", "--out", str(out)])
        assert result.exit_code == 0
        assert _read(out)["spectrum"]["levels"][0]["energy"] == pytest.approx(-1, abs=1e-5)


class TestFigureCommand:
    def test_fig1_file(self, runner, tmp_path):
        out = tmp_path / "fig1.csv"
        result = runner.invoke(main, ["figure", "--which", "fig1", "--out", str(out)])
        assert result.exit_code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x,V,v_tilde"
        assert len(lines) == 1202

    def test_fig2_unit_norm(self, runner, tmp_path):
        out = tmp_path / "fig2.csv"
        result = runner.invoke(main, ["figure", "--which", "fig2", "--out", str(out)])
        assert result.exit_code == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert np.trapezoid(data[:, 1], data[:, 0]) == pytest.approx(1.0, abs=1e-6)

    def test_flipped_branch_identical(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert runner.invoke(main, ["figure", "--which", "fig2", "--eps-im", "0.1",
                                    "--out", str(a)]).exit_code == 0
        assert runner.invoke(main, ["figure", "--which", "fig2", "--eps-im", "-0.1",
                                    "--out", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()


class TestServerMode:
    def test_http_round_trip(self, runner, tmp_path):
        """Thin-client HTTP path against a live server instance."""
        import threading
        import time

        import uvicorn

        from susy2.service import app

        config = uvicorn.Config(app, host="127.0.0.1", port=8765, log_level="error")
        server = uvicorn.Server(config)
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        for _ in range(100):
            if server.started:
                break
            time.sleep(0.05)
        try:
            out = tmp_path / "t.json"
            result = runner.invoke(main, ["transform", "--potential", "free",
                                          "--k1", "1", "--k2", "1", "--side", "left",
                                          "--server", "http://127.0.0.1:8765",
                                          "--out", str(out)])
            assert result.exit_code == 0, result.output
            j = _read(out)
            assert max(abs(v) for v in j["arrays"]["v_tilde"]) < 1e-10

            bad = runner.invoke(main, ["transform", "--eps-re", "1", "--eps-im", "0",
                                       "--server", "http://127.0.0.1:8765",
                                       "--out", str(tmp_path / "x.json")])
            assert bad.exit_code == 3
        finally:
            server.should_exit = True
            thread.join(timeout=5)
