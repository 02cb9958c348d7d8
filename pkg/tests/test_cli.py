import json
import struct
from pathlib import Path

import numpy as np
import pytest

from gkdv import cli, snapshots
from gkdv import grid as g
from gkdv.acceptance import CriterionResult


class TestSnapshots:
    def test_roundtrip_bitwise(self, tmp_path, rng):
        grid = g.make_grid(64.0, 128)
        fh = np.zeros(grid.n // 2 + 1, dtype=complex)
        fh[1:11] = rng.normal(size=10) + 1j * rng.normal(size=10)
        f = g.from_hat(grid, fh)
        path = tmp_path / "field.gkdv"
        snapshots.save_snapshot(f, 12.5, path)
        loaded, t = snapshots.load_snapshot(path)
        assert t == 12.5
        assert loaded.grid == grid
        assert np.array_equal(loaded.values, f.values)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.gkdv"
        path.write_bytes(b"NOPE" + bytes(28 + 8 * 16))
        with pytest.raises(snapshots.SnapshotError, match="magic"):
            snapshots.load_snapshot(path)

    def test_version_mismatch(self, tmp_path):
        grid = g.make_grid(64.0, 64)
        path = tmp_path / "v2.gkdv"
        snapshots.save_snapshot(g.zeros(grid), 0.0, path)
        raw = bytearray(path.read_bytes())
        raw[4:8] = struct.pack("<I", 999)
        path.write_bytes(bytes(raw))
        with pytest.raises(snapshots.SnapshotError, match="version"):
            snapshots.load_snapshot(path)

    def test_truncated(self, tmp_path):
        grid = g.make_grid(64.0, 64)
        path = tmp_path / "trunc.gkdv"
        snapshots.save_snapshot(g.zeros(grid), 0.0, path)
        path.write_bytes(path.read_bytes()[:-16])
        with pytest.raises(snapshots.SnapshotError):
            snapshots.load_snapshot(path)


def write_config(tmp_path, **overrides) -> Path:
    cfg = {
        "p": 6,
        "ensemble": [[1.0, 0.0]],
        "grid": {"L": 64.0, "n": 1024},
        "evolve": {"dt": 2.5e-4},
        "t0": 0.0,
        "t1": 0.05,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestConfig:
    def test_missing_file_is_config_error(self, tmp_path):
        assert cli.dispatch("profile", tmp_path / "nope.json", tmp_path / "out") == 2

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, bogus=1)
        assert cli.dispatch("profile", path, tmp_path / "out") == 2

    def test_unknown_command(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.dispatch("frobnicate", path, tmp_path / "out") == 2

    def test_resolved_config_echoed(self, tmp_path):
        path = write_config(tmp_path)
        out = tmp_path / "out"
        assert cli.dispatch("profile", path, out) == 0
        resolved = json.loads((out / "resolved_config.json").read_text())
        assert resolved["p"] == 6
        assert resolved["check_interval"] == 0.05   # default filled in


class TestCommands:
    def test_profile(self, tmp_path):
        path = write_config(tmp_path)
        out = tmp_path / "out"
        assert cli.dispatch("profile", path, out) == 0
        report = json.loads((out / "profile.json").read_text())
        assert report["soliton_1"]["profile_residual"] <= 1e-10
        assert (out / "profile.csv").exists()

    def test_spectrum_subcritical_exits_3(self, tmp_path, capsys):
        path = write_config(tmp_path, p=4,
                            spectrum_grid={"L": 112.0, "n": 512})
        out = tmp_path / "out"
        code = cli.dispatch("spectrum", path, out)
        assert code == 3
        err = capsys.readouterr().err
        assert "no positive real eigenvalue" in err
        assert (out / "diagnostic.json").exists()

    def test_evolve_deterministic(self, tmp_path):
        path = write_config(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert cli.dispatch("evolve", path, out1) == 0
        assert cli.dispatch("evolve", path, out2) == 0
        b1 = (out1 / "trajectory.csv").read_bytes()
        b2 = (out2 / "trajectory.csv").read_bytes()
        assert b1 == b2
        header = b1.decode().splitlines()[0]
        assert header == "t,mass,energy,h1_dist_to_R"

    def test_verify_plumbing(self, tmp_path, monkeypatch, capsys):
        from gkdv import acceptance

        def fake_run(res=None, full=True, printer=print):
            results = [CriterionResult(1, "stub pass", True, ["detail"]),
                       CriterionResult(2, "stub fail", False, ["bad"])]
            for r in results:
                printer(r.report())
            return results
        monkeypatch.setattr(acceptance, "run_criteria", fake_run)
        path = write_config(tmp_path)
        out = tmp_path / "out"
        assert cli.dispatch("verify", path, out) == 1
        text = capsys.readouterr().out
        assert "[PASS] criterion  1" in text
        assert "[FAIL] criterion  2" in text
        payload = json.loads((out / "verify.json").read_text())
        assert [r["passed"] for r in payload] == [True, False]


@pytest.mark.slow
class TestConstructCommand:
    def test_short_window_construct(self, tmp_path):
        cfg = {
            "p": 6,
            "ensemble": [[1.0, -60.0]],
            "grid": {"L": 96.0, "n": 1024},
            "window": {"T0": 62.0, "Sn": 64.0},
            "evolve": {"dt": 2.5e-4},
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg))
        out = tmp_path / "out"
        assert cli.dispatch("construct", path, out) == 0
        result = json.loads((out / "result.json").read_text())
        assert result["success"] is True
        assert (out / "series.csv").exists()
        assert (out / "u_T0.gkdv").exists()
        u, t = snapshots.load_snapshot(out / "u_T0.gkdv")
        assert t == 62.0
