import json
from pathlib import Path

import numpy as np
import pytest

from wrtr.cli import main
from wrtr.fileio import read_sequence_csv, write_sequence_csv
from wrtr.manifold import random_point

SMALL_CONFIG = Path(__file__).resolve().parents[1] / "configs" / "small.json"


def read_report(out_dir: Path) -> dict:
    with open(out_dir / "report.json") as fh:
        return json.load(fh)


def csv_bytes(out_dir: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(out_dir.glob("*.csv"))}


class TestSequenceRoundTrip:
    def test_bit_exact(self, tmp_path):
        seq = random_point(33, 11)
        path = tmp_path / "seq.csv"
        write_sequence_csv(path, seq)
        back = read_sequence_csv(path)
        assert np.array_equal(back.entries, seq.entries)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_sequence_csv(path)


class TestWrtrCommand:
    def test_full_run_writes_manifest(self, tmp_path):
        out = tmp_path / "run"
        assert main(["wrtr", "--config", str(SMALL_CONFIG), "--out", str(out)]) == 0
        report = read_report(out)
        for name in report["files"]:
            assert (out / name).is_file(), name
        assert "sequence_final.csv" in report["files"]
        assert "doppler_cut_r4.csv" in report["files"]
        assert report["summary"]["outer_iterations"] >= 1

    def test_malformed_config_exits_2_without_outputs(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"clutter_blocks": []}))  # missing n
        out = tmp_path / "nothing"
        assert main(["wrtr", "--config", str(cfg), "--out", str(out)]) == 2
        assert not out.exists()

    def test_seed_flag_overrides_config(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        main(["wrtr", "--config", str(SMALL_CONFIG), "--out", str(out_a), "--seed", "1"])
        main(["wrtr", "--config", str(SMALL_CONFIG), "--out", str(out_b), "--seed", "2"])
        a = read_sequence_csv(out_a / "sequence_initial.csv")
        b = read_sequence_csv(out_b / "sequence_initial.csv")
        assert not np.allclose(a.entries, b.entries)

    def test_rerun_is_byte_identical(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["wrtr", "--config", str(SMALL_CONFIG), "--out", str(out_a)]) == 0
        assert main(["wrtr", "--config", str(SMALL_CONFIG), "--out", str(out_b)]) == 0
        assert csv_bytes(out_a) == csv_bytes(out_b)


class TestBaselineCommand:
    @pytest.mark.parametrize("method", ["rtr_nonrobust", "rcg_nonrobust", "random"])
    def test_methods_run(self, tmp_path, method):
        out = tmp_path / method
        code = main(["baseline", "--config", str(SMALL_CONFIG), "--out", str(out),
                     "--method", method])
        assert code == 0
        report = read_report(out)
        assert report["summary"]["method"] == method
        for name in report["files"]:
            assert (out / name).is_file()

    def test_shared_seeding_across_methods(self, tmp_path):
        outs = {}
        for method in ("rtr_nonrobust", "rcg_nonrobust", "random"):
            out = tmp_path / method
            main(["baseline", "--config", str(SMALL_CONFIG), "--out", str(out),
                  "--method", method])
            outs[method] = read_sequence_csv(out / "sequence_initial.csv").entries
        assert np.array_equal(outs["rtr_nonrobust"], outs["rcg_nonrobust"])
        assert np.array_equal(outs["rtr_nonrobust"], outs["random"])

    def test_random_baseline_leaves_sequence_unoptimized(self, tmp_path):
        out = tmp_path / "rand"
        main(["baseline", "--config", str(SMALL_CONFIG), "--out", str(out),
              "--method", "random"])
        initial = read_sequence_csv(out / "sequence_initial.csv")
        final = read_sequence_csv(out / "sequence_final.csv")
        assert np.array_equal(initial.entries, final.entries)


class TestMonteCarloCommand:
    def _make_designs(self, tmp_path) -> Path:
        d1 = tmp_path / "d1.csv"
        d2 = tmp_path / "d2.csv"
        write_sequence_csv(d1, random_point(16, 1))
        write_sequence_csv(d2, random_point(16, 2))
        manifest = tmp_path / "designs.json"
        manifest.write_text(json.dumps({"designs": [
            {"name": "one", "sequence": "d1.csv"},
            {"name": "two", "sequence": "d2.csv"},
        ]}))
        return manifest

    def test_runs_both_error_models(self, tmp_path):
        manifest = self._make_designs(tmp_path)
        out = tmp_path / "mc"
        code = main(["montecarlo", "--config", str(SMALL_CONFIG), "--out", str(out),
                     "--designs", str(manifest)])
        assert code == 0
        table = (out / "scr_stats.csv").read_text().splitlines()
        assert len(table) == 1 + 2 * 2  # header + designs x models
        assert any("uniform_random_phase" in line for line in table)
        assert any("doppler_interval" in line for line in table)

    def test_missing_design_file_exits_2(self, tmp_path):
        manifest = tmp_path / "designs.json"
        manifest.write_text(json.dumps({"designs": [
            {"name": "ghost", "sequence": "missing.csv"}
        ]}))
        out = tmp_path / "mc"
        code = main(["montecarlo", "--config", str(SMALL_CONFIG), "--out", str(out),
                     "--designs", str(manifest)])
        assert code == 2
        assert not out.exists()

    def test_rerun_byte_identical(self, tmp_path):
        manifest = self._make_designs(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main(["montecarlo", "--config", str(SMALL_CONFIG), "--out", str(out),
                         "--designs", str(manifest)]) == 0
        assert (out_a / "scr_stats.csv").read_bytes() == (out_b / "scr_stats.csv").read_bytes()


class TestStafCommand:
    def test_recompute_for_existing_sequence(self, tmp_path):
        seq_path = tmp_path / "seq.csv"
        write_sequence_csv(seq_path, random_point(16, 5))
        out = tmp_path / "staf"
        code = main(["staf", "--config", str(SMALL_CONFIG), "--out", str(out), str(seq_path)])
        assert code == 0
        report = read_report(out)
        assert "staf_recomputed.csv" in report["files"]

    def test_length_mismatch_exits_2(self, tmp_path):
        seq_path = tmp_path / "seq.csv"
        write_sequence_csv(seq_path, random_point(8, 5))
        out = tmp_path / "staf"
        code = main(["staf", "--config", str(SMALL_CONFIG), "--out", str(out), str(seq_path)])
        assert code == 2
