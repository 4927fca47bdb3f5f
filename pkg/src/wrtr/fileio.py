"""CSV / JSON export and ingest for run artifacts.

Complex sequence values are serialized with 17 significant digits so a
written sequence re-ingests bit-exactly; all writers are deterministic
functions of their inputs (no timestamps), which makes rerun outputs
byte-identical for identical config and seed.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .manifold import UnitModulusSequence


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _g10(x: float) -> str:
    return format(float(x), ".10g")


def write_sequence_csv(path, seq: UnitModulusSequence) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "real", "imag"])
        for i, z in enumerate(seq.entries):
            w.writerow([i, _g17(z.real), _g17(z.imag)])


def read_sequence_csv(path) -> UnitModulusSequence:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["index", "real", "imag"]:
        raise ValueError(f"{path}: not a sequence CSV (bad header)")
    values = np.array([complex(float(r[1]), float(r[2])) for r in rows[1:]])
    return UnitModulusSequence(values)


def write_staf_csv(path, range_bins, doppler_bins, values_db: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["range_bin"] + [str(h) for h in doppler_bins])
        for r, row in zip(range_bins, values_db):
            w.writerow([r] + [_g10(v) for v in row])


def write_cut_csv(path, doppler_bins, dopplers, values_db) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["doppler_bin", "doppler", "value_db"])
        for h, v, db in zip(doppler_bins, dopplers, values_db):
            w.writerow([h, _g10(v), _g10(db)])


def write_spectrum_csv(path, eigenvalues) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "eigenvalue"])
        for i, ev in enumerate(eigenvalues):
            w.writerow([i, _g17(ev)])


def write_trace_csv(path, sections) -> None:
    """sections: iterable of (outer, phase, trace) with rtr or rcg traces."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["outer", "phase", "iteration", "cost", "grad_norm", "rho", "delta",
             "step_norm", "accepted", "tcg_stop"]
        )
        for outer, phase, trace in sections:
            if trace is None:
                continue
            for i, it in enumerate(trace.iterations):
                if hasattr(it, "rho"):
                    w.writerow(
                        [outer, phase, i, _g17(it.cost), _g17(it.grad_norm), _g17(it.rho),
                         _g17(it.delta), _g17(it.step_norm), int(it.accepted),
                         it.tcg_stop.value]
                    )
                else:
                    w.writerow(
                        [outer, phase, i, _g17(it.cost), _g17(it.grad_norm), "", "",
                         _g17(it.step_norm), 1, ""]
                    )


def write_mc_csv(path, rows) -> None:
    """rows: iterable of (design, error_model, ScrStats)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["design", "error_model", "n_trials", "mean_db", "std_db", "min_db", "max_db"])
        for design, model, stats in rows:
            w.writerow(
                [design, model, stats.n_trials, _g17(stats.mean_db), _g17(stats.std_db),
                 _g17(stats.min_db), _g17(stats.max_db)]
            )


def write_report(path, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def check_manifest(out_dir, files) -> None:
    missing = [f for f in files if not (Path(out_dir) / f).is_file()]
    if missing:
        raise RuntimeError(f"report references missing output files: {missing}")
