"""Batch CLI: run robust / baseline designs and export plot-ready files.

Subcommands:
    wrtr        alternating worst-case design from a scenario config
    baseline    rtr_nonrobust | rcg_nonrobust | random comparison designs
    montecarlo  realized-SCR statistics for previously exported designs
    staf        recompute the ambiguity surface for an existing sequence

Exit codes: 0 success, 2 config/input error (no partial outputs),
3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import driver, fileio, radar
from .manifold import DegenerateRetractionError, random_point
from .objectives import NearOrthogonalSteeringError, SequenceObjective, WorstCaseObjective
from .radar import DegenerateSceneError
from .rcg import RcgConfig, solve_rcg
from .scenario import ScenarioConfig, ScenarioError, load_scenario

BASELINE_METHODS = ("rtr_nonrobust", "rcg_nonrobust", "random")
_SOLVER_ERRORS = (DegenerateSceneError, NearOrthogonalSteeringError, DegenerateRetractionError)


@dataclass
class RunReport:
    command: str
    seed: int
    summary: dict
    files: list


def _doppler_bins(n: int):
    bins = list(range(n))
    return bins, np.array(bins, dtype=float) / n


def _nominal_scr_db(seq, scene) -> float:
    return 10.0 * np.log10(seq.n**2 / radar.clutter_energy(seq, scene))


def _export_staf_products(out: Path, cfg: ScenarioConfig, named_sequences) -> tuple[list, dict]:
    """Write STAF grids and Doppler cuts; returns (files, clutter-bin means)."""
    n = cfg.n
    bins, grid = _doppler_bins(n)
    staf_bins = list(cfg.staf_range_bins) if cfg.staf_range_bins is not None else bins
    files = []
    summaries = {}
    for label, seq in named_sequences:
        full = radar.staf(seq, bins, grid)
        name = f"staf_{label}.csv"
        fileio.write_staf_csv(out / name, staf_bins, bins, full[staf_bins])
        files.append(name)
        summaries[label] = full
    for b in cfg.doppler_cut_range_bins:
        label, seq = named_sequences[-1]
        name = f"doppler_cut_r{b}.csv"
        fileio.write_cut_csv(out / name, bins, grid, summaries[label][b])
        files.append(name)
    return files, summaries


def _write_report(out: Path, report: RunReport, config_path, elapsed: float) -> None:
    files = sorted(set(report.files + ["report.json"]))
    fileio.write_report(
        out / "report.json",
        {
            "command": report.command,
            "config": str(config_path),
            "seed": report.seed,
            "elapsed_seconds": elapsed,
            "summary": report.summary,
            "files": files,
        },
    )
    fileio.check_manifest(out, files)


def run_wrtr(cfg: ScenarioConfig, out: Path, seed: int) -> RunReport:
    scene = cfg.to_scene()
    result = driver.optimize(scene, cfg.to_wrtr_config(), seed)
    files = []
    fileio.write_sequence_csv(out / "sequence_initial.csv", result.initial_sequence)
    fileio.write_sequence_csv(out / "sequence_final.csv", result.sequence)
    fileio.write_sequence_csv(out / "steering_worst.csv", result.worst_steering)
    files += ["sequence_initial.csv", "sequence_final.csv", "steering_worst.csv"]

    sections = []
    for k, it in enumerate(result.history):
        sections.append((k, "worst", it.worst_trace))
        sections.append((k, "seq", it.seq_trace))
    fileio.write_trace_csv(out / "traces.csv", sections)
    files.append("traces.csv")

    staf_files, _ = _export_staf_products(
        out, cfg, [("initial", result.initial_sequence), ("final", result.sequence)]
    )
    files += staf_files

    seq_obj = SequenceObjective(scene, steering=result.worst_steering if result.epsilon > 0 else None)
    fileio.write_spectrum_csv(
        out / "hessian_spectrum_seq.csv", driver.hessian_spectrum(seq_obj, result.sequence)
    )
    files.append("hessian_spectrum_seq.csv")
    if result.epsilon > 0:
        worst_obj = WorstCaseObjective(result.sequence, lam=cfg.lam, epsilon=result.epsilon)
        fileio.write_spectrum_csv(
            out / "hessian_spectrum_worst.csv",
            driver.hessian_spectrum(worst_obj, result.worst_steering),
        )
        files.append("hessian_spectrum_worst.csv")

    last = result.history[-1]
    summary = {
        "epsilon": result.epsilon,
        "outer_iterations": len(result.history),
        "outer_converged": result.converged,
        "scr_db": last.scr_db,
        "scnr_db": last.scnr_db,
        "nominal_scr_initial_db": _nominal_scr_db(result.initial_sequence, scene),
        "nominal_scr_final_db": _nominal_scr_db(result.sequence, scene),
        "outer_history": [
            {"scr_db": h.scr_db, "scnr_db": h.scnr_db, "worst_cost": h.worst_cost, "seq_cost": h.seq_cost}
            for h in result.history
        ],
    }
    return RunReport(command="wrtr", seed=seed, summary=summary, files=files)


def run_baseline(cfg: ScenarioConfig, out: Path, seed: int, method: str) -> RunReport:
    if method not in BASELINE_METHODS:
        raise ScenarioError(f"unknown baseline method {method!r}")
    scene = cfg.to_scene()
    initial = random_point(cfg.n, seed)
    files = []
    fileio.write_sequence_csv(out / "sequence_initial.csv", initial)
    files.append("sequence_initial.csv")

    sections = []
    solver_summary = {}
    if method == "random":
        final = initial
    elif method == "rtr_nonrobust":
        objective = SequenceObjective(scene, steering=None)
        final, trace = driver.design_nonrobust(scene, cfg.seq_solver, seed)
        sections.append((0, "seq", trace))
        solver_summary = {"iterations": len(trace), "converged": trace.converged}
        fileio.write_spectrum_csv(
            out / "hessian_spectrum_seq.csv", driver.hessian_spectrum(objective, final)
        )
        files.append("hessian_spectrum_seq.csv")
    else:
        objective = SequenceObjective(scene, steering=None)
        rcg_cfg = RcgConfig(
            grad_tol=cfg.seq_solver.grad_tol,
            grad_tol_relative=cfg.seq_solver.grad_tol_relative,
            max_iters=cfg.seq_solver.max_iters,
        )
        final, trace = solve_rcg(objective, initial, rcg_cfg)
        sections.append((0, "rcg", trace))
        solver_summary = {"iterations": len(trace), "converged": trace.converged}

    fileio.write_sequence_csv(out / "sequence_final.csv", final)
    files.append("sequence_final.csv")
    if sections:
        fileio.write_trace_csv(out / "traces.csv", sections)
        files.append("traces.csv")
    staf_files, _ = _export_staf_products(out, cfg, [("initial", initial), ("final", final)])
    files += staf_files

    summary = {
        "method": method,
        "nominal_scr_initial_db": _nominal_scr_db(initial, scene),
        "nominal_scr_final_db": _nominal_scr_db(final, scene),
        **solver_summary,
    }
    return RunReport(command="baseline", seed=seed, summary=summary, files=files)


def _load_designs(manifest_path: Path, n: int) -> dict:
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read designs manifest {manifest_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON in manifest {manifest_path}: {exc.msg}") from exc
    if not isinstance(manifest, dict) or not isinstance(manifest.get("designs"), list):
        raise ScenarioError("manifest must be an object with a 'designs' list")
    designs = {}
    for i, entry in enumerate(manifest["designs"]):
        if not isinstance(entry, dict) or "name" not in entry or "sequence" not in entry:
            raise ScenarioError(f"designs[{i}] must have 'name' and 'sequence' keys")
        path = Path(entry["sequence"])
        if not path.is_absolute():
            path = manifest_path.parent / path
        if not path.is_file():
            raise ScenarioError(f"designs[{i}] ({entry['name']}): missing sequence file {path}")
        try:
            seq = fileio.read_sequence_csv(path)
        except ValueError as exc:
            raise ScenarioError(f"designs[{i}] ({entry['name']}): {exc}") from exc
        if seq.n != n:
            raise ScenarioError(
                f"designs[{i}] ({entry['name']}): length {seq.n} does not match config n={n}"
            )
        designs[str(entry["name"])] = seq
    if not designs:
        raise ScenarioError("manifest lists no designs")
    return designs


def run_monte_carlo(cfg: ScenarioConfig, out: Path, seed: int, designs: dict) -> RunReport:
    if cfg.doppler_interval is None:
        raise ScenarioError("montecarlo needs doppler_interval in the config")
    scene = cfg.to_scene()
    rows = []
    summary = {"n_trials": cfg.monte_carlo_trials, "designs": {}}
    for model in driver.ERROR_MODELS:
        stats = driver.monte_carlo_scr(
            designs,
            scene,
            n_trials=cfg.monte_carlo_trials,
            error_model=model,
            seed=seed,
            doppler_interval=cfg.doppler_interval,
        )
        for name, st in stats.items():
            rows.append((name, model, st))
            summary["designs"].setdefault(name, {})[model] = {
                "mean_db": st.mean_db,
                "std_db": st.std_db,
                "min_db": st.min_db,
                "max_db": st.max_db,
            }
    fileio.write_mc_csv(out / "scr_stats.csv", rows)
    return RunReport(command="montecarlo", seed=seed, summary=summary, files=["scr_stats.csv"])


def run_staf(cfg: ScenarioConfig, out: Path, seed: int, sequence_path: Path) -> RunReport:
    try:
        seq = fileio.read_sequence_csv(sequence_path)
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"cannot load sequence {sequence_path}: {exc}") from exc
    if seq.n != cfg.n:
        raise ScenarioError(f"sequence length {seq.n} does not match config n={cfg.n}")
    files, _ = _export_staf_products(out, cfg, [("recomputed", seq)])
    summary = {"sequence": str(sequence_path), "nominal_scr_db": _nominal_scr_db(seq, cfg.to_scene())}
    return RunReport(command="staf", seed=seed, summary=summary, files=files)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wrtr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="scenario config (JSON)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")

    p_wrtr = sub.add_parser("wrtr", help="robust worst-case design")
    common(p_wrtr)
    p_base = sub.add_parser("baseline", help="non-robust / random comparison designs")
    common(p_base)
    p_base.add_argument("--method", required=True, choices=BASELINE_METHODS)
    p_mc = sub.add_parser("montecarlo", help="Monte-Carlo realized SCR")
    common(p_mc)
    p_mc.add_argument("--designs", required=True, help="designs manifest (JSON)")
    p_staf = sub.add_parser("staf", help="recompute STAF for a sequence file")
    common(p_staf)
    p_staf.add_argument("sequence", help="sequence CSV to analyze")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # Validate every input before creating any output, so a bad config
    # leaves no partial artifacts behind.
    try:
        cfg = load_scenario(args.config)
        seed = args.seed if args.seed is not None else cfg.seed
        designs = None
        if args.command == "montecarlo":
            if cfg.doppler_interval is None:
                raise ScenarioError("montecarlo needs doppler_interval in the config")
            designs = _load_designs(Path(args.designs), cfg.n)
    except ScenarioError as exc:
        print(f"wrtr: config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        if args.command == "wrtr":
            report = run_wrtr(cfg, out, seed)
        elif args.command == "baseline":
            report = run_baseline(cfg, out, seed, args.method)
        elif args.command == "montecarlo":
            report = run_monte_carlo(cfg, out, seed, designs)
        else:
            report = run_staf(cfg, out, seed, Path(args.sequence))
    except ScenarioError as exc:
        print(f"wrtr: config error: {exc}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as exc:
        print(f"wrtr: solver failure [{args.command}]: {exc}", file=sys.stderr)
        return 3
    _write_report(out, report, args.config, time.perf_counter() - started)
    print(f"wrtr: {args.command} finished; outputs in {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
