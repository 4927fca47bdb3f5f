"""Worst-case alternation driver and its diagnostics.

Each outer iteration first lets the adversary pick the worst steering
vector inside the eps-ball around the current sequence (trust-region
solve of the penalized steering cost, warm-started at a seeded tangent
nudge of norm sqrt(eps) off the sequence -- the sequence itself is a
stationary saddle of that cost), then re-optimizes the sequence against
that steering. The loop stops once the output SCNR moves by less than
scnr_tol_db across consecutive outer iterations, or at max_outer; the
overall alternation is monitored, not proven, so hitting the cap is a
warning outcome rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import radar, rtr
from .manifold import (
    TangentVector,
    UnitModulusSequence,
    random_point,
    random_tangent,
    retract,
)
from .objectives import SequenceObjective, WorstCaseObjective, epsilon_from_doppler
from .radar import ClutterScene, clutter_energy, steering_vector

ERROR_MODELS = ("doppler_interval", "uniform_random_phase")


@dataclass(frozen=True)
class WrtrConfig:
    lam: float = 100.0
    epsilon: float | None = None
    doppler_interval: tuple[float, float] | None = None
    interval_grid_points: int = 2001
    max_outer: int = 20
    scnr_tol_db: float = 0.01
    noise_power: float = 1.0
    target_power: float = 1.0
    worst_solver: rtr.TrustRegionConfig = field(default_factory=rtr.TrustRegionConfig)
    seq_solver: rtr.TrustRegionConfig = field(default_factory=rtr.TrustRegionConfig)

    def __post_init__(self):
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")
        if self.scnr_tol_db <= 0:
            raise ValueError("scnr_tol_db must be > 0")
        if self.epsilon is None and self.doppler_interval is None:
            raise ValueError("either epsilon or doppler_interval must be given")

    def resolve_epsilon(self, n: int) -> float:
        if self.epsilon is not None:
            eps = float(self.epsilon)
        else:
            lo, hi = self.doppler_interval
            grid = np.linspace(lo, hi, self.interval_grid_points)
            eps = epsilon_from_doppler(grid, 0.0, n)
        if not 0.0 <= eps <= 4.0 * n:
            raise ValueError(f"epsilon {eps} outside [0, 4n]")
        return eps


@dataclass(frozen=True)
class OuterIteration:
    scr_db: float
    scnr_db: float
    worst_cost: float
    seq_cost: float
    worst_trace: rtr.TrustRegionTrace | None
    seq_trace: rtr.TrustRegionTrace


@dataclass(frozen=True)
class WrtrResult:
    sequence: UnitModulusSequence
    worst_steering: UnitModulusSequence
    initial_sequence: UnitModulusSequence
    history: tuple
    epsilon: float
    converged: bool


def _nudge(s: UnitModulusSequence, epsilon: float, seed: int) -> TangentVector:
    rng = np.random.default_rng([seed, 0])
    return random_tangent(s, rng, scale=float(np.sqrt(epsilon)))


def optimize(scene: ClutterScene, cfg: WrtrConfig, seed: int) -> WrtrResult:
    """Alternate worst-case steering and sequence solves from a seeded start."""
    if len(scene.scatterers) < 1:
        raise ValueError("scene must contain at least one scatterer")
    n = scene.n
    eps = cfg.resolve_epsilon(n)
    s0 = random_point(n, seed)
    s = s0
    st = s0
    history = []
    prev_scnr = None
    converged = False
    for outer in range(cfg.max_outer):
        if eps > 0.0:
            worst_obj = WorstCaseObjective(s, lam=cfg.lam, epsilon=eps)
            # First outer: seeded tangent nudge of norm sqrt(eps), because s
            # itself is a stationary saddle of the steering cost. Later
            # outers restart from the previous worst steering so the
            # adversary moves continuously and the alternation can settle
            # (a fresh nudge every outer makes it cycle between distant
            # points of the adversary's solution set).
            start = retract(s, _nudge(s, eps, seed)) if outer == 0 else st
            st, worst_trace = rtr.solve(worst_obj, start, cfg.worst_solver)
            worst_cost = worst_obj.cost(st)
            seq_obj = SequenceObjective(scene, steering=st)
        else:
            # eps = 0: the uncertainty ball is {s}, so the alternation
            # reduces to the nominal design with constant numerator n^2.
            st = s
            worst_trace = None
            worst_cost = 0.0
            seq_obj = SequenceObjective(scene, steering=None)
        s, seq_trace = rtr.solve(seq_obj, s, cfg.seq_solver)
        if eps == 0.0:
            st = s
        scr_db = radar.scr(s, st, scene)
        scnr_db = radar.scnr(s, st, scene, cfg.noise_power, cfg.target_power)
        history.append(
            OuterIteration(
                scr_db=scr_db,
                scnr_db=scnr_db,
                worst_cost=worst_cost,
                seq_cost=seq_obj.cost(s),
                worst_trace=worst_trace,
                seq_trace=seq_trace,
            )
        )
        if prev_scnr is not None and abs(scnr_db - prev_scnr) < cfg.scnr_tol_db:
            converged = True
            break
        prev_scnr = scnr_db
    if eps > 0.0:
        # Refresh the adversary against the final sequence so the returned
        # pair is self-consistent (each recorded st was solved against the
        # sequence from before that outer's sequence update).
        worst_obj = WorstCaseObjective(s, lam=cfg.lam, epsilon=eps)
        st, _ = rtr.solve(worst_obj, st, cfg.worst_solver)
    return WrtrResult(
        sequence=s,
        worst_steering=st,
        initial_sequence=s0,
        history=tuple(history),
        epsilon=eps,
        converged=converged,
    )


def tangent_basis(x: UnitModulusSequence) -> list:
    """Orthonormal real basis of T_x M: the i-th vector is j*x_i on entry i."""
    basis = []
    for i in range(x.n):
        e = np.zeros(x.n, dtype=np.complex128)
        e[i] = 1j * x.entries[i]
        basis.append(TangentVector(e, x))
    return basis


def hessian_matrix(problem, x: UnitModulusSequence) -> np.ndarray:
    """Matrix of the Riemannian Hessian operator on the tangent basis."""
    phase = np.conj(1j * x.entries)
    cols = []
    for b in tangent_basis(x):
        h = problem.rhess(x, b)
        cols.append(np.real(phase * h.entries))
    return np.column_stack(cols)


def hessian_spectrum(problem, x: UnitModulusSequence) -> np.ndarray:
    """Eigenvalues of the Riemannian Hessian on T_x M, sorted ascending."""
    h = hessian_matrix(problem, x)
    return np.linalg.eigvalsh(0.5 * (h + h.T))


@dataclass(frozen=True)
class ScrStats:
    mean_db: float
    std_db: float
    min_db: float
    max_db: float
    n_trials: int


def monte_carlo_scr(
    designs,
    scene: ClutterScene,
    n_trials: int,
    error_model: str,
    seed: int,
    doppler_interval: tuple[float, float] | None = None,
) -> dict:
    """Realized-SCR statistics per design under a steering error model.

    designs maps name -> UnitModulusSequence. Per trial the distortion is
    drawn once and applied to every design: doppler_interval draws
    v ~ U(lo, hi) and distorts by p(v); uniform_random_phase draws an
    i.i.d. phase ramp on [0, 2pi). Trial t uses the deterministic
    substream default_rng([seed, t]), so results are reproducible and
    trials may run in parallel. Statistics are over per-trial dB values.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    if error_model not in ERROR_MODELS:
        raise ValueError(f"error_model must be one of {ERROR_MODELS}, got {error_model!r}")
    if error_model == "doppler_interval" and doppler_interval is None:
        raise ValueError("doppler_interval error model needs the interval")
    n = scene.n
    energies = {}
    for name, seq in designs.items():
        ce = clutter_energy(seq, scene)
        if ce == 0.0:
            raise radar.DegenerateSceneError(f"design {name!r} sees zero clutter energy")
        energies[name] = ce
    samples = {name: np.empty(n_trials) for name in designs}
    for t in range(n_trials):
        rng = np.random.default_rng([seed, t])
        if error_model == "doppler_interval":
            v = rng.uniform(doppler_interval[0], doppler_interval[1])
            distortion = steering_vector(v, n)
        else:
            distortion = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=n))
        for name, seq in designs.items():
            num = abs(np.vdot(seq.entries, seq.entries * distortion)) ** 2
            samples[name][t] = 10.0 * np.log10(num / energies[name])
    return {
        name: ScrStats(
            mean_db=float(np.mean(vals)),
            std_db=float(np.std(vals)),
            min_db=float(np.min(vals)),
            max_db=float(np.max(vals)),
            n_trials=n_trials,
        )
        for name, vals in samples.items()
    }


def design_nonrobust(scene: ClutterScene, solver: rtr.TrustRegionConfig, seed: int):
    """Non-robust trust-region design: minimize clutter energy / n^2."""
    objective = SequenceObjective(scene, steering=None)
    return rtr.solve(objective, random_point(scene.n, seed), solver)
