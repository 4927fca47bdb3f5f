"""Riemannian conjugate gradient (Fletcher-Reeves) baseline.

Minimal first-order comparison method: Fletcher-Reeves coefficient,
projection transport of the previous direction, Armijo backtracking
line search (c = 1e-4, step halving), and the same gradient-norm
stopping rule as the trust-region solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .manifold import (
    DegenerateRetractionError,
    UnitModulusSequence,
    inner,
    norm,
    retract,
    transport,
)


@dataclass(frozen=True)
class RcgConfig:
    grad_tol: float = 1e-9
    grad_tol_relative: bool = True
    max_iters: int = 100
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 60


@dataclass(frozen=True)
class RcgIteration:
    cost: float
    grad_norm: float
    step_norm: float


@dataclass
class RcgTrace:
    iterations: list = field(default_factory=list)
    initial_grad_norm: float = 0.0
    final_grad_norm: float = 0.0
    final_cost: float = 0.0
    converged: bool = False

    def __len__(self) -> int:
        return len(self.iterations)


def solve_rcg(problem, x0: UnitModulusSequence, cfg: RcgConfig = RcgConfig()):
    """Minimize problem.cost from x0; returns (x_final, RcgTrace)."""
    x = x0
    fx = problem.cost(x)
    g = problem.rgrad(x)
    gn = norm(g)
    tol = cfg.grad_tol * gn if cfg.grad_tol_relative else cfg.grad_tol
    trace = RcgTrace(initial_grad_norm=gn)
    d = -g
    t_prev = None
    for _ in range(cfg.max_iters):
        if gn <= tol:
            break
        dg = inner(g, d)
        if dg >= 0.0:  # restart on a non-descent direction
            d = -g
            dg = -gn * gn
        t = 2.0 * t_prev if t_prev is not None else 1.0 / max(1.0, norm(d))
        accepted = False
        for _ in range(cfg.max_backtracks):
            try:
                candidate = retract(x, t * d)
            except DegenerateRetractionError:
                t *= cfg.backtrack
                continue
            f_cand = problem.cost(candidate)
            if f_cand <= fx + cfg.armijo_c * t * dg:
                accepted = True
                break
            t *= cfg.backtrack
        if not accepted:
            break
        step_norm = t * norm(d)
        trace.iterations.append(RcgIteration(cost=fx, grad_norm=gn, step_norm=step_norm))
        x, fx = candidate, f_cand
        g_next = problem.rgrad(x)
        gn_next = norm(g_next)
        beta = (gn_next * gn_next) / (gn * gn) if gn > 0 else 0.0
        d = -g_next + beta * transport(x, d)
        g, gn = g_next, gn_next
        t_prev = t
    trace.final_grad_norm = gn
    trace.final_cost = fx
    trace.converged = gn <= tol
    return x, trace
