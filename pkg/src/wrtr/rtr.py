"""Riemannian trust-region solver with a Steihaug-Toint inner loop.

One engine serves both subproblems: a problem object only has to expose
cost(x), rgrad(x) and rhess(x, xi) on the circle-product manifold. Each
outer iteration minimizes the quadratic model

    m(xi) = f(x) + <grad, xi> + 1/2 <Hess xi, xi>,   ||xi|| <= Delta

by truncated conjugate gradients, retracts the step, and accepts or
rejects it on the actual-to-predicted decrease ratio rho. The radius
shrinks by 1/4 when rho < 1/4 and doubles (capped at delta_bar) only
when rho > 3/4 with the step on the boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .manifold import TangentVector, UnitModulusSequence, inner, norm, retract, zero_tangent


class TcgStop(enum.Enum):
    NEGATIVE_CURVATURE = "negative_curvature"
    BOUNDARY = "boundary"
    RESIDUAL_SMALL = "residual_small"
    MAX_INNER = "max_inner"


@dataclass(frozen=True)
class TrustRegionConfig:
    """Solver parameters; None for the radius fields means scale with sqrt(n).

    grad_tol is relative to the initial gradient norm when
    grad_tol_relative is true (the paper-style stopping rule), otherwise
    absolute. tcg_kappa/tcg_theta set the inner residual rule
    ||r_j|| <= ||r_0|| * min(kappa, ||r_0||^theta).
    """

    delta_bar: float | None = None
    delta0: float | None = None
    rho_bar: float = 0.1
    grad_tol: float = 1e-9
    grad_tol_relative: bool = True
    max_iters: int = 100
    tcg_max_inner: int | None = None
    tcg_kappa: float = 0.1
    tcg_theta: float = 1.0

    def __post_init__(self):
        if self.delta_bar is not None and self.delta_bar <= 0:
            raise ValueError("delta_bar must be > 0")
        if self.delta0 is not None:
            if self.delta0 <= 0:
                raise ValueError("delta0 must be > 0")
            if self.delta_bar is not None and self.delta0 > self.delta_bar:
                raise ValueError("delta0 must not exceed delta_bar")
        if not 0.0 < self.rho_bar < 0.25:
            raise ValueError("rho_bar must lie in (0, 1/4)")
        if self.grad_tol < 0:
            raise ValueError("grad_tol must be >= 0")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not 0.0 < self.tcg_kappa < 1.0:
            raise ValueError("tcg_kappa must lie in (0, 1)")
        if self.tcg_theta <= 0:
            raise ValueError("tcg_theta must be > 0")

    def resolved_radii(self, n: int) -> tuple[float, float]:
        delta_bar = self.delta_bar if self.delta_bar is not None else math.sqrt(n)
        delta0 = self.delta0 if self.delta0 is not None else delta_bar / 8.0
        return delta_bar, min(delta0, delta_bar)


@dataclass(frozen=True)
class TrustRegionIteration:
    cost: float
    grad_norm: float
    rho: float
    delta: float
    accepted: bool
    step_norm: float
    tcg_stop: TcgStop


@dataclass
class TrustRegionTrace:
    """Per-iteration history plus the run summary."""

    iterations: list = field(default_factory=list)
    initial_grad_norm: float = 0.0
    final_grad_norm: float = 0.0
    final_cost: float = 0.0
    grad_tol_effective: float = 0.0
    converged: bool = False

    def __len__(self) -> int:
        return len(self.iterations)

    def accepted_costs(self) -> list:
        return [it.cost for it in self.iterations if it.accepted]


def _boundary_step(eta: TangentVector, d: TangentVector, delta: float) -> TangentVector:
    """Positive root tau of ||eta + tau d|| = delta along the search direction."""
    a = inner(d, d)
    b = 2.0 * inner(eta, d)
    c = inner(eta, eta) - delta * delta
    tau = (-b + math.sqrt(max(b * b - 4.0 * a * c, 0.0))) / (2.0 * a)
    return eta + tau * d


def tcg(problem, x: UnitModulusSequence, delta: float, cfg: TrustRegionConfig,
        grad: TangentVector | None = None, on_iterate=None):
    """Steihaug-Toint truncated CG on the model at x.

    Returns (step, TcgStop). The step never exceeds the radius (boundary
    and negative-curvature exits land exactly on it) and the model
    decrease is nonnegative by the Cauchy-point property. on_iterate, if
    given, is called with each interior iterate (test hook for the
    monotone-norm property).
    """
    if grad is None:
        grad = problem.rgrad(x)
    max_inner = cfg.tcg_max_inner if cfg.tcg_max_inner is not None else x.n
    eta = zero_tangent(x)
    r0 = norm(grad)
    if r0 == 0.0:
        return eta, TcgStop.RESIDUAL_SMALL
    stop_tol = r0 * min(cfg.tcg_kappa, r0**cfg.tcg_theta)
    r = grad
    d = -grad
    rr = inner(r, r)
    for _ in range(max_inner):
        hd = problem.rhess(x, d)
        d_hd = inner(d, hd)
        if d_hd <= 0.0:
            return _boundary_step(eta, d, delta), TcgStop.NEGATIVE_CURVATURE
        alpha = rr / d_hd
        eta_next = eta + alpha * d
        if norm(eta_next) >= delta:
            return _boundary_step(eta, d, delta), TcgStop.BOUNDARY
        eta = eta_next
        if on_iterate is not None:
            on_iterate(eta)
        r = r + alpha * hd
        rr_next = inner(r, r)
        if math.sqrt(rr_next) <= stop_tol:
            return eta, TcgStop.RESIDUAL_SMALL
        d = -r + (rr_next / rr) * d
        rr = rr_next
    return eta, TcgStop.MAX_INNER


def solve(problem, x0: UnitModulusSequence, cfg: TrustRegionConfig):
    """Run the trust-region outer loop from x0.

    Terminates when the gradient norm reaches the (relative or absolute)
    tolerance or after max_iters; returns (x_final, TrustRegionTrace).
    Accepted-iterate costs are strictly decreasing; a nonpositive model
    decrease rejects the step with rho = -inf and shrinks the radius.
    """
    delta_bar, delta = cfg.resolved_radii(x0.n)
    x = x0
    fx = problem.cost(x)
    g = problem.rgrad(x)
    gn = norm(g)
    tol = cfg.grad_tol * gn if cfg.grad_tol_relative else cfg.grad_tol
    trace = TrustRegionTrace(initial_grad_norm=gn, grad_tol_effective=tol)
    eps = float(np.finfo(float).eps)
    for _ in range(cfg.max_iters):
        if gn <= tol:
            break
        xi, stop = tcg(problem, x, delta, cfg, grad=g)
        step_norm = norm(xi)
        h_xi = problem.rhess(x, xi)
        model_decrease = -(inner(g, xi) + 0.5 * inner(h_xi, xi))
        candidate = retract(x, xi)
        f_cand = problem.cost(candidate)
        guard = 1e4 * eps * abs(fx)
        if model_decrease <= 0.0:
            rho = float("-inf")
        elif model_decrease < guard:
            rho = (fx - f_cand) / (model_decrease + guard)
        else:
            rho = (fx - f_cand) / model_decrease
        accepted = rho > cfg.rho_bar
        trace.iterations.append(
            TrustRegionIteration(
                cost=fx,
                grad_norm=gn,
                rho=rho,
                delta=delta,
                accepted=accepted,
                step_norm=step_norm,
                tcg_stop=stop,
            )
        )
        if rho < 0.25:
            delta = 0.25 * delta
        elif rho > 0.75 and abs(step_norm - delta) <= 1e-12 * max(1.0, delta):
            delta = min(2.0 * delta, delta_bar)
        if accepted:
            x, fx = candidate, f_cand
            g = problem.rgrad(x)
            gn = norm(g)
    trace.final_grad_norm = gn
    trace.final_cost = fx
    trace.converged = gn <= tol
    return x, trace


def check_termination(trace: TrustRegionTrace, cfg: TrustRegionConfig) -> bool:
    """Gradient-norm stopping rule on a recorded trace.

    The spectral condition lambda_min(Hess) >= eps_h is not gated here;
    the spectrum costs an O(n) Hessian assembly and is exposed separately
    as a diagnostic (driver.hessian_spectrum).
    """
    tol = (
        cfg.grad_tol * trace.initial_grad_norm if cfg.grad_tol_relative else cfg.grad_tol
    )
    return trace.final_grad_norm <= tol
