"""The two smooth costs driving the alternation, with hand-derived derivatives.

Worst-case steering cost (sequence s fixed, lam the penalty weight,
eps the squared uncertainty radius; a = s^H st):

    f(st) = Im(a)^2 + lam * (Re(a) - n + eps/2)^2

Sequence cost (worst-case steering st fixed; q_i = s^H Psi_i s):

    f(s) = sum_i |q_i|^2 / |s^H st|^2

With steering=None the coupling numerator is the constant n^2 (the
zero-error matched filter gain), leaving clutter energy / n^2 -- the
non-robust design objective.

Gradients follow the convention Grad = 2 * df/dconj(z), so the real
directional derivative is Df(x)[v] = Re<Grad, v>, and the Riemannian
gradient/Hessian are the tangent projection of Grad and of its
directional derivative minus the radial correction Re{Grad (.) x*}(.)xi.
All derivatives are validated against finite differences in the tests;
no automatic differentiation is involved.
"""

from __future__ import annotations

import numpy as np

from .manifold import TangentVector, UnitModulusSequence, project_tangent
from .radar import ClutterBank, ClutterScene, steering_vector

NEAR_ORTHOGONAL_RTOL = 1e-12


class NearOrthogonalSteeringError(ValueError):
    """Raised when |s^H st| underflows the sequence-cost denominator guard."""


def epsilon_from_doppler(doppler_set, target_doppler: float, n: int) -> float:
    """Uncertainty radius: max over the set of ||p(v) - p(v_t)||^2.

    Zero when the set collapses to the target Doppler, and monotone
    nondecreasing as the set grows; bounded by 4n.
    """
    dopplers = np.atleast_1d(np.asarray(doppler_set, dtype=float))
    if dopplers.size == 0:
        raise ValueError("doppler set must be nonempty")
    nominal = steering_vector(target_doppler, n)
    worst = 0.0
    for v in dopplers:
        worst = max(worst, float(np.sum(np.abs(steering_vector(v, n) - nominal) ** 2)))
    return worst


def _entries(point) -> np.ndarray:
    """Accept a manifold point or a raw ambient vector (for FD checks)."""
    if isinstance(point, UnitModulusSequence):
        return point.entries
    return np.asarray(point, dtype=np.complex128)


def _tangent_entries(xi) -> np.ndarray:
    if isinstance(xi, TangentVector):
        return xi.entries
    return np.asarray(xi, dtype=np.complex128)


class _ManifoldObjective:
    """Shared projection machinery for objectives on the circle product."""

    def rgrad(self, x: UnitModulusSequence) -> TangentVector:
        return project_tangent(x, self.egrad(x))

    def rhess(self, x: UnitModulusSequence, xi: TangentVector) -> TangentVector:
        radial = np.real(self.egrad(x) * np.conj(x.entries))
        projected = project_tangent(x, self.ehess_dir(x, xi))
        return TangentVector(projected.entries - radial * xi.entries, x)


class WorstCaseObjective(_ManifoldObjective):
    """Penalized worst-case steering cost for a fixed transmit sequence."""

    def __init__(self, s: UnitModulusSequence, lam: float = 100.0, epsilon: float = 0.0):
        if lam <= 0:
            raise ValueError(f"lam must be > 0, got {lam}")
        if not 0.0 <= epsilon <= 4.0 * s.n:
            raise ValueError(f"epsilon must lie in [0, 4n] = [0, {4 * s.n}], got {epsilon}")
        self.s = s
        self.lam = float(lam)
        self.epsilon = float(epsilon)
        self.n = s.n
        self._target = s.n - 0.5 * self.epsilon

    def _correlation(self, st) -> complex:
        return complex(np.vdot(self.s.entries, _entries(st)))

    def cost(self, st) -> float:
        a = self._correlation(st)
        return a.imag**2 + self.lam * (a.real - self._target) ** 2

    def egrad(self, st) -> np.ndarray:
        a = self._correlation(st)
        return (2j * a.imag + 2.0 * self.lam * (a.real - self._target)) * self.s.entries

    def ehess_dir(self, st, xi) -> np.ndarray:
        a_xi = complex(np.vdot(self.s.entries, _tangent_entries(xi)))
        return (2j * a_xi.imag + 2.0 * self.lam * a_xi.real) * self.s.entries

    def boundary_residuals(self, st) -> tuple[float, float]:
        """(|‖st-s‖²-eps|, |Re(s^H st)-(n-eps/2)|) for the Theorem-1 boundary check."""
        a = self._correlation(st)
        ball = abs(float(np.sum(np.abs(_entries(st) - self.s.entries) ** 2)) - self.epsilon)
        return ball, abs(a.real - self._target)


class SequenceObjective(_ManifoldObjective):
    """Clutter-to-coupling ratio for a fixed worst-case steering.

    steering=None selects the nominal (zero steering error) numerator n^2,
    used by the non-robust baseline and by the eps=0 reduction.
    """

    def __init__(self, scene: ClutterScene, steering: UnitModulusSequence | None):
        if steering is not None and steering.n != scene.n:
            raise ValueError(f"steering length {steering.n} != scene n={scene.n}")
        self.scene = scene
        self.steering = steering
        self.n = scene.n
        self._bank = ClutterBank(scene)
        self._guard = NEAR_ORTHOGONAL_RTOL * scene.n
        self._cache: tuple | None = None

    # Per-point quantities are reused across the many Hessian-vector
    # products of one trust-region iteration; the single-slot cache swap
    # is atomic under the GIL, so a concurrent race only recomputes.
    def _state(self, point) -> dict:
        cached = self._cache
        if cached is not None and cached[0] is point:
            return cached[1]
        z = _entries(point)
        psi_s = self._bank.apply(z)
        psih_s = self._bank.apply_adjoint(z)
        q = psi_s @ np.conj(z)
        state = {
            "z": z,
            "psi_s": psi_s,
            "psih_s": psih_s,
            "q": q,
            "u": float(np.sum(np.abs(q) ** 2)),
            "g1": (np.conj(q)[:, None] * psi_s + q[:, None] * psih_s).sum(axis=0),
        }
        if self.steering is None:
            state["gamma"] = float(self.n) ** 2
        else:
            b = complex(np.vdot(self.steering.entries, z))  # st^H s
            if abs(b) < self._guard:
                raise NearOrthogonalSteeringError(
                    f"|s^H st| = {abs(b):.3e} below guard {self._guard:.3e}"
                )
            state["b"] = b
            state["gamma"] = abs(b) ** 2
        self._cache = (point, state)
        return state

    def cost(self, s) -> float:
        st = self._state(s)
        return st["u"] / st["gamma"]

    def _grad_terms(self, s) -> tuple[np.ndarray, np.ndarray]:
        """Quotient-rule split of the gradient: (clutter term, coupling term)."""
        st = self._state(s)
        clutter = 2.0 * st["g1"] / st["gamma"]
        if self.steering is None:
            return clutter, np.zeros_like(clutter)
        coupling = (2.0 * st["u"] / st["gamma"] ** 2) * st["b"] * self.steering.entries
        return clutter, coupling

    def egrad(self, s) -> np.ndarray:
        clutter, coupling = self._grad_terms(s)
        return clutter - coupling

    def _dgrad_terms(self, s, xi) -> tuple[np.ndarray, np.ndarray]:
        """Directional derivatives of the two gradient terms along xi."""
        st = self._state(s)
        z, q, gamma = st["z"], st["q"], st["gamma"]
        xi_z = _tangent_entries(xi)
        psi_xi = self._bank.apply(xi_z)
        psih_xi = self._bank.apply_adjoint(xi_z)
        dq = st["psi_s"] @ np.conj(xi_z) + psi_xi @ np.conj(z)
        dg1 = (
            np.conj(dq)[:, None] * st["psi_s"]
            + np.conj(q)[:, None] * psi_xi
            + dq[:, None] * st["psih_s"]
            + q[:, None] * psih_xi
        ).sum(axis=0)
        if self.steering is None:
            return 2.0 * dg1 / gamma, np.zeros_like(dg1)
        b = st["b"]
        db = complex(np.vdot(self.steering.entries, xi_z))
        dgamma = 2.0 * np.real(db * np.conj(b))
        du = 2.0 * float(np.real(np.sum(np.conj(q) * dq)))
        d_clutter = 2.0 * dg1 / gamma - 2.0 * st["g1"] * dgamma / gamma**2
        d_coupling = (
            2.0 * (du * b + st["u"] * db) / gamma**2
            - 4.0 * st["u"] * b * dgamma / gamma**3
        ) * self.steering.entries
        return d_clutter, d_coupling

    def ehess_dir(self, s, xi) -> np.ndarray:
        d_clutter, d_coupling = self._dgrad_terms(s, xi)
        return d_clutter - d_coupling
