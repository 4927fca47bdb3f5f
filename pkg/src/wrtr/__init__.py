"""Robust constant-modulus slow-time sequence design via worst-case
Riemannian trust-region optimization (WRTR)."""

from .driver import (
    ScrStats,
    WrtrConfig,
    WrtrResult,
    design_nonrobust,
    hessian_matrix,
    hessian_spectrum,
    monte_carlo_scr,
    optimize,
)
from .manifold import (
    DegenerateRetractionError,
    TangentVector,
    UnitModulusSequence,
    inner,
    norm,
    project_tangent,
    random_point,
    random_tangent,
    retract,
    transport,
    zero_tangent,
)
from .objectives import (
    NearOrthogonalSteeringError,
    SequenceObjective,
    WorstCaseObjective,
    epsilon_from_doppler,
)
from .radar import (
    ClutterBank,
    ClutterOperator,
    ClutterScatterer,
    ClutterScene,
    DegenerateSceneError,
    apply_shift,
    apply_shift_adjoint,
    clutter_energy,
    operator_for,
    operators,
    quadratic_form,
    scnr,
    scr,
    staf,
    steering_vector,
)
from .rcg import RcgConfig, solve_rcg
from .rtr import TcgStop, TrustRegionConfig, TrustRegionTrace, check_termination, solve, tcg
from .scenario import ScenarioConfig, ScenarioError, load_scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "ClutterBank",
    "ClutterOperator",
    "ClutterScatterer",
    "ClutterScene",
    "DegenerateRetractionError",
    "DegenerateSceneError",
    "NearOrthogonalSteeringError",
    "RcgConfig",
    "ScenarioConfig",
    "ScenarioError",
    "ScrStats",
    "SequenceObjective",
    "TangentVector",
    "TcgStop",
    "TrustRegionConfig",
    "TrustRegionTrace",
    "UnitModulusSequence",
    "WorstCaseObjective",
    "WrtrConfig",
    "WrtrResult",
    "apply_shift",
    "apply_shift_adjoint",
    "check_termination",
    "clutter_energy",
    "design_nonrobust",
    "epsilon_from_doppler",
    "hessian_matrix",
    "hessian_spectrum",
    "inner",
    "load_scenario",
    "monte_carlo_scr",
    "norm",
    "operator_for",
    "operators",
    "optimize",
    "parse_scenario",
    "project_tangent",
    "quadratic_form",
    "random_point",
    "random_tangent",
    "retract",
    "scnr",
    "scr",
    "solve",
    "solve_rcg",
    "staf",
    "steering_vector",
    "tcg",
    "transport",
    "zero_tangent",
]
