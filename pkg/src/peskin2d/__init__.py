"""Spectral solver and certified-stability toolkit for a closed elastic
interface between two Stokes fluids with viscosity contrast."""

__version__ = "0.1.0"

from .spectral import (
    AliasingError,
    CirclePart,
    CurveDegenerateError,
    FourierCurve,
    LinearSymbol,
    NormWeight,
    analyze,
    apply_multiplier,
    arc_chord_constant,
    circle_curve,
    circle_decompose,
    enclosed_area,
    evaluate,
    fnorm,
    from_Y,
    geometry_diagnostics,
    grid_transform,
    radius_from_constraint,
    synthesize,
    theta_grid,
    to_Y,
    weighted_norm,
)
from .kernels import (
    SingularEvaluation,
    eval_velocity_field,
    log_convolve,
    stokeslet,
    stress_kernel,
)
from .force import (
    ForceDensity,
    PhysicsParams,
    SolverError,
    apply_S,
    elastic_force,
    force_split_residual,
    force_zero_linear,
    s_operator_matrix,
    solve_force,
)
from .evolution import (
    CSV_HEADER,
    SimulationState,
    StepperConfig,
    TrajectoryRecord,
    read_final_state,
    rhs_nonlinear,
    run,
    step,
    velocity_on_curve,
    write_final_state,
)
from .constants import (
    CertificateReport,
    ConstantsReport,
    OutOfRegimeError,
    constants,
    energy_certificate,
    k_threshold,
    margin,
    threshold_lower_bound,
)
from .multipliers import (
    integral_In,
    integral_S1_closed,
    integral_Sn_exact,
    integral_Sn_quadrature,
    m_multiplier,
)

__all__ = [name for name in dir() if not name.startswith("_")]
