"""Phase and time operators for the truncated isotropic harmonic oscillator.

The package builds the truncated Cartesian Fock space, splits it into
partial waves, assembles the unitary phase exponential on a doubled
space, and verifies every operator identity it relies on. See the
individual modules for the constructions and :mod:`oscphase.checks` for
the verification suite behind ``oscphase verify``.
"""

from .checks import CheckReport, run_all_checks
from .evolution import (
    HalfPeriodReport,
    PhaseUndefined,
    StateSpec,
    TauFit,
    TrajectoryPoint,
    UnwrapAmbiguity,
    WindingState,
    classify_winding,
    energies,
    half_period_advance_check,
    phase_trajectory,
    propagate,
    state_vector,
    tau_law_check,
    winding_interval,
)
from .fock import (
    AXES,
    HBAR,
    Basis3D,
    CartesianOperators,
    OperatorMatrix,
    OscParams,
    build_basis,
    cartesian_operators,
    commutator,
    hamiltonian,
    identity,
    ladder,
    op_norm_1,
    position,
    momentum,
    angular_momentum,
    l_squared,
    raising,
    residual_on_window,
    shell_projector,
    vector_ladder,
    vector_ladder_squared,
)
from .kernels import backend_name, jit_enabled, trajectory_expectations
from .phase1d import (
    Chain1D,
    NumberBasis1D,
    doubled_shift_1d,
    edge_projectors,
    hamiltonian_1d,
    ladder_1d,
    number_shift_pair,
)
from .phase3d import (
    DoubledBasis,
    PhaseOperatorSet,
    SingularNormalization,
    build_phase_operators,
    doubled_identity,
    dyadic_phase_exponential,
    exchange_operator,
    inverse_shift_residuals,
    normalization_bracket,
    radial_shift_pair,
    reconstruction_residuals,
    sign_operator,
)
from .serialize import export_spherical, load_operator, save_operator
from .spherical import (
    DegenerateSplitFailure,
    SphericalBasis,
    SphericalLabel,
    build_spherical,
    degeneracy_table,
    to_spherical,
)

__version__ = "0.1.0"

__all__ = [
    "AXES",
    "HBAR",
    "Basis3D",
    "CartesianOperators",
    "Chain1D",
    "CheckReport",
    "DegenerateSplitFailure",
    "DoubledBasis",
    "HalfPeriodReport",
    "NumberBasis1D",
    "OperatorMatrix",
    "OscParams",
    "PhaseOperatorSet",
    "PhaseUndefined",
    "SingularNormalization",
    "SphericalBasis",
    "SphericalLabel",
    "StateSpec",
    "TauFit",
    "TrajectoryPoint",
    "UnwrapAmbiguity",
    "WindingState",
    "angular_momentum",
    "backend_name",
    "build_basis",
    "build_phase_operators",
    "build_spherical",
    "cartesian_operators",
    "classify_winding",
    "commutator",
    "degeneracy_table",
    "doubled_identity",
    "doubled_shift_1d",
    "dyadic_phase_exponential",
    "edge_projectors",
    "energies",
    "exchange_operator",
    "export_spherical",
    "half_period_advance_check",
    "hamiltonian",
    "hamiltonian_1d",
    "identity",
    "inverse_shift_residuals",
    "jit_enabled",
    "l_squared",
    "ladder",
    "ladder_1d",
    "load_operator",
    "momentum",
    "normalization_bracket",
    "number_shift_pair",
    "op_norm_1",
    "phase_trajectory",
    "position",
    "propagate",
    "radial_shift_pair",
    "raising",
    "reconstruction_residuals",
    "residual_on_window",
    "run_all_checks",
    "save_operator",
    "shell_projector",
    "sign_operator",
    "state_vector",
    "tau_law_check",
    "to_spherical",
    "trajectory_expectations",
    "vector_ladder",
    "vector_ladder_squared",
    "winding_interval",
]
