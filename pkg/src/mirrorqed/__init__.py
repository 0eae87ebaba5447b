"""Single-excitation emission dynamics of a classically driven three-level
emitter coupled to a mirror-terminated 1D waveguide."""

from .bic import (
    BicSolution,
    bic_frequencies,
    characteristic_function,
    design_bic_geometry,
    longtime_amplitude,
)
from .dde_solver import DdeProblem, Trajectory, evaluate_history, integrate_dde
from .dynamics import (
    EmissionRun,
    analytic_reference,
    default_step,
    emitter_rhs,
    simulate_emission,
)
from .field import (
    FieldGrid,
    bic_field_profile,
    field_profile,
    intensity_map,
    photon_norm,
)
from .mode_oracle import (
    FullState,
    ModeGrid,
    ModeRun,
    build_mode_grid,
    integrate_modes,
    reconstruct_field_from_modes,
)
from .model import (
    AmplitudePair,
    CharacteristicScales,
    DressedBasis,
    SystemParams,
    characteristic_scales,
    dressed_basis,
    frame_transform,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudePair",
    "BicSolution",
    "CharacteristicScales",
    "DdeProblem",
    "DressedBasis",
    "EmissionRun",
    "FieldGrid",
    "FullState",
    "ModeGrid",
    "ModeRun",
    "SystemParams",
    "Trajectory",
    "analytic_reference",
    "bic_field_profile",
    "bic_frequencies",
    "build_mode_grid",
    "characteristic_function",
    "characteristic_scales",
    "default_step",
    "design_bic_geometry",
    "dressed_basis",
    "emitter_rhs",
    "evaluate_history",
    "field_profile",
    "frame_transform",
    "integrate_dde",
    "integrate_modes",
    "intensity_map",
    "longtime_amplitude",
    "photon_norm",
    "reconstruct_field_from_modes",
    "simulate_emission",
]
