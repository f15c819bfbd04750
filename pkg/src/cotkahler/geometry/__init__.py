"""Nijenhuis tensor, Levi-Civita connection, curvature and their oracles."""

from .connection import (
    ConnectionCoeffs,
    connection_coeffs,
    frame_connection,
    koszul_oracle,
    literal_q,
    parallel_residuals,
    torsion_residual,
)
from .curvature import (
    CurvatureBlocks,
    RicciBlocks,
    curvature_blocks,
    curvature_full,
    curvature_oracle,
    curvature_oracle_full,
    curvature_symmetry_residual,
    einstein_residual,
    holomorphic_sectional_curvature,
    nabla_K_full,
    nabla_K_residual,
    ricci_blocks,
)
from .forms import dphi_closed_form, dphi_numeric, dphi_residual, phi_coordinates, phi_frame
from .frame import (
    base_curvature_contracted,
    bracket_oracle,
    default_step,
    frame_derivatives,
    horizontal_energy_residual,
    structure_constants,
)
from .nijenhuis import (
    NijenhuisBlocks,
    nijenhuis_closed_form,
    nijenhuis_full_oracle,
    nijenhuis_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
