"""Exact diagonalization of the symmetric spin-pseudospin chain.

Builds small open chains carrying coupled spin and pseudospin doublets,
computes thermal density matrices, and quantifies the entanglement
between the spin and pseudospin subsystems through the logarithmic
negativity.  Includes parameter sweeps and finite-size extrapolation.
"""

__version__ = "0.1.0"

from .model import (
    DEFAULT_MAX_SITES,
    FieldPattern,
    FieldSpec,
    ModelParams,
    SparseSymMatrix,
    build_hamiltonian,
)
from .spectra import SpectralDecomposition, diagonalize
from .thermal import DensityMatrix, free_energy, thermal_density_matrix
from .entanglement import NegativityResult, logarithmic_negativity, partial_transpose

__all__ = [
    "DEFAULT_MAX_SITES",
    "FieldPattern",
    "FieldSpec",
    "ModelParams",
    "SparseSymMatrix",
    "build_hamiltonian",
    "SpectralDecomposition",
    "diagonalize",
    "DensityMatrix",
    "free_energy",
    "thermal_density_matrix",
    "NegativityResult",
    "logarithmic_negativity",
    "partial_transpose",
    "__version__",
]
