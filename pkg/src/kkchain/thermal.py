"""Finite-temperature density matrices from a spectral decomposition.

The canonical state is the Boltzmann-weighted mixture over the full
eigenbasis.  Energies are shifted by the ground energy before
exponentiation so arbitrarily low temperatures never overflow, and
T = 0 is handled explicitly as an equal mixture over the (numerically
detected) degenerate ground manifold.
"""

from dataclasses import dataclass
import math

import numpy as np

from .spectra import SpectralDecomposition

# normalized weights below this are exact zeros; their eigenvectors
# never enter the mixture
WEIGHT_FLOOR = 1e-300


@dataclass(frozen=True)
class DensityMatrix:
    """Thermal state: dense real symmetric matrix with unit trace.

    ``log_partition`` is ln Z in the ground-shifted convention,
    ln sum_j exp(-(E_j - E_0)/T); at T = 0 it is ln(ground degeneracy).
    """

    matrix: np.ndarray
    temperature: float
    log_partition: float

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix))


def _boltzmann_weights(eigenvalues: np.ndarray, temperature: float) -> np.ndarray:
    shifted = eigenvalues - eigenvalues[0]
    weights = np.exp(-shifted / temperature)
    weights /= weights.sum()
    weights[weights < WEIGHT_FLOOR] = 0.0
    return weights


def thermal_density_matrix(
    spec: SpectralDecomposition, temperature: float
) -> DensityMatrix:
    """Canonical ensemble state at the given temperature (k_B = 1).

    T > 0 mixes all eigenstates with ground-shifted Boltzmann weights;
    T = 0 returns the equal mixture over the ground manifold.  Negative
    temperature is an error.
    """
    if temperature < 0:
        raise ValueError(f"temperature must be nonnegative, got {temperature}")
    if temperature == 0.0:
        g = spec.ground_degeneracy
        vectors = spec.eigenvectors[:, :g]
        rho = (vectors @ vectors.T) / g
        log_partition = math.log(g)
    else:
        weights = _boltzmann_weights(spec.eigenvalues, temperature)
        keep = np.nonzero(weights)[0]
        # rho = V W V^T computed as A A^T with A = V sqrt(W); one GEMM
        scaled = spec.eigenvectors[:, keep] * np.sqrt(weights[keep])
        rho = scaled @ scaled.T
        shifted = spec.eigenvalues - spec.eigenvalues[0]
        log_partition = float(np.log(np.exp(-shifted / temperature).sum()))
    rho = (rho + rho.T) / 2.0  # exact symmetry despite rounding
    return DensityMatrix(matrix=rho, temperature=temperature, log_partition=log_partition)


def free_energy(spec: SpectralDecomposition, temperature: float) -> float:
    """Helmholtz free energy F = E_0 - T ln sum_j exp(-(E_j - E_0)/T)."""
    if temperature <= 0:
        raise ValueError(f"free energy needs T > 0, got {temperature}")
    shifted = spec.eigenvalues - spec.eigenvalues[0]
    return spec.ground_energy - temperature * float(
        np.log(np.exp(-shifted / temperature).sum())
    )
