"""Logarithmic negativity across the spin/pseudospin bipartition.

The two subsystems are the index factors of the global basis
(g = s * 2^N + t), so the partial transpose is a reshape-transpose with
no permutation pass.  The entanglement measure is the natural log of
the trace norm of the partially transposed state; it vanishes exactly
when the partial transpose stays positive semidefinite.
"""

from dataclasses import dataclass
import math

import numpy as np

from .thermal import DensityMatrix

SUBSYSTEMS = ("spin", "pseudospin")

# |ln trace_norm| below this is roundoff; clamp to an exact zero
CLAMP_THRESHOLD = 1e-12


@dataclass(frozen=True)
class NegativityResult:
    """Entanglement measure plus diagnostics of the partial transpose.

    log_negativity = ln(trace_norm) holds exactly, including the
    clamped case where both are reset to 0 and 1.  negativity_sum is
    the raw sum of |negative eigenvalues|; min_pt_eigenvalue the raw
    smallest eigenvalue (both unclamped, for diagnosing near-zeros).
    """

    log_negativity: float
    trace_norm: float
    negativity_sum: float
    min_pt_eigenvalue: float


def _sector_dimension(dimension: int) -> int:
    root = math.isqrt(dimension)
    if root * root != dimension:
        raise ValueError(
            f"dimension {dimension} is not a perfect square; "
            "expected a spin (x) pseudospin product space"
        )
    return root


def partial_transpose(rho: DensityMatrix, subsystem: str) -> np.ndarray:
    """Transpose the indices of one subsystem only.

    With rho[(s,t),(s',t')], the spin transpose maps the element to
    position ((s',t),(s,t')); pseudospin analogously.  Real symmetric
    input gives real symmetric output with the same trace.
    """
    if subsystem not in SUBSYSTEMS:
        raise ValueError(f"unknown subsystem {subsystem!r}; expected one of {SUBSYSTEMS}")
    d = _sector_dimension(rho.dimension)
    blocks = rho.matrix.reshape(d, d, d, d)
    if subsystem == "spin":
        swapped = blocks.transpose(2, 1, 0, 3)
    else:
        swapped = blocks.transpose(0, 3, 2, 1)
    return np.ascontiguousarray(swapped.reshape(rho.dimension, rho.dimension))


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a real symmetric matrix."""
    return float(np.abs(np.linalg.eigvalsh(matrix)).sum())


def logarithmic_negativity(rho: DensityMatrix, subsystem: str = "spin") -> NegativityResult:
    """ln of the trace norm of the partial transpose.

    Roundoff can push the log a hair to either side of zero for
    separable states; raw values in (-1e-12, 1e-12) are clamped to an
    exact 0 (with trace_norm reported as 1 to keep the pair consistent).
    A raw value below -1e-12 indicates a broken input state and raises.
    """
    pt = partial_transpose(rho, subsystem)
    eigenvalues = np.linalg.eigvalsh(pt)
    tn = float(np.abs(eigenvalues).sum())
    raw = math.log(tn)
    if raw < -CLAMP_THRESHOLD:
        raise ValueError(
            f"trace norm {tn!r} below 1: input is not a valid unit-trace state"
        )
    negativity_sum = float(-eigenvalues[eigenvalues < 0].sum())
    min_eigenvalue = float(eigenvalues[0])
    if raw < CLAMP_THRESHOLD:
        return NegativityResult(
            log_negativity=0.0,
            trace_norm=1.0,
            negativity_sum=negativity_sum,
            min_pt_eigenvalue=min_eigenvalue,
        )
    return NegativityResult(
        log_negativity=raw,
        trace_norm=tn,
        negativity_sum=negativity_sum,
        min_pt_eigenvalue=min_eigenvalue,
    )
