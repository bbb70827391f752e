"""Conventional thermal observables: bond correlators and magnetizations.

These are the quantities an experiment would usually look at; the
sweep machinery can co-report them next to the entanglement measure so
the two kinds of order indicator can be compared point by point.
"""

from dataclasses import dataclass

import numpy as np

from .model import (
    ModelParams,
    SparseSymMatrix,
    joint_bond_operator,
    magnetization_operator,
    pseudospin_bond_operator,
    spin_bond_operator,
)
from .thermal import DensityMatrix


@dataclass(frozen=True)
class ObservableSet:
    """Per-bond correlators and per-site average magnetizations.

    ss_bond[b] = <S_b.S_{b+1}>, tt_bond likewise for pseudospin,
    sstt_bond for the product operator; mag_s = <sum_i S^z_i>/N.
    """

    ss_bond: tuple[float, ...]
    tt_bond: tuple[float, ...]
    sstt_bond: tuple[float, ...]
    mag_s: float
    mag_t: float


def expectation(rho: DensityMatrix, op: SparseSymMatrix) -> float:
    """Tr(rho A) against the stored upper triangle of a symmetric A.

    Diagonal entries contribute once, off-diagonal stored entries twice
    (their mirror images hit the symmetric rho equally).
    """
    if rho.dimension != op.dimension:
        raise ValueError(
            f"dimension mismatch: state is {rho.dimension}, operator is {op.dimension}"
        )
    contributions = op.values * rho.matrix[op.rows, op.cols]
    doubled = np.where(op.rows < op.cols, 2.0, 1.0)
    return float(np.dot(contributions, doubled))


def compute_observables(rho: DensityMatrix, params: ModelParams) -> ObservableSet:
    """All bond correlators and both magnetizations for one state."""
    n = params.n_sites
    ss = tuple(expectation(rho, spin_bond_operator(n, b)) for b in range(n - 1))
    tt = tuple(expectation(rho, pseudospin_bond_operator(n, b)) for b in range(n - 1))
    sstt = tuple(expectation(rho, joint_bond_operator(n, b)) for b in range(n - 1))
    mag_s = expectation(rho, magnetization_operator(n, "spin")) / n
    mag_t = expectation(rho, magnetization_operator(n, "pseudospin")) / n
    return ObservableSet(ss_bond=ss, tt_bond=tt, sstt_bond=sstt, mag_s=mag_s, mag_t=mag_t)
