"""Hamiltonian construction for the symmetric spin-pseudospin chain.

Every site of an open chain carries two independent spin-1/2 degrees of
freedom: a spin S and a pseudospin T (orbital-like two-level variable).
The Hamiltonian contains Heisenberg exchange in each subsystem, a
biquadratic coupling between them, and optional longitudinal fields:

    H = J sum_<ij> S_i.S_j  +  I sum_<ij> T_i.T_j
      + K sum_<ij> (S_i.S_j)(T_i.T_j)
      - sum_i h^s_i S^z_i  -  sum_i h^t_i T^z_i

with <ij> running over the N-1 nearest-neighbor bonds of the open chain.

Basis convention: the global index factorizes as  g = s * 2^N + t,
where s encodes the spin z-projections of all sites (site 0 is the most
significant bit, bit value 0 means "up" / +1/2) and t encodes the
pseudospin projections the same way.  All spin operators therefore act
on the most significant index factor and all pseudospin operators on
the least significant one, which makes the spin/pseudospin partial
transpose a plain block transpose downstream.

Writing the dot products as Sz.Sz + (S+S- + S-S+)/2 keeps every matrix
real, so the Hamiltonian is stored as a real symmetric sparse matrix.
"""

from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np
import scipy.sparse as sp

DEFAULT_MAX_SITES = 7

_SZ = sp.csr_matrix(np.array([[0.5, 0.0], [0.0, -0.5]]))
_SPLUS = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_SMINUS = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))
_SX = sp.csr_matrix(np.array([[0.0, 0.5], [0.5, 0.0]]))
_SY = sp.csr_matrix(np.array([[0.0, -0.5j], [0.5j, 0.0]]))
_ID2 = sp.identity(2, format="csr", dtype=np.float64)

_AXIS_MATRICES = {
    "x": _SX,
    "y": _SY,
    "z": _SZ,
    "plus": _SPLUS,
    "minus": _SMINUS,
}

SECTORS = ("spin", "pseudospin")


class FieldPattern(str, Enum):
    UNIFORM = "uniform"
    STAGGERED = "staggered"
    OFF = "off"


@dataclass(frozen=True)
class FieldSpec:
    """Longitudinal field acting on one subsystem.

    ``pattern="off"`` means the field term is absent from the Hamiltonian
    regardless of ``magnitude``; ``staggered`` alternates sign along the
    chain with site 0 carrying +magnitude.
    """

    magnitude: float = 0.0
    pattern: FieldPattern = FieldPattern.OFF

    def __post_init__(self):
        object.__setattr__(self, "pattern", FieldPattern(self.pattern))
        if not math.isfinite(self.magnitude):
            raise ValueError(f"field magnitude must be finite, got {self.magnitude!r}")

    @classmethod
    def off(cls) -> "FieldSpec":
        return cls(0.0, FieldPattern.OFF)


@dataclass(frozen=True)
class ModelParams:
    """Full physical configuration of one chain.

    Energies are dimensionless (k_B = 1); temperatures downstream are in
    the same units as the couplings.
    """

    n_sites: int
    j_spin: float = 0.0
    i_pseudo: float = 0.0
    k_coupling: float = 0.0
    field_spin: FieldSpec = field(default_factory=FieldSpec.off)
    field_pseudo: FieldSpec = field(default_factory=FieldSpec.off)
    max_sites: int = DEFAULT_MAX_SITES

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.max_sites < 1:
            raise ValueError(f"max_sites must be >= 1, got {self.max_sites}")
        if self.n_sites > self.max_sites:
            raise ValueError(
                f"n_sites={self.n_sites} exceeds the hard cap of {self.max_sites} "
                f"(dimension 4^{self.n_sites}); raise max_sites explicitly to override"
            )
        for name in ("j_spin", "i_pseudo", "k_coupling"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")

    @property
    def dimension(self) -> int:
        return 4**self.n_sites


@dataclass(frozen=True)
class SparseSymMatrix:
    """Real symmetric sparse matrix stored as its upper triangle in COO form.

    Only entries with row <= col are kept; the lower triangle is implied
    by symmetry.
    """

    dimension: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        if not (len(self.rows) == len(self.cols) == len(self.values)):
            raise ValueError("rows, cols and values must have equal length")
        if len(self.rows) and np.any(self.rows > self.cols):
            raise ValueError("only upper-triangle entries (row <= col) may be stored")
        if len(self.rows) and (self.rows.min() < 0 or self.cols.max() >= self.dimension):
            raise ValueError("entry indices out of range")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("all stored values must be finite")

    @property
    def nnz(self) -> int:
        return len(self.values)

    @classmethod
    def from_sparse(cls, matrix, dimension: int | None = None) -> "SparseSymMatrix":
        """Wrap a scipy sparse matrix assumed symmetric; stores triu only."""
        m = matrix.tocsr()
        m.sum_duplicates()
        m.eliminate_zeros()
        upper = sp.triu(m, k=0, format="coo")
        dim = dimension if dimension is not None else m.shape[0]
        return cls(
            dimension=dim,
            rows=np.asarray(upper.row, dtype=np.int64),
            cols=np.asarray(upper.col, dtype=np.int64),
            values=np.asarray(upper.data, dtype=np.float64),
        )

    def to_csr(self) -> sp.csr_matrix:
        """Full symmetric matrix in CSR format."""
        upper = sp.coo_matrix(
            (self.values, (self.rows, self.cols)),
            shape=(self.dimension, self.dimension),
        )
        strict = self.rows < self.cols
        lower = sp.coo_matrix(
            (self.values[strict], (self.cols[strict], self.rows[strict])),
            shape=(self.dimension, self.dimension),
        )
        return (upper + lower).tocsr()

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dimension, self.dimension))
        out[self.rows, self.cols] = self.values
        strict = self.rows < self.cols
        out[self.cols[strict], self.rows[strict]] = self.values[strict]
        return out

    def trace(self) -> float:
        diag = self.rows == self.cols
        return float(self.values[diag].sum())


def field_profile(spec: FieldSpec, n_sites: int) -> list[float]:
    """Per-site field values: uniform [m, m, ...], staggered [m, -m, ...],
    off -> zeros (magnitude ignored)."""
    if spec.pattern is FieldPattern.OFF:
        return [0.0] * n_sites
    if spec.pattern is FieldPattern.UNIFORM:
        return [spec.magnitude] * n_sites
    return [spec.magnitude * (-1.0) ** i for i in range(n_sites)]


def _factor_site_operator(n_sites: int, site: int, local: sp.spmatrix) -> sp.csr_matrix:
    """Embed a single-site 2x2 operator into the 2^N-dimensional factor space.

    Site 0 occupies the most significant bit, i.e. the leftmost Kronecker slot.
    """
    out = None
    for k in range(n_sites):
        piece = local if k == site else _ID2
        out = piece if out is None else sp.kron(out, piece, format="csr")
    return out.tocsr()


def _factor_bond_operator(n_sites: int, bond: int) -> sp.csr_matrix:
    """S_i.S_j on bond (i, i+1) inside the 2^N factor space, real form:
    Sz.Sz + (S+S- + S-S+)/2."""
    i, j = bond, bond + 1
    zz = _factor_site_operator(n_sites, i, _SZ) @ _factor_site_operator(n_sites, j, _SZ)
    pm = _factor_site_operator(n_sites, i, _SPLUS) @ _factor_site_operator(n_sites, j, _SMINUS)
    mp = _factor_site_operator(n_sites, i, _SMINUS) @ _factor_site_operator(n_sites, j, _SPLUS)
    return (zz + 0.5 * (pm + mp)).tocsr()


def site_operator(n_sites: int, site: int, axis: str, sector: str) -> sp.csr_matrix:
    """Single-site spin-1/2 operator embedded in the full 4^N space.

    Parameters
    ----------
    n_sites : chain length N.
    site : site index, 0 <= site < n_sites.
    axis : one of "x", "y", "z", "plus", "minus".  S^z has elements
        +-1/2, the ladder operators have unit off-diagonal elements, and
        "y" is the only axis producing a complex matrix.
    sector : "spin" (most significant index factor) or "pseudospin".
    """
    if not 0 <= site < n_sites:
        raise ValueError(f"site {site} out of range for a chain of {n_sites} sites")
    if axis not in _AXIS_MATRICES:
        raise ValueError(f"unknown axis {axis!r}; expected one of {sorted(_AXIS_MATRICES)}")
    if sector not in SECTORS:
        raise ValueError(f"unknown sector {sector!r}; expected one of {SECTORS}")
    factor = _factor_site_operator(n_sites, site, _AXIS_MATRICES[axis])
    identity = sp.identity(2**n_sites, format="csr", dtype=factor.dtype)
    if sector == "spin":
        return sp.kron(factor, identity, format="csr")
    return sp.kron(identity, factor, format="csr")


def build_hamiltonian(params: ModelParams) -> SparseSymMatrix:
    """Assemble the chain Hamiltonian as a real symmetric sparse matrix.

    Bond terms are built inside the 2^N factor space and lifted with
    Kronecker products: the spin part as A (x) Id, the pseudospin part as
    Id (x) A, and the biquadratic coupling as A (x) A, where A is the
    Heisenberg bond operator.  Field terms with a zero per-site value are
    omitted entirely, so pattern="off" contributes nothing.
    """
    n = params.n_sites
    dim_factor = 2**n
    identity = sp.identity(dim_factor, format="csr", dtype=np.float64)
    total = sp.csr_matrix((params.dimension, params.dimension), dtype=np.float64)

    for bond in range(n - 1):
        a = _factor_bond_operator(n, bond)
        if params.j_spin != 0.0:
            total = total + params.j_spin * sp.kron(a, identity, format="csr")
        if params.i_pseudo != 0.0:
            total = total + params.i_pseudo * sp.kron(identity, a, format="csr")
        if params.k_coupling != 0.0:
            total = total + params.k_coupling * sp.kron(a, a, format="csr")

    h_spin = field_profile(params.field_spin, n)
    h_pseudo = field_profile(params.field_pseudo, n)
    for i in range(n):
        z = _factor_site_operator(n, i, _SZ)
        if h_spin[i] != 0.0:
            total = total - h_spin[i] * sp.kron(z, identity, format="csr")
        if h_pseudo[i] != 0.0:
            total = total - h_pseudo[i] * sp.kron(identity, z, format="csr")

    return SparseSymMatrix.from_sparse(total, dimension=params.dimension)


def spin_bond_operator(n_sites: int, bond: int) -> SparseSymMatrix:
    """S_i.S_{i+1} on the given bond, lifted to the full space."""
    _check_bond(n_sites, bond)
    a = _factor_bond_operator(n_sites, bond)
    identity = sp.identity(2**n_sites, format="csr", dtype=np.float64)
    return SparseSymMatrix.from_sparse(sp.kron(a, identity, format="csr"))


def pseudospin_bond_operator(n_sites: int, bond: int) -> SparseSymMatrix:
    """T_i.T_{i+1} on the given bond, lifted to the full space."""
    _check_bond(n_sites, bond)
    a = _factor_bond_operator(n_sites, bond)
    identity = sp.identity(2**n_sites, format="csr", dtype=np.float64)
    return SparseSymMatrix.from_sparse(sp.kron(identity, a, format="csr"))


def joint_bond_operator(n_sites: int, bond: int) -> SparseSymMatrix:
    """(S_i.S_{i+1})(T_i.T_{i+1}) on the given bond."""
    _check_bond(n_sites, bond)
    a = _factor_bond_operator(n_sites, bond)
    return SparseSymMatrix.from_sparse(sp.kron(a, a, format="csr"))


def magnetization_operator(n_sites: int, sector: str) -> SparseSymMatrix:
    """Total z-projection sum_i S^z_i (or T^z) lifted to the full space."""
    if sector not in SECTORS:
        raise ValueError(f"unknown sector {sector!r}; expected one of {SECTORS}")
    factor = sum(_factor_site_operator(n_sites, i, _SZ) for i in range(n_sites))
    identity = sp.identity(2**n_sites, format="csr", dtype=np.float64)
    if sector == "spin":
        lifted = sp.kron(factor, identity, format="csr")
    else:
        lifted = sp.kron(identity, factor, format="csr")
    return SparseSymMatrix.from_sparse(lifted)


def swap_sectors_permutation(n_sites: int) -> np.ndarray:
    """Index permutation exchanging the spin and pseudospin factors.

    Returns perm with perm[s * 2^N + t] = t * 2^N + s; relabelling a
    matrix as M[perm][:, perm] swaps the roles of S and T.
    """
    f = 2**n_sites
    s, t = np.divmod(np.arange(f * f), f)
    return t * f + s


def _check_bond(n_sites: int, bond: int) -> None:
    if not 0 <= bond < n_sites - 1:
        raise ValueError(f"bond {bond} out of range for a chain of {n_sites} sites")
