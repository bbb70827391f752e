"""Full eigendecomposition of chain Hamiltonians, with validation and
an optional on-disk cache.

The downstream thermal machinery needs every eigenpair (the Boltzmann
sum runs over all states), so this module always performs a dense
symmetric eigensolve rather than an iterative partial one.
"""

from dataclasses import dataclass, asdict
import hashlib
import json
import os
import struct
import tempfile

import numpy as np
import scipy.linalg

from .model import ModelParams, SparseSymMatrix

CACHE_MAGIC = b"KKED"
CACHE_FORMAT_VERSION = 1

DEFAULT_MAX_DIMENSION = 4**7

# orthonormality and residual bounds from the type contract
_ORTHO_TOL = 1e-10
_RESIDUAL_SCALE = 1e-9


class DiagonalizationError(RuntimeError):
    """Eigensolver failure, annotated with problem diagnostics."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a real
    symmetric matrix; column i of ``eigenvectors`` belongs to
    ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        vec = np.asarray(self.eigenvectors, dtype=np.float64)
        if ev.ndim != 1 or vec.ndim != 2 or vec.shape != (ev.size, ev.size):
            raise ValueError(
                f"shape mismatch: {ev.size} eigenvalues vs eigenvector matrix {vec.shape}"
            )
        if not np.all(np.isfinite(ev)):
            raise ValueError("eigenvalues contain NaN or Inf")
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "eigenvectors", vec)

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def spectral_range(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    @property
    def degeneracy_tolerance(self) -> float:
        """Energy window within which levels count as degenerate."""
        return 1e-9 * max(1.0, self.spectral_range)

    @property
    def ground_degeneracy(self) -> int:
        gap = self.eigenvalues - self.eigenvalues[0]
        return int(np.count_nonzero(gap <= self.degeneracy_tolerance))


def diagonalize(
    h: SparseSymMatrix, max_dimension: int = DEFAULT_MAX_DIMENSION
) -> SpectralDecomposition:
    """Dense symmetric eigensolve of a sparse symmetric input.

    Densifies internally, calls LAPACK through scipy, then validates
    orthonormality of the eigenbasis and the residual ``H V - V diag(E)``
    before returning.  Raises ``DiagonalizationError`` with dimension
    diagnostics if LAPACK fails to converge or validation fails.
    """
    if h.dimension > max_dimension:
        raise ValueError(
            f"dimension {h.dimension} exceeds the configured maximum {max_dimension}"
        )
    dense = h.to_dense()
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(dense)
    except scipy.linalg.LinAlgError as exc:
        raise DiagonalizationError(
            f"symmetric eigensolver failed at dimension {h.dimension} "
            f"(nnz={h.nnz}, max |entry|={np.abs(h.values).max() if h.nnz else 0.0:g}): {exc}"
        ) from exc

    gram_error = float(np.abs(eigenvectors.T @ eigenvectors - np.eye(h.dimension)).max())
    if gram_error > _ORTHO_TOL:
        raise DiagonalizationError(
            f"eigenbasis lost orthonormality at dimension {h.dimension}: "
            f"max |V^T V - Id| = {gram_error:.3e}"
        )
    spread = float(eigenvalues[-1] - eigenvalues[0])
    residual = float(np.abs(h.to_csr() @ eigenvectors - eigenvectors * eigenvalues).max())
    if residual > _RESIDUAL_SCALE * max(1.0, spread):
        raise DiagonalizationError(
            f"eigenpair residual too large at dimension {h.dimension}: "
            f"max |HV - VE| = {residual:.3e}, spectral range {spread:.3e}"
        )
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def params_cache_key(params: ModelParams) -> str:
    """Content hash of the physical configuration, stable across runs."""
    payload = asdict(params)
    payload["field_spin"]["pattern"] = params.field_spin.pattern.value
    payload["field_pseudo"]["pattern"] = params.field_pseudo.pattern.value
    payload.pop("max_sites")  # cap is operational, not physical
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def save_decomposition(path: str, decomposition: SpectralDecomposition) -> None:
    """Write the binary cache record atomically.

    Layout: magic "KKED", format version (u32 LE), dimension (u64 LE),
    eigenvalues (dimension f8 LE), eigenvectors (dimension^2 f8 LE in
    row-major order of the matrix whose columns are the eigenvectors).
    """
    d = decomposition.dimension
    header = CACHE_MAGIC + struct.pack("<IQ", CACHE_FORMAT_VERSION, d)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(decomposition.eigenvalues, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(decomposition.eigenvectors, dtype="<f8").tobytes())
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def load_decomposition(path: str) -> SpectralDecomposition:
    """Read a cache record, validating header and structure."""
    with open(path, "rb") as fh:
        blob = fh.read()
    head_len = len(CACHE_MAGIC) + 4 + 8
    if len(blob) < head_len or blob[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise ValueError(f"{path}: not a spectra cache file")
    version, dimension = struct.unpack_from("<IQ", blob, len(CACHE_MAGIC))
    if version != CACHE_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported cache format version {version}")
    expected = head_len + 8 * dimension + 8 * dimension * dimension
    if len(blob) != expected:
        raise ValueError(
            f"{path}: truncated or oversized cache record "
            f"({len(blob)} bytes, expected {expected})"
        )
    eigenvalues = np.frombuffer(blob, dtype="<f8", count=dimension, offset=head_len)
    eigenvectors = np.frombuffer(
        blob, dtype="<f8", count=dimension * dimension, offset=head_len + 8 * dimension
    ).reshape(dimension, dimension)
    # the constructor re-checks finiteness and ordering
    return SpectralDecomposition(
        eigenvalues=eigenvalues.copy(), eigenvectors=eigenvectors.copy()
    )


def cached_diagonalize(
    h: SparseSymMatrix,
    params: ModelParams,
    cache_dir: str | None,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
) -> SpectralDecomposition:
    """diagonalize() with an optional read-through disk cache keyed by
    the content hash of ``params``.  Corrupt cache entries are ignored
    and recomputed."""
    if cache_dir is None:
        return diagonalize(h, max_dimension=max_dimension)
    path = os.path.join(cache_dir, params_cache_key(params) + ".kked")
    if os.path.exists(path):
        try:
            cached = load_decomposition(path)
            if cached.dimension == h.dimension:
                return cached
        except (ValueError, OSError):
            pass
    result = diagonalize(h, max_dimension=max_dimension)
    save_decomposition(path, result)
    return result
