"""Dense ground truth for small complexes.

Boundary matrices are built as integer arrays, Betti numbers come from exact
integer ranks (Bareiss elimination), and spectra / trace powers come from a
dense symmetric eigendecomposition. None of this is meant to scale; it exists
to check the sparse row construction and the Monte Carlo estimators.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .complexes import Face, SimplicialComplex
from .errors import OracleScaleError
from .laplacian import SpectralParams

MAX_DENSE_ENTRIES = 10**7
MAX_SPECTRUM_FACES = 2000


@dataclass
class BoundaryMatrix:
    k: int
    rows: list[Face]
    cols: list[Face]
    matrix: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass
class SpectrumReport:
    k: int
    d_k: int
    eigenvalues: list[float]
    lambda_max: float
    gap: float | None
    betti_spectral: int
    zero_tol: float

    def to_dict(self) -> dict:
        return asdict(self)


def _check_scale(entries: int, what: str) -> None:
    if entries > MAX_DENSE_ENTRIES:
        raise OracleScaleError(f"{what} needs {entries} dense entries (limit {MAX_DENSE_ENTRIES})")


def build_boundary(cplx: SimplicialComplex, k: int) -> BoundaryMatrix:
    """Dense integer matrix of the k-th boundary map (columns are k-faces).

    ``k = 0`` gives the empty map with zero rows.
    """
    cols = cplx.faces(k)
    if k == 0:
        return BoundaryMatrix(0, [], cols, np.zeros((0, len(cols)), dtype=np.int64))
    rows = cplx.faces(k - 1)
    _check_scale(len(rows) * len(cols), f"boundary map in dimension {k}")
    index = {f: i for i, f in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for c, face in enumerate(cols):
        for pos in range(len(face)):
            mat[index[face[:pos] + face[pos + 1 :]], c] = -1 if pos % 2 else 1
    return BoundaryMatrix(k, rows, cols, mat)


def laplacian_parts(cplx: SimplicialComplex, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Down and up Laplacians ``(B_k^T B_k, B_{k+1} B_{k+1}^T)`` as int arrays."""
    d_k = cplx.num_faces(k)
    _check_scale(d_k * d_k, f"Laplacian in dimension {k}")
    low = build_boundary(cplx, k).matrix
    high = build_boundary(cplx, k + 1).matrix
    if high.shape[1] == 0:
        high = np.zeros((d_k, 0), dtype=np.int64)
    return low.T @ low, high @ high.T


def dense_laplacian(cplx: SimplicialComplex, k: int) -> np.ndarray:
    down, up = laplacian_parts(cplx, k)
    return down + up


def integer_rank(matrix) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = np.array(matrix, dtype=object)
    if a.ndim != 2 or 0 in a.shape:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    n_rows, n_cols = a.shape
    rank = 0
    prev = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        nz = np.flatnonzero(a[rank:, col] != 0)
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        p = a[rank, col]
        if rank + 1 < n_rows:
            lower = a[rank + 1 :, col + 1 :]
            a[rank + 1 :, col + 1 :] = (lower * p - np.outer(a[rank + 1 :, col], a[rank, col + 1 :])) // prev
            a[rank + 1 :, col] = 0
        prev = p
        rank += 1
    return rank


def exact_betti(cplx: SimplicialComplex, k: int) -> int:
    """``d_k - rank(B_k) - rank(B_{k+1})`` in exact integer arithmetic."""
    d_k = cplx.num_faces(k)
    if d_k == 0:
        return 0
    return d_k - integer_rank(build_boundary(cplx, k).matrix) - integer_rank(build_boundary(cplx, k + 1).matrix)


def exact_spectrum(cplx: SimplicialComplex, k: int, zero_tol: float = 1e-9) -> SpectrumReport:
    d_k = cplx.num_faces(k)
    if d_k > MAX_SPECTRUM_FACES:
        raise OracleScaleError(f"{d_k} faces in dimension {k} (limit {MAX_SPECTRUM_FACES})")
    if d_k == 0:
        return SpectrumReport(k, 0, [], 0.0, None, 0, zero_tol)
    evals = np.linalg.eigvalsh(dense_laplacian(cplx, k).astype(float))
    lam_max = float(evals[-1])
    threshold = zero_tol * lam_max if lam_max > 0 else zero_tol
    nonzero = evals[evals > threshold]
    gap = float(nonzero[0]) if nonzero.size else None
    return SpectrumReport(
        k=k,
        d_k=d_k,
        eigenvalues=[float(x) for x in evals],
        lambda_max=lam_max,
        gap=gap,
        betti_spectral=int(np.count_nonzero(evals <= threshold)),
        zero_tol=zero_tol,
    )


def oracle_params(cplx: SimplicialComplex, k: int) -> SpectralParams:
    """Tightest valid parameters: ``lambda_hat = lambda_max``, ``gamma = gap / lambda_max``.

    A zero Laplacian has no scale; ``lambda_hat = 1`` is used (any positive
    value gives ``H = I``).
    """
    spec = exact_spectrum(cplx, k)
    if spec.lambda_max <= 0:
        return SpectralParams(1.0, 1.0)
    gamma = 1.0 if spec.gap is None else min(1.0, spec.gap / spec.lambda_max)
    return SpectralParams(spec.lambda_max, gamma)


def dense_h(cplx: SimplicialComplex, k: int, lambda_hat: float) -> np.ndarray:
    lap = dense_laplacian(cplx, k).astype(float)
    return np.eye(lap.shape[0]) - lap / lambda_hat


def exact_trace_power(cplx: SimplicialComplex, k: int, z: int, lambda_hat: float) -> float:
    """``Tr(H^z) / d_k`` with ``H = I - Laplacian / lambda_hat``."""
    if z < 0:
        raise ValueError("z must be nonnegative")
    d_k = cplx.num_faces(k)
    if d_k > MAX_SPECTRUM_FACES:
        raise OracleScaleError(f"{d_k} faces in dimension {k} (limit {MAX_SPECTRUM_FACES})")
    if d_k == 0:
        return math.nan
    h = dense_h(cplx, k, lambda_hat)
    if z <= 64:
        return float(np.trace(np.linalg.matrix_power(h, z))) / d_k
    evals = np.linalg.eigvalsh(h)
    return float(np.sum(evals**z)) / d_k
