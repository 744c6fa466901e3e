"""Row access to the combinatorial Laplacian and to ``H = I - Laplacian / lambda_hat``.

Nothing here materializes a matrix. A row is assembled from membership
queries only: the up-degree gives the diagonal, and the faces reachable by
swapping one vertex give the off-diagonal entries. Pairs whose union is a
face cancel (up and down contributions agree), the rest contribute +-1 with
the sign of the inner product of their boundaries.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum

from .complexes import Face, SimplicialComplex, as_face
from .errors import AbsorbingStateError, InputError


@dataclass(frozen=True)
class SpectralParams:
    """Spectral information supplied by the caller.

    ``lambda_hat`` should upper bound the largest Laplacian eigenvalue and
    ``gamma * lambda_hat`` should lower bound the spectral gap. Neither is
    verified here. ``c`` (how loose ``lambda_hat`` is) is recorded only.
    """

    lambda_hat: float
    gamma: float = 1.0
    c: float | None = None

    def __post_init__(self):
        if not self.lambda_hat > 0:
            raise InputError(f"lambda_hat must be positive, got {self.lambda_hat}")
        if not 0 < self.gamma <= 1:
            raise InputError(f"gamma must lie in (0, 1], got {self.gamma}")


class PairKind(str, Enum):
    NOT_NEIGHBORS = "not_neighbors"
    UP_DOWN = "up_down"
    DOWN_UP_ONLY = "down_up_only"


@dataclass(frozen=True)
class SignedEntry:
    neighbor: Face
    value_sign: int
    magnitude: float = 1.0


@dataclass(frozen=True)
class LaplacianRow:
    base: Face
    diagonal: int
    up_degree: int
    off_diagonal: tuple[SignedEntry, ...]
    lambda_hat: float | None = None
    h_column_norm: float | None = None

    @property
    def k(self) -> int:
        return len(self.base) - 1

    def entries(self) -> dict[Face, int]:
        """Nonzero Laplacian entries of this row keyed by column face."""
        out = {self.base: self.diagonal}
        for e in self.off_diagonal:
            out[e.neighbor] = e.value_sign
        return out

    def to_dict(self) -> dict:
        return {
            "face": list(self.base),
            "diagonal": self.diagonal,
            "up_degree": self.up_degree,
            "neighbors": [[list(e.neighbor), e.value_sign] for e in self.off_diagonal],
            "lambda_hat": self.lambda_hat,
            "h_column_norm": self.h_column_norm,
        }


def _require_face(cplx: SimplicialComplex, vertices) -> Face:
    face = as_face(vertices)
    if not cplx.contains(face):
        raise InputError(f"{face} is not a face of the complex")
    return face


def classify_pair(cplx: SimplicialComplex, i, j) -> PairKind:
    """Classify two distinct k-faces by the neighbor relation."""
    i, j = as_face(i), as_face(j)
    if i == j:
        raise InputError("classify_pair needs two distinct faces")
    if len(i) != len(j):
        raise InputError(f"faces {i} and {j} have different dimensions")
    if len(set(i) ^ set(j)) != 2:
        return PairKind.NOT_NEIGHBORS
    if cplx.contains(set(i) | set(j)):
        return PairKind.UP_DOWN
    return PairKind.DOWN_UP_ONLY


def entry_sign(i, j) -> int:
    """Sign of the Laplacian entry between two down-up-only neighbors.

    With ``s`` the shared (k-1)-face, this is ``(-1)**(pos_i + pos_j)`` where
    ``pos_i`` is the 1-based position in ``i`` of the vertex not in ``s``.
    """
    i, j = as_face(i), as_face(j)
    if len(i) != len(j) or len(i) < 2 or len(set(i) ^ set(j)) != 2:
        raise InputError(f"{i} and {j} do not share a codimension-one face")
    (a,) = set(i) - set(j)
    (b,) = set(j) - set(i)
    return -1 if (i.index(a) + j.index(b)) % 2 else 1


def _delta_row(cplx: SimplicialComplex, face: Face) -> tuple[int, int, tuple[SignedEntry, ...]]:
    members = set(face)
    up = set(cplx.up_vertices(face))
    entries = []
    if len(face) == 1:
        # k = 0 with the empty map as lower boundary: graph Laplacian
        for v in sorted(up):
            entries.append(SignedEntry((v,), -1))
        return len(up), len(up), tuple(entries)
    for v in range(1, cplx.n + 1):
        if v in members or v in up:
            continue
        for u in face:
            other = tuple(sorted((members - {u}) | {v}))
            if cplx.has_face(other):
                entries.append(SignedEntry(other, entry_sign(face, other)))
    entries.sort(key=lambda e: e.neighbor)
    return len(up) + len(face), len(up), tuple(entries)


class RowCache:
    """Bounded, thread-safe memo of Laplacian rows for one complex."""

    def __init__(self, cplx: SimplicialComplex, maxsize: int = 65536):
        self.cplx = cplx
        self.maxsize = maxsize
        self._rows: OrderedDict[Face, tuple] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, face: Face) -> tuple[int, int, tuple[SignedEntry, ...]]:
        with self._lock:
            hit = self._rows.get(face)
            if hit is not None:
                self._rows.move_to_end(face)
                return hit
        row = _delta_row(self.cplx, face)
        with self._lock:
            self._rows[face] = row
            if len(self._rows) > self.maxsize:
                self._rows.popitem(last=False)
        return row


def h_norm(diagonal: float, n_off: int, lambda_hat: float) -> float:
    """Absolute column sum of H given a Laplacian row's diagonal and off-diagonal count."""
    return abs(1.0 - diagonal / lambda_hat) + n_off / lambda_hat


def laplacian_row(
    cplx: SimplicialComplex,
    face,
    params: SpectralParams | None = None,
    cache: RowCache | None = None,
) -> LaplacianRow:
    """Sparse row of the k-th Laplacian at ``face`` (k = len(face) - 1)."""
    face = _require_face(cplx, face)
    if cache is not None and cache.cplx is cplx:
        diag, up, off = cache.get(face)
    else:
        diag, up, off = _delta_row(cplx, face)
    if params is None:
        return LaplacianRow(face, diag, up, off)
    lam = params.lambda_hat
    return LaplacianRow(face, diag, up, off, lam, h_norm(diag, len(off), lam))


def h_row_distribution(row: LaplacianRow, params: SpectralParams | None = None) -> list[tuple[Face, float, int]]:
    """Transition distribution out of ``row.base`` as ``(face, probability, sign)``.

    The self-loop comes first, then the off-diagonal neighbors. Signs are the
    signs of the corresponding entries of H.
    """
    lam = params.lambda_hat if params is not None else row.lambda_hat
    if lam is None:
        raise InputError("lambda_hat is required to form H")
    diag_h = 1.0 - row.diagonal / lam
    norm = h_norm(row.diagonal, len(row.off_diagonal), lam)
    if norm == 0.0:
        raise AbsorbingStateError(f"row {row.base} of H is zero")
    out = [(row.base, abs(diag_h) / norm, 1 if diag_h >= 0 else -1)]
    step = (1.0 / lam) / norm
    out.extend((e.neighbor, step, -e.value_sign) for e in row.off_diagonal)
    return out
