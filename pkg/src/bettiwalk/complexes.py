"""Simplicial complexes over the ground set ``{1, ..., n}``.

Faces are plain tuples of strictly increasing vertex ids; the increasing order
fixes the orientation used by every boundary and Laplacian computation.
Two access models are provided:

* :class:`GeneralComplex` stores every face explicitly (built from facets).
* :class:`CliqueComplex` stores only a graph and decides membership by
  checking pairwise adjacency.

Both expose the same query surface (``contains``, ``faces``, ``sample_face``,
``up_degree``) so the Laplacian and estimator code never needs to know which
one it is talking to.
"""

from __future__ import annotations

from collections.abc import Iterable
from itertools import combinations

import numpy as np

from .errors import EmptyDimensionError, InputError

Face = tuple[int, ...]


def as_face(vertices: Iterable[int]) -> Face:
    """Return ``vertices`` as a sorted face tuple, rejecting repeats and empties."""
    face = tuple(sorted(int(v) for v in vertices))
    if not face:
        raise InputError("a face must contain at least one vertex")
    if any(a == b for a, b in zip(face, face[1:])):
        raise InputError(f"repeated vertex in {face}")
    return face


class SimplicialComplex:
    """Common behaviour of the two complex representations."""

    n: int

    def __init__(self, n: int):
        if n < 1:
            raise InputError(f"vertex count must be positive, got {n}")
        self.n = int(n)
        self._face_cache: dict[int, list[Face]] = {}

    # subclasses implement these two
    def _contains(self, face: Face) -> bool:
        raise NotImplementedError

    def _enumerate(self, k: int) -> list[Face]:
        raise NotImplementedError

    kind = "abstract"

    def _check_range(self, face: Face) -> None:
        if face[0] < 1 or face[-1] > self.n:
            raise InputError(f"vertex id out of range [1, {self.n}] in {face}")

    def contains(self, vertices: Iterable[int]) -> bool:
        face = as_face(vertices)
        self._check_range(face)
        return self._contains(face)

    def has_face(self, face: Face) -> bool:
        """Membership for a face already in normalized form; no validation."""
        return self._contains(face)

    def faces(self, k: int) -> list[Face]:
        """All k-faces in lexicographic order (cached)."""
        if k < 0:
            raise InputError(f"dimension must be nonnegative, got {k}")
        cached = self._face_cache.get(k)
        if cached is None:
            cached = self._enumerate(k)
            self._face_cache[k] = cached
        return cached

    def num_faces(self, k: int) -> int:
        return len(self.faces(k))

    @property
    def dim(self) -> int:
        """Largest k with at least one k-face (-1 for the empty complex)."""
        k = 0
        while self.num_faces(k) > 0:
            k += 1
        return k - 1

    def sample_face(self, k: int, rng: np.random.Generator) -> Face:
        """Draw a k-face uniformly at random."""
        faces = self.faces(k)
        if not faces:
            raise EmptyDimensionError(f"complex has no {k}-faces")
        return faces[int(rng.integers(len(faces)))]

    def up_vertices(self, face: Face) -> list[int]:
        """Vertices ``v`` outside ``face`` such that ``face + v`` is a face."""
        members = set(face)
        return [
            v
            for v in range(1, self.n + 1)
            if v not in members and self._contains(tuple(sorted(face + (v,))))
        ]

    def up_degree(self, vertices: Iterable[int]) -> int:
        face = as_face(vertices)
        self._check_range(face)
        if not self._contains(face):
            raise InputError(f"{face} is not a face of the complex")
        return len(self.up_vertices(face))

    def max_up_degree(self, k: int) -> int:
        return max((len(self.up_vertices(f)) for f in self.faces(k)), default=0)


class GeneralComplex(SimplicialComplex):
    """Explicit complex given by its facets; all faces are materialized."""

    kind = "complex"

    def __init__(self, n: int, facets: Iterable[Iterable[int]]):
        super().__init__(n)
        faces: set[Face] = set()
        tops: set[Face] = set()
        for raw in facets:
            top = as_face(raw)
            self._check_range(top)
            tops.add(top)
        for top in tops:
            if top in faces:
                continue
            for size in range(1, len(top) + 1):
                faces.update(combinations(top, size))
        self._faces = frozenset(faces)
        by_dim: dict[int, list[Face]] = {}
        for f in faces:
            by_dim.setdefault(len(f) - 1, []).append(f)
        for k, fs in by_dim.items():
            self._face_cache[k] = sorted(fs)
        self.facets = sorted(f for f in tops if not any(f != g and set(f) <= set(g) for g in tops))

    def _contains(self, face: Face) -> bool:
        return face in self._faces

    def _enumerate(self, k: int) -> list[Face]:
        # every populated dimension is filled in __init__
        return []

    def __repr__(self) -> str:
        return f"GeneralComplex(n={self.n}, facets={len(self.facets)})"


class CliqueComplex(SimplicialComplex):
    """Clique complex of a simple graph on ``{1, ..., n}``."""

    kind = "graph"

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        super().__init__(n)
        self._adj: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            self._check_range(tuple(sorted((u, v))))
            self._adj[u].add(v)
            self._adj[v].add(u)
        self._higher = [sorted(w for w in nb if w > v) for v, nb in enumerate(self._adj)]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(1, self.n + 1) for w in self._higher[v]]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def _contains(self, face: Face) -> bool:
        adj = self._adj
        return all(b in adj[a] for a, b in combinations(face, 2))

    def _enumerate(self, k: int) -> list[Face]:
        size = k + 1
        out: list[Face] = []

        # ordered backtracking: extend with larger vertices adjacent to all so far
        def extend(clique: list[int], candidates: list[int]) -> None:
            if len(clique) == size:
                out.append(tuple(clique))
                return
            need = size - len(clique)
            for idx, v in enumerate(candidates):
                if len(candidates) - idx < need:
                    break
                nb = self._adj[v]
                clique.append(v)
                extend(clique, [w for w in candidates[idx + 1 :] if w in nb])
                clique.pop()

        extend([], list(range(1, self.n + 1)))
        return out

    def up_vertices(self, face: Face) -> list[int]:
        common = set.intersection(*(self._adj[v] for v in face))
        return sorted(common)

    def __repr__(self) -> str:
        return f"CliqueComplex(n={self.n}, edges={len(self.edges)})"
