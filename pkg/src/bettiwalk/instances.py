"""Named small complexes and random instance families."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .complexes import CliqueComplex, GeneralComplex, SimplicialComplex


def hollow_triangle() -> GeneralComplex:
    return GeneralComplex(3, [(1, 2), (1, 3), (2, 3)])


def full_triangle() -> GeneralComplex:
    return GeneralComplex(3, [(1, 2, 3)])


def two_hollow_triangles() -> GeneralComplex:
    return GeneralComplex(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])


def complete_graph(n: int) -> CliqueComplex:
    return CliqueComplex(n, combinations(range(1, n + 1), 2))


def path_graph(n: int) -> CliqueComplex:
    return CliqueComplex(n, [(v, v + 1) for v in range(1, n)])


def cycle_graph(n: int) -> CliqueComplex:
    return CliqueComplex(n, [(v, v % n + 1) for v in range(1, n + 1)])


def octahedron() -> CliqueComplex:
    """Clique complex of K_{2,2,2}: a triangulated 2-sphere."""
    antipodal = {(1, 2), (3, 4), (5, 6)}
    return CliqueComplex(6, [e for e in combinations(range(1, 7), 2) if e not in antipodal])


def disjoint_edges(m: int) -> CliqueComplex:
    return CliqueComplex(2 * m, [(2 * i + 1, 2 * i + 2) for i in range(m)])


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> CliqueComplex:
    pairs = list(combinations(range(1, n + 1), 2))
    keep = rng.random(len(pairs)) < p
    return CliqueComplex(n, [e for e, flag in zip(pairs, keep) if flag])


def random_complex(n: int, n_facets: int, max_dim: int, rng: np.random.Generator) -> GeneralComplex:
    """Downward closure of ``n_facets`` random vertex sets of size 2..max_dim+1."""
    facets = []
    for _ in range(n_facets):
        size = int(rng.integers(2, max_dim + 2))
        facets.append(tuple(int(v) for v in rng.choice(np.arange(1, n + 1), size=size, replace=False)))
    return GeneralComplex(n, facets)


def benchmark_set() -> list[tuple[str, SimplicialComplex, int]]:
    """Fixed end-to-end benchmark: (name, complex, k)."""
    return [
        ("hollow_triangle", hollow_triangle(), 1),
        ("full_triangle", full_triangle(), 1),
        ("cycle6", cycle_graph(6), 1),
        ("octahedron", octahedron(), 2),
        ("two_hollow_triangles", two_hollow_triangles(), 1),
    ]
