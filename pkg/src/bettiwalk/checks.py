"""Structural invariants of the Laplacian rows, checked on a concrete complex.

Used by the ``validate`` subcommand and by the acceptance tests. Every check
returns a :class:`CheckResult` with the number of violating rows/entries
instead of raising, so a report can list all failures at once.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import oracle
from .complexes import CliqueComplex, SimplicialComplex
from .laplacian import RowCache, SpectralParams, laplacian_row

DENSE_CHECK_LIMIT = 200


@dataclass
class CheckResult:
    name: str
    k: int
    passed: bool
    checked: int
    violations: int
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _result(name, k, checked, violations, detail=""):
    return CheckResult(name, k, violations == 0, checked, violations, detail)


def row_checks(cplx: SimplicialComplex, k: int, lambda_hat: float | None = None) -> list[CheckResult]:
    """Diagonal formula and bounds, sparsity bounds, symmetry, and (clique) norm bound."""
    n = cplx.n
    faces = cplx.faces(k)
    cache = RowCache(cplx)
    rows = {f: laplacian_row(cplx, f, cache=cache) for f in faces}
    out = []
    if k >= 1:
        bad = sum(r.diagonal != r.up_degree + k + 1 for r in rows.values())
        out.append(_result("diagonal_formula", k, len(rows), bad))
    out.append(_result("diagonal_bound", k, len(rows), sum(r.diagonal > n for r in rows.values())))
    cap = (n - k - 1) * (k + 1)
    out.append(
        _result("general_sparsity", k, len(rows), sum(len(r.off_diagonal) > cap for r in rows.values()), f"cap {cap}")
    )
    asym = 0
    for f, r in rows.items():
        for e in r.off_diagonal:
            if rows[e.neighbor].entries().get(f) != e.value_sign:
                asym += 1
    out.append(_result("row_symmetry", k, sum(len(r.off_diagonal) for r in rows.values()), asym))

    if isinstance(cplx, CliqueComplex) and k >= 1:
        bad = sum(1 + len(r.off_diagonal) > n - k - r.up_degree for r in rows.values())
        out.append(_result("clique_sparsity", k, len(rows), bad))
        # each outside vertex enters at most one down-up-only neighbor
        bad = 0
        for f, r in rows.items():
            entering = [next(iter(set(e.neighbor) - set(f))) for e in r.off_diagonal]
            bad += len(entering) != len(set(entering))
        out.append(_result("clique_single_entry", k, len(rows), bad))
        if lambda_hat is not None and faces:
            params = SpectralParams(lambda_hat)
            worst = max(laplacian_row(cplx, f, params, cache).h_column_norm for f in faces)
            limit = 2 * n / lambda_hat
            out.append(
                _result(
                    "clique_h_norm_bound", k, len(rows), int(worst > limit * (1 + 1e-12)), f"max {worst:.6g} <= {limit:.6g}"
                )
            )
    return out


def dense_checks(cplx: SimplicialComplex, k: int) -> list[CheckResult]:
    """Comparisons against the dense oracle (small instances only)."""
    faces = cplx.faces(k)
    out = []
    low = oracle.build_boundary(cplx, k).matrix
    high = oracle.build_boundary(cplx, k + 1).matrix
    if low.shape[0] and high.shape[1]:
        out.append(_result("chain_identity", k, 1, int(np.any(low @ high))))
    if len(faces) <= DENSE_CHECK_LIMIT:
        dense = oracle.dense_laplacian(cplx, k)
        index = {f: i for i, f in enumerate(faces)}
        sparse = np.zeros_like(dense)
        for i, f in enumerate(faces):
            for g, v in laplacian_row(cplx, f).entries().items():
                sparse[i, index[g]] = v
        out.append(_result("dense_equivalence", k, dense.size, int(np.count_nonzero(sparse != dense))))
    spec = oracle.exact_spectrum(cplx, k)
    if k >= 1 and faces:
        lo = cplx.max_up_degree(k) + k + 1
        ok = lo - 1e-9 <= spec.lambda_max <= cplx.n + 1e-9
        out.append(_result("lambda_max_bounds", k, 1, int(not ok), f"{lo} <= {spec.lambda_max:.9g} <= {cplx.n}"))
    betti = oracle.exact_betti(cplx, k)
    out.append(_result("betti_rank_vs_spectral", k, 1, int(betti != spec.betti_spectral), f"{betti} vs {spec.betti_spectral}"))
    return out


def validate_complex(cplx: SimplicialComplex, ks=None, lambda_hat: str | float = "auto") -> list[CheckResult]:
    """Run every applicable check for each requested dimension (default 1..dim)."""
    if ks is None:
        ks = range(1, cplx.dim + 1)
    results = []
    for k in ks:
        d_k = cplx.num_faces(k)
        small = d_k <= oracle.MAX_SPECTRUM_FACES
        if lambda_hat == "auto":
            lam = oracle.exact_spectrum(cplx, k).lambda_max if small and d_k else float(cplx.n)
        elif lambda_hat == "n":
            lam = float(cplx.n)
        else:
            lam = float(lambda_hat)
        results.extend(row_checks(cplx, k, lam if lam > 0 else None))
        if small:
            results.extend(dense_checks(cplx, k))
    return results
