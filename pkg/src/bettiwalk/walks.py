"""Path-integral Monte Carlo estimation of ``Tr(H^z) / d_k``.

A walk starts at a uniform k-face and moves along the Markov chain whose
transition probabilities are the normalized absolute entries of the current
column of H. The walk value is the product of the visited column norms and
entry signs, kept only if the walk returns to its start. Its mean is the
normalized trace.

Two engines produce the same distribution of walk values:

``walk``
    one walk at a time, rows discovered on demand (works at any size as long
    as faces can be sampled).
``table``
    every row is computed once into padded arrays and many walkers advance in
    lockstep with numpy. Used automatically when the face count is modest.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .complexes import CliqueComplex, Face, SimplicialComplex
from .errors import BudgetError, EmptyDimensionError, InputError
from .laplacian import RowCache, SpectralParams, h_norm, h_row_distribution, laplacian_row

MAX_COUNT = 2**63 - 1
EXACT_BOUND_LIMIT = 10_000
TABLE_LIMIT = 200_000
CHUNK = 1 << 16
BOUND_SLACK = 1e-9

RandomStream = np.random.Generator


@dataclass
class WalkSample:
    y_value: float
    product_of_norms: float
    sign_parity: int
    path: list[Face] | None = None


@dataclass
class TraceEstimate:
    z: int
    mean: float
    sample_count: int
    empirical_std_error: float
    bound_B: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SampleBudget:
    delta: float
    failure_prob: float
    p: int
    bound_B: float = 1.0
    z: int = 0


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def default_workers() -> int:
    return max(1, int(os.environ.get("BETTIWALK_WORKERS", "1")))


def sample_walk(
    cplx: SimplicialComplex,
    k: int,
    z: int,
    params: SpectralParams,
    rng: RandomStream,
    cache: RowCache | None = None,
    keep_path: bool = False,
) -> WalkSample:
    """Draw one walk of ``z`` steps and return its estimator value."""
    if z < 0:
        raise InputError(f"walk length must be nonnegative, got {z}")
    start = cplx.sample_face(k, rng)
    cur = start
    path = [start] if keep_path else None
    product = 1.0
    sign = 1
    for _ in range(z):
        row = laplacian_row(cplx, cur, params, cache)
        product *= row.h_column_norm
        if product == 0.0:
            # every continuation from an absorbing row carries weight zero
            return WalkSample(0.0, 0.0, sign, path)
        dist = h_row_distribution(row)
        cum = np.cumsum([p for _, p, _ in dist])
        idx = min(int(np.searchsorted(cum, rng.random() * cum[-1], side="right")), len(dist) - 1)
        cur, _, s = dist[idx]
        sign *= s
        if keep_path:
            path.append(cur)
    y = sign * product if cur == start else 0.0
    return WalkSample(y, product, sign, path)


def hoeffding_budget(B: float, z: int, delta: float, failure_prob: float) -> SampleBudget:
    """Sample count so the mean of values in ``[-B^z, B^z]`` is delta-accurate.

    ``p = ceil(2 B^(2z) ln(2/failure_prob) / delta^2)``. ``B = 0`` (H is the
    zero matrix) makes every walk of positive length worth 0, so one sample
    is enough.
    """
    if not B >= 0:
        raise InputError(f"B must be nonnegative, got {B}")
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta}")
    if not 0 < failure_prob < 1:
        raise InputError(f"failure probability must lie in (0, 1), got {failure_prob}")
    if z < 0:
        raise InputError(f"z must be nonnegative, got {z}")
    if B == 0 and z > 0:
        return SampleBudget(delta, failure_prob, 1, 0.0, z)
    if B == 0:
        B = 1.0
    log_p = math.log(2.0) + 2 * z * math.log(B) + math.log(math.log(2.0 / failure_prob)) - 2 * math.log(delta)
    if log_p > math.log(MAX_COUNT):
        raise BudgetError(
            f"Hoeffding budget ~e^{log_p:.1f} samples overflows a 64-bit count; "
            "use a larger delta or the Chebyshev estimator",
            parameter="delta",
        )
    p = math.ceil(2.0 * B ** (2 * z) * math.log(2.0 / failure_prob) / delta**2)
    return SampleBudget(delta, failure_prob, max(1, p), B, z)


def column_norm_bound(
    cplx: SimplicialComplex,
    k: int,
    params: SpectralParams,
    exact_limit: int = EXACT_BOUND_LIMIT,
    cache: RowCache | None = None,
) -> float:
    """Upper bound on ``max_j ||H[:, j]||_1``.

    Exact (row scan) when ``d_k <= exact_limit``, otherwise the clique bound
    ``2n / lambda_hat`` or the general sparsity bound.
    """
    lam = params.lambda_hat
    n = cplx.n
    d_k = cplx.num_faces(k)
    if d_k == 0:
        raise EmptyDimensionError(f"complex has no {k}-faces")
    if d_k <= exact_limit:
        return max(laplacian_row(cplx, f, params, cache).h_column_norm for f in cplx.faces(k))
    diag_term = max(abs(1.0 - (k + 1) / lam), abs(1.0 - n / lam))
    general = diag_term + (k + 1) * (n - k - 1) / lam
    if isinstance(cplx, CliqueComplex) and k >= 1:
        return min(general, 2.0 * n / lam)
    return general


@dataclass
class TransitionTable:
    """All rows of the walk's Markov chain packed into padded arrays."""

    faces: list[Face]
    norms: np.ndarray
    cumprob: np.ndarray
    targets: np.ndarray
    signs: np.ndarray
    index: dict[Face, int] = field(repr=False)

    @classmethod
    def build(cls, cplx: SimplicialComplex, k: int, params: SpectralParams, cache: RowCache | None = None):
        faces = cplx.faces(k)
        if not faces:
            raise EmptyDimensionError(f"complex has no {k}-faces")
        index = {f: i for i, f in enumerate(faces)}
        rows = []
        for i, f in enumerate(faces):
            row = laplacian_row(cplx, f, params, cache)
            if row.h_column_norm == 0.0:
                rows.append((0.0, [(i, 1.0, 1)]))
                continue
            entries = [(index[g], p, s) for g, p, s in h_row_distribution(row) if p > 0.0]
            rows.append((row.h_column_norm, entries))
        width = max(len(e) for _, e in rows)
        d = len(faces)
        norms = np.empty(d)
        cum = np.full((d, width), 2.0)
        targets = np.zeros((d, width), dtype=np.int64)
        signs = np.ones((d, width), dtype=np.int8)
        for i, (norm, entries) in enumerate(rows):
            norms[i] = norm
            m = len(entries)
            targets[i, :m] = [t for t, _, _ in entries]
            signs[i, :m] = [s for _, _, s in entries]
            cum[i, :m] = np.cumsum([p for _, p, _ in entries])
            cum[i, m - 1] = 1.0
        return cls(faces, norms, cum, targets, signs, index)

    def sample_values(self, z: int, m: int, rng: np.random.Generator) -> np.ndarray:
        """Walk values of ``m`` independent walks of length ``z``."""
        start = rng.integers(len(self.faces), size=m)
        cur = start
        weight = np.ones(m)
        for _ in range(z):
            u = rng.random(m)
            col = np.count_nonzero(self.cumprob[cur] <= u[:, None], axis=1)
            weight *= self.norms[cur] * self.signs[cur, col]
            cur = self.targets[cur, col]
        return np.where(cur == start, weight, 0.0)


def _chunk_stats(values: np.ndarray) -> tuple[int, float, float]:
    n = values.size
    mean = float(values.mean())
    m2 = float(np.sum((values - mean) ** 2))
    return n, mean, m2


def _merge(stats: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    # Chan et al. pairwise update, folded left in a fixed order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        if nb == 0:
            continue
        tot = n + nb
        d = mb - mean
        mean += d * nb / tot
        m2 += m2b + d * d * n * nb / tot
        n = tot
    return n, mean, m2


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if w < extra else 0) for w in range(parts)]


def estimate_trace_power(
    cplx: SimplicialComplex,
    k: int,
    z: int,
    params: SpectralParams,
    budget: SampleBudget | int,
    rng,
    workers: int | None = None,
    engine: str = "auto",
    cache: RowCache | None = None,
    table: TransitionTable | None = None,
) -> TraceEstimate:
    """Average ``budget.p`` independent walk values.

    Each worker ``w`` gets its own generator spawned from ``rng``; its share
    of the samples is processed in fixed-size chunks and the partial
    statistics are merged in worker order, so the result depends only on the
    seed, ``p`` and the worker count.
    """
    p = budget if isinstance(budget, int) else budget.p
    if p < 1:
        raise InputError(f"sample count must be positive, got {p}")
    if cplx.num_faces(k) == 0:
        raise EmptyDimensionError(f"complex has no {k}-faces")
    cache = cache if cache is not None else RowCache(cplx)
    if isinstance(budget, SampleBudget) and budget.z == z:
        bound = budget.bound_B
    else:
        bound = column_norm_bound(cplx, k, params, cache=cache)
    if z == 0:
        # every walk value is exactly 1
        return TraceEstimate(0, 1.0, p, 0.0, bound)

    workers = workers or default_workers()
    streams = as_generator(rng).spawn(workers)
    if engine == "auto":
        engine = "table" if (table is not None or cplx.num_faces(k) <= TABLE_LIMIT) else "walk"
    if engine == "table" and table is None:
        table = TransitionTable.build(cplx, k, params, cache)
    elif engine not in ("table", "walk"):
        raise InputError(f"unknown engine {engine!r}")

    limit = bound**z * (1.0 + BOUND_SLACK) + BOUND_SLACK

    def work(w: int) -> list[tuple[int, float, float]]:
        gen = streams[w]
        out = []
        remaining = shares[w]
        while remaining > 0:
            m = min(CHUNK, remaining)
            if engine == "table":
                vals = table.sample_values(z, m, gen)
            else:
                vals = np.array([sample_walk(cplx, k, z, params, gen, cache).y_value for _ in range(m)])
            if np.any(np.abs(vals) > limit):
                raise RuntimeError(f"walk value exceeds the column-norm bound {bound}^{z}")
            out.append(_chunk_stats(vals))
            remaining -= m
        return out

    shares = _split(p, workers)
    if workers == 1:
        parts = [work(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(workers)))
    n, mean, m2 = _merge([s for part in parts for s in part])
    se = math.sqrt(m2 / (n - 1) / n) if n > 1 else 0.0
    return TraceEstimate(z, mean, n, se, bound)
