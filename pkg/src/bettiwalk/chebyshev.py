"""Chebyshev-accelerated Betti estimation.

``x^r`` on ``[-1, 1]`` is replaced by its degree-``d`` truncated Chebyshev
series, rewritten in the monomial basis so that ``Tr(p(H)) / d_k`` becomes a
linear combination of the normalized traces ``Tr(H^l) / d_k`` for
``l <= d``, each estimated by short walks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .complexes import SimplicialComplex
from .errors import BudgetError, EmptyDimensionError, InputError
from .laplacian import RowCache, SpectralParams
from .walks import (
    SampleBudget,
    TraceEstimate,
    TransitionTable,
    TABLE_LIMIT,
    as_generator,
    column_norm_bound,
    estimate_trace_power,
    hoeffding_budget,
)

DEFAULT_FAILURE_PROB = 0.01
DEFAULT_MAX_BUDGET = 10**8


@lru_cache(maxsize=None)
def _cheb_coeffs(i: int) -> tuple[int, ...]:
    if i == 0:
        return (1,)
    if i == 1:
        return (0, 1)
    prev, cur = _cheb_coeffs(i - 2), _cheb_coeffs(i - 1)
    out = [0] + [2 * c for c in cur]
    for ell, c in enumerate(prev):
        out[ell] -= c
    return tuple(out)


def chebyshev_monomial_coeffs(i: int) -> list[int]:
    """Monomial coefficients ``[c_0, ..., c_i]`` of the Chebyshev polynomial T_i."""
    if i < 0:
        raise InputError(f"Chebyshev index must be nonnegative, got {i}")
    for j in range(i):  # warm the cache bottom-up to keep recursion shallow
        _cheb_coeffs(j)
    return list(_cheb_coeffs(i))


def chebyshev_weight(r: int, i: int) -> Fraction:
    """Coefficient of T_i in the Chebyshev expansion of ``x^r`` (before doubling)."""
    if (r - i) % 2 or i > r:
        return Fraction(0)
    return Fraction(math.comb(r, (r - i) // 2), 2**r)


def approximation_degree(r: int, delta: float) -> int:
    """Smallest degree with truncation error at most ``delta``: ``ceil(sqrt(2 r ln(2/delta)))``."""
    return math.ceil(math.sqrt(2 * r * math.log(2.0 / delta)))


@dataclass(frozen=True)
class ChebyshevExpansion:
    r: int
    d: int
    alpha: tuple[Fraction, ...]
    exact: tuple[Fraction, ...]
    b: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(c) for c in self.exact))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.b):
            acc = acc * x + c
        return acc

    def grid_error(self, points: int = 1001) -> float:
        """Max of ``|p(x) - x^r|`` over an evenly spaced grid of ``[-1, 1]``."""
        x = np.linspace(-1.0, 1.0, points)
        return float(np.max(np.abs(self(x) - x**self.r)))

    def to_dict(self) -> dict:
        return {"r": self.r, "d": self.d, "b": list(self.b)}


def build_expansion(r: int, d: int) -> ChebyshevExpansion:
    if r < 0 or d < 0:
        raise InputError("r and d must be nonnegative")
    if d > r:
        raise InputError(f"degree {d} exceeds the power {r}")
    alpha = tuple(chebyshev_weight(r, i) for i in range(d + 1))
    coeffs = [Fraction(0)] * (d + 1)
    for i, a in enumerate(alpha):
        if a == 0:
            continue
        w = a if i == 0 else 2 * a
        for ell, c in enumerate(chebyshev_monomial_coeffs(i)):
            coeffs[ell] += w * c
    return ChebyshevExpansion(r, d, alpha, tuple(coeffs))


class Schedule(NamedTuple):
    r: int
    d: int
    delta: float


def algorithm2_schedule(gamma: float, epsilon: float) -> Schedule:
    """Power ``r``, degree ``d`` and per-power precision for a target ``epsilon``.

    ``r = ceil(ln(3/eps) / gamma)``, ``d = ceil(sqrt(2/gamma) ln(6/eps))``
    raised if needed to the truncation degree for error ``eps/3`` and capped
    at ``r``; ``delta = eps / (3 (d+1) 2^(3d))``.
    """
    if not 0 < gamma <= 1:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")
    if not 0 < epsilon < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    r = math.ceil(math.log(3.0 / epsilon) / gamma)
    d = math.ceil(math.sqrt(2.0 / gamma) * math.log(6.0 / epsilon))
    d = min(r, max(d, approximation_degree(r, epsilon / 3.0)))
    delta = epsilon / (3 * (d + 1) * 2.0 ** (3 * d))
    return Schedule(r, d, delta)


@dataclass
class BettiEstimate:
    nu_tilde: float
    raw: float
    epsilon: float
    r: int
    d: int
    per_power: list[TraceEstimate]
    coefficients: list[float]
    clamped: bool
    allocation: str
    failure_prob: float

    @property
    def samples_used(self) -> int:
        return sum(t.sample_count for t in self.per_power)

    def to_dict(self) -> dict:
        return {
            "nu_tilde": self.nu_tilde,
            "raw": self.raw,
            "epsilon": self.epsilon,
            "r": self.r,
            "d": self.d,
            "coefficients": self.coefficients,
            "per_power": [t.to_dict() for t in self.per_power],
            "clamped": self.clamped,
            "allocation": self.allocation,
            "failure_prob": self.failure_prob,
            "samples_used": self.samples_used,
        }


def plan_budgets(
    expansion: ChebyshevExpansion,
    epsilon: float,
    bound: float,
    failure_prob: float,
    allocation: str = "coefficient",
) -> dict[int, SampleBudget]:
    """Per-power sample budgets whose combined error is at most ``epsilon / 3``.

    ``uniform`` gives every power the worst-case precision
    ``eps / (3 (d+1) 2^(3d))``. ``coefficient`` spends the same ``eps / 3``
    using the actual coefficients: ``sum |b_l| delta_l = eps / 3`` with
    ``delta_l`` proportional to ``(B^(2l) / |b_l|)^(1/3)``, which minimizes
    the total Hoeffding count. Powers with a zero coefficient and the
    deterministic power 0 are not sampled.
    """
    d = expansion.d
    if allocation == "uniform":
        delta = epsilon / (3 * (d + 1) * 2.0 ** (3 * d))
        phi = failure_prob / (d + 1)
        return {ell: hoeffding_budget(bound, ell, delta, phi) for ell in range(d + 1)}
    if allocation != "coefficient":
        raise InputError(f"unknown allocation {allocation!r}")
    active = [ell for ell in range(1, d + 1) if expansion.exact[ell] != 0]
    if not active:
        return {}
    phi = failure_prob / len(active)
    log_b = math.log(bound) if bound > 0 else 0.0
    # weights in log space: B^(2l/3) overflows for long walks
    logs = {ell: (2 * ell * log_b - math.log(abs(expansion.b[ell]))) / 3 for ell in active}
    top = max(logs.values())
    weights = {ell: math.exp(v - top) for ell, v in logs.items()}
    norm = sum(abs(expansion.b[ell]) * weights[ell] for ell in active)
    return {ell: hoeffding_budget(bound, ell, epsilon / 3 * weights[ell] / norm, phi) for ell in active}


def estimate_betti(
    cplx: SimplicialComplex,
    k: int,
    params: SpectralParams,
    epsilon: float,
    rng,
    failure_prob: float = DEFAULT_FAILURE_PROB,
    allocation: str = "coefficient",
    max_budget: int | None = DEFAULT_MAX_BUDGET,
    workers: int | None = None,
    engine: str = "auto",
) -> BettiEstimate:
    """Estimate ``beta_k / d_k`` to additive ``epsilon`` with probability ``1 - failure_prob``."""
    if cplx.num_faces(k) == 0:
        raise EmptyDimensionError(f"complex has no {k}-faces")
    r, d, _ = algorithm2_schedule(params.gamma, epsilon)
    expansion = build_expansion(r, d)
    cache = RowCache(cplx)
    bound = column_norm_bound(cplx, k, params, cache=cache)
    try:
        budgets = plan_budgets(expansion, epsilon, bound, failure_prob, allocation)
    except BudgetError as exc:
        raise BudgetError(f"schedule (r={r}, d={d}): {exc}; increase epsilon or gamma", parameter="epsilon") from exc
    total = sum(b.p for ell, b in budgets.items() if ell > 0)
    if max_budget is not None and total > max_budget:
        raise BudgetError(
            f"schedule (r={r}, d={d}) needs {total} walks, above the limit {max_budget}; "
            "increase epsilon or gamma, or raise --max-budget",
            parameter="epsilon",
        )
    table = None
    if engine in ("auto", "table") and cplx.num_faces(k) <= TABLE_LIMIT:
        table = TransitionTable.build(cplx, k, params, cache)
    streams = as_generator(rng).spawn(d + 1)
    per_power = []
    raw = 0.0
    for ell in range(d + 1):
        coef = expansion.b[ell]
        if ell == 0:
            if expansion.exact[0] == 0:
                continue
            est = TraceEstimate(0, 1.0, budgets[0].p if 0 in budgets else 1, 0.0, bound)
        elif ell in budgets:
            est = estimate_trace_power(
                cplx, k, ell, params, budgets[ell], streams[ell], workers=workers, engine=engine, cache=cache, table=table
            )
        else:
            continue
        per_power.append(est)
        raw += coef * est.mean
    nu = min(1.0, max(0.0, raw))
    return BettiEstimate(
        nu_tilde=nu,
        raw=raw,
        epsilon=epsilon,
        r=r,
        d=d,
        per_power=per_power,
        coefficients=list(expansion.b),
        clamped=nu != raw,
        allocation=allocation,
        failure_prob=failure_prob,
    )
