"""Command-line front end.

Every subcommand produces a :class:`RunReport`; JSON is the canonical
rendering and ``--format text`` is a flattened view of the same data.

Exit codes: 0 success, 1 unexpected error, 2 parse/input error, 3 sample
budget exceeded, 4 instance too large for the exact oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import instances, oracle
from .chebyshev import DEFAULT_FAILURE_PROB, DEFAULT_MAX_BUDGET, estimate_betti
from .checks import validate_complex
from .complexes import SimplicialComplex
from .errors import BudgetError, InputError, OracleScaleError
from .io import parse_input, write_complex
from .laplacian import SpectralParams
from .walks import column_norm_bound, default_workers, estimate_trace_power, hoeffding_budget

MODES = ("estimate", "trace", "exact", "spectrum", "validate", "bench", "gen")
DEFAULT_SEED = 20230601

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_BUDGET, EXIT_SCALE = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    mode: str
    input_path: str | None = None
    k: int | None = None
    epsilon: float = 0.25
    gamma: float | str = "auto"
    lambda_hat: float | str = "auto"
    z: int | None = None
    delta: float = 0.05
    samples: int | None = None
    failure_prob: float = DEFAULT_FAILURE_PROB
    allocation: str = "coefficient"
    seed: int = DEFAULT_SEED
    workers: int = 1
    max_budget: int = DEFAULT_MAX_BUDGET
    format: str = "json"
    # gen only
    family: str = "er"
    n: int = 10
    p: float = 0.5
    facets: int = 8
    max_dim: int = 3
    output: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if not 0 < self.epsilon < 1:
            raise InputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.gamma != "auto" and not 0 < float(self.gamma) <= 1:
            raise InputError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.workers < 1:
            raise InputError("workers must be at least 1")


@dataclass
class RunReport:
    config: dict
    result: dict
    wall_time: float
    samples_used: int = 0
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = []

        def walk(prefix, obj):
            if isinstance(obj, dict):
                for key in sorted(obj):
                    walk(f"{prefix}.{key}" if prefix else key, obj[key])
            elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
                for i, item in enumerate(obj):
                    walk(f"{prefix}[{i}]", item)
            else:
                lines.append(f"{prefix}: {obj}")

        walk("", asdict(self))
        return "\n".join(lines) + "\n"


def _number_or(value, words):
    if isinstance(value, str) and value in words:
        return value
    return float(value)


def resolve_params(cplx: SimplicialComplex, k: int, cfg: RunConfig, notes: list[str]) -> SpectralParams:
    """Turn the ``lambda_hat`` / ``gamma`` settings into concrete numbers."""
    small = cplx.num_faces(k) <= oracle.MAX_SPECTRUM_FACES
    spec = oracle.exact_spectrum(cplx, k) if small and (cfg.lambda_hat == "auto" or cfg.gamma == "auto") else None
    if cfg.lambda_hat == "n" or (cfg.lambda_hat == "auto" and spec is None):
        lam = float(cplx.n)
    elif cfg.lambda_hat == "auto":
        lam = spec.lambda_max
        if lam <= 0:
            notes.append("Laplacian is zero; using lambda_hat = 1")
            lam = 1.0
    else:
        lam = float(cfg.lambda_hat)
    if cfg.gamma == "auto":
        if spec is None:
            raise InputError("gamma = auto needs an oracle-scale instance; pass --gamma")
        gamma = 1.0 if spec.gap is None else min(1.0, spec.gap / lam)
    else:
        gamma = float(cfg.gamma)
    return SpectralParams(lam, gamma)


def _target_k(cplx: SimplicialComplex, cfg: RunConfig) -> int:
    if cfg.k is None:
        raise InputError(f"mode {cfg.mode} needs --k")
    if cplx.num_faces(cfg.k) == 0:
        raise InputError(f"complex has no {cfg.k}-faces")
    return cfg.k


def _estimate(cplx, cfg, notes):
    k = _target_k(cplx, cfg)
    params = resolve_params(cplx, k, cfg, notes)
    est = estimate_betti(
        cplx,
        k,
        params,
        cfg.epsilon,
        np.random.default_rng(cfg.seed),
        failure_prob=cfg.failure_prob,
        allocation=cfg.allocation,
        max_budget=cfg.max_budget,
        workers=cfg.workers,
    )
    result = est.to_dict()
    result.update(k=k, d_k=cplx.num_faces(k), lambda_hat=params.lambda_hat, gamma=params.gamma)
    return result, est.samples_used


def _trace(cplx, cfg, notes):
    k = _target_k(cplx, cfg)
    if cfg.z is None or cfg.z < 0:
        raise InputError("trace mode needs --z >= 0")
    # gamma plays no role in a single trace estimate
    params = resolve_params(cplx, k, replace(cfg, gamma=1.0) if cfg.gamma == "auto" else cfg, notes)
    if cfg.samples is not None:
        budget = cfg.samples
    else:
        bound = column_norm_bound(cplx, k, params)
        budget = hoeffding_budget(bound, cfg.z, cfg.delta, cfg.failure_prob)
        if budget.p > cfg.max_budget:
            raise BudgetError(f"trace estimate needs {budget.p} walks (limit {cfg.max_budget}); increase --delta", "delta")
    est = estimate_trace_power(cplx, k, cfg.z, params, budget, np.random.default_rng(cfg.seed), workers=cfg.workers)
    result = est.to_dict()
    result.update(k=k, d_k=cplx.num_faces(k), lambda_hat=params.lambda_hat, delta=cfg.delta)
    return result, est.sample_count


def _exact(cplx, cfg, notes):
    ks = [cfg.k] if cfg.k is not None else list(range(cplx.dim + 1))
    rows = []
    for k in ks:
        d_k = cplx.num_faces(k)
        betti = oracle.exact_betti(cplx, k)
        rows.append({"k": k, "d_k": d_k, "betti": betti, "normalized": betti / d_k if d_k else None})
    return {"dimensions": rows}, 0


def _spectrum(cplx, cfg, notes):
    k = _target_k(cplx, cfg)
    return oracle.exact_spectrum(cplx, k).to_dict(), 0


def _validate(cplx, cfg, notes):
    ks = [cfg.k] if cfg.k is not None else None
    lam = _number_or(cfg.lambda_hat, ("auto", "n"))
    checks = validate_complex(cplx, ks, lam)
    return {"passed": all(c.passed for c in checks), "checks": [c.to_dict() for c in checks]}, 0


def _bench(cplx, cfg, notes):
    k = _target_k(cplx, cfg)
    t0 = time.perf_counter()
    betti = oracle.exact_betti(cplx, k)
    spec = oracle.exact_spectrum(cplx, k)
    t_oracle = time.perf_counter() - t0
    t0 = time.perf_counter()
    result, used = _estimate(cplx, cfg, notes)
    t_est = time.perf_counter() - t0
    truth = betti / cplx.num_faces(k)
    return {
        "k": k,
        "exact": truth,
        "estimate": result["nu_tilde"],
        "abs_error": abs(result["nu_tilde"] - truth),
        "lambda_max": spec.lambda_max,
        "oracle_seconds": t_oracle,
        "estimator_seconds": t_est,
        "samples_used": used,
    }, used


def _gen(cfg, notes):
    rng = np.random.default_rng(cfg.seed)
    if cfg.family == "er":
        cplx = instances.erdos_renyi(cfg.n, cfg.p, rng)
        params = {"family": "er", "n": cfg.n, "p": cfg.p, "seed": cfg.seed}
    elif cfg.family == "complex":
        cplx = instances.random_complex(cfg.n, cfg.facets, cfg.max_dim, rng)
        params = {"family": "complex", "n": cfg.n, "facets": cfg.facets, "max_dim": cfg.max_dim, "seed": cfg.seed}
    else:
        raise InputError(f"unknown family {cfg.family!r}")
    comment = [" ".join(f"{key}={val}" for key, val in params.items())]
    if cfg.output:
        write_complex(cplx, cfg.output, comment)
    return {"generator": params, "output": cfg.output, "dim": cplx.dim}, 0


_HANDLERS = {
    "estimate": _estimate,
    "trace": _trace,
    "exact": _exact,
    "spectrum": _spectrum,
    "validate": _validate,
    "bench": _bench,
}


def run(cfg: RunConfig) -> RunReport:
    """Execute one configured run and return its report."""
    notes: list[str] = []
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if cfg.mode == "gen":
            result, used = _gen(cfg, notes)
        else:
            if cfg.input_path is None:
                raise InputError(f"mode {cfg.mode} needs an input file")
            cplx = parse_input(cfg.input_path)
            result, used = _HANDLERS[cfg.mode](cplx, cfg, notes)
    notes.extend(str(w.message) for w in caught)
    return RunReport(asdict(cfg), result, time.perf_counter() - start, used, notes)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bettiwalk", description="Monte Carlo estimation of normalized Betti numbers.")
    sub = ap.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode)
        if mode == "gen":
            sp.add_argument("family", choices=["er", "complex"])
            sp.add_argument("output", nargs="?")
            sp.add_argument("--n", type=int, default=10)
            sp.add_argument("--p", type=float, default=0.5, help="edge probability (er)")
            sp.add_argument("--facets", type=int, default=8)
            sp.add_argument("--max-dim", type=int, default=3)
        else:
            sp.add_argument("input_path")
            sp.add_argument("--k", type=int)
            sp.add_argument("--epsilon", type=float, default=0.25)
            sp.add_argument("--gamma", default="auto")
            sp.add_argument("--lambda-hat", default="auto", help='"auto", "n", or a number')
            sp.add_argument("--z", type=int)
            sp.add_argument("--delta", type=float, default=0.05, help="trace precision")
            sp.add_argument("--samples", type=int, help="fixed walk count for trace mode")
            sp.add_argument("--failure-prob", type=float, default=DEFAULT_FAILURE_PROB)
            sp.add_argument("--allocation", choices=["coefficient", "uniform"], default="coefficient")
            sp.add_argument("--workers", type=int, default=None)
            sp.add_argument("--max-budget", type=int, default=DEFAULT_MAX_BUDGET)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--format", choices=["json", "text"], default="json")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = {key: val for key, val in vars(ns).items() if val is not None}
    if "workers" not in opts and ns.mode != "gen":
        opts["workers"] = default_workers()
    for key in ("gamma", "lambda_hat"):
        if key in opts:
            opts[key] = _number_or(opts[key], ("auto", "n") if key == "lambda_hat" else ("auto",))
    return RunConfig(**opts)


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    try:
        report = run(config_from_args(ns))
    except BudgetError as exc:
        print(json.dumps({"error": "budget", "parameter": exc.parameter, "message": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    except OracleScaleError as exc:
        print(json.dumps({"error": "oracle_scale", "message": str(exc)}), file=sys.stderr)
        return EXIT_SCALE
    except (InputError, OSError, ValueError) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(report.to_json() + "\n" if ns.format == "json" else report.to_text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
