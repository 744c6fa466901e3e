"""Path-integral Monte Carlo estimation of normalized Betti numbers."""

from .chebyshev import (
    BettiEstimate,
    ChebyshevExpansion,
    algorithm2_schedule,
    build_expansion,
    chebyshev_monomial_coeffs,
    estimate_betti,
)
from .complexes import CliqueComplex, Face, GeneralComplex, SimplicialComplex, as_face
from .errors import (
    AbsorbingStateError,
    BettiWalkError,
    BudgetError,
    EmptyDimensionError,
    InputError,
    OracleScaleError,
    ParseError,
)
from .io import parse_input, parse_text
from .laplacian import (
    LaplacianRow,
    PairKind,
    SpectralParams,
    classify_pair,
    entry_sign,
    h_row_distribution,
    laplacian_row,
)
from .oracle import (
    build_boundary,
    exact_betti,
    exact_spectrum,
    exact_trace_power,
    oracle_params,
)
from .walks import TraceEstimate, estimate_trace_power, hoeffding_budget, sample_walk

__version__ = "0.1.0"
