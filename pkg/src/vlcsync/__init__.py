"""Synchronization-recovery analysis and length-constrained trellis decoding
for variable-length codes."""

from .channel import (
    Awgn,
    Bsc,
    DeltaSAnalysis,
    bitstream_length_pmf,
    constraint_entropy_mod,
    criteria,
    crossover_from_ebn0,
    entropy_bounds,
    error_count_pmf,
    multi_error_gain,
    transmit,
)
from .codes import (
    CodeTree,
    DeadEnd,
    DuplicateCodeword,
    MissingChild,
    PrefixViolation,
    SourceModel,
    UnknownSymbol,
    VlcCode,
    branch_prior,
    build_code_tree,
    encode,
    excess_rate,
    hard_decode,
    mdl,
)
from .combined import (
    CombinedConfig,
    CostModel,
    choose_parameters,
    combined_decode,
    cost_projection,
    rho_estimate,
    rho_star,
)
from .laurent import LaurentPoly, NotConverged, ZeroMass
from .metrics import levenshtein, nld
from .sync import (
    ErrorStateDiagram,
    NotAbsorbed,
    build_esd,
    error_span_poly,
    gain_polynomial,
    mepl,
    vepl,
)
from .tables import get_code, list_code_ids
from .trellis import (
    BIT_SYMBOL,
    DecodeResult,
    TrellisConfig,
    complexity_ratio,
    exact_bit_symbol_decode,
    viterbi_decode,
)

__version__ = "0.1.0"

__all__ = [
    "Awgn",
    "BIT_SYMBOL",
    "Bsc",
    "CodeTree",
    "CombinedConfig",
    "CostModel",
    "DeadEnd",
    "DecodeResult",
    "DeltaSAnalysis",
    "DuplicateCodeword",
    "ErrorStateDiagram",
    "LaurentPoly",
    "MissingChild",
    "NotAbsorbed",
    "NotConverged",
    "PrefixViolation",
    "SourceModel",
    "TrellisConfig",
    "UnknownSymbol",
    "VlcCode",
    "ZeroMass",
    "bitstream_length_pmf",
    "branch_prior",
    "build_code_tree",
    "build_esd",
    "choose_parameters",
    "combined_decode",
    "complexity_ratio",
    "constraint_entropy_mod",
    "cost_projection",
    "criteria",
    "crossover_from_ebn0",
    "encode",
    "entropy_bounds",
    "error_count_pmf",
    "error_span_poly",
    "exact_bit_symbol_decode",
    "excess_rate",
    "gain_polynomial",
    "get_code",
    "hard_decode",
    "levenshtein",
    "list_code_ids",
    "mdl",
    "mepl",
    "multi_error_gain",
    "nld",
    "rho_estimate",
    "rho_star",
    "transmit",
    "vepl",
    "viterbi_decode",
]
