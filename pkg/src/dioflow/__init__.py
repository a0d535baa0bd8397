"""Certified continued fractions, lattice flows, and the Gauss-map section.

The package keeps one invariant everywhere: a computed number is either an
exact rational or a rational interval guaranteed to contain the true value.
Anything that cannot be certified at the working precision raises
PrecisionError rather than returning a guess.
"""

from .cf import (
    ContinuedFraction,
    Convergent,
    PrecisionError,
    RationalInterval,
    contains_pattern,
    convergents,
    evaluate,
    expand_interval,
    expand_rational,
    gauss_map,
    sqrt_enclosure,
    tail_max,
)
from .surd import QuadraticSurd, expand_surd
from .sampler import (
    DigitSample,
    ParryChain,
    build_parry,
    cantor_digits,
    digits_to_interval,
    make_sampler,
    sample_cantor,
    sample_product,
    sample_sft,
    sft_digits,
)
from .lattice import (
    ApproxHit,
    DipRecord,
    FlowPoint,
    LatticeBasis,
    ScanRecord,
    ShortVector,
    SystoleTrace,
    TracePoint,
    cassels_scan,
    dirichlet_min,
    escape_mass,
    exp_enclosure,
    flow_basis,
    littlewood_scan,
    records_to_jsonl,
    shortest_vector,
    systole_below,
    systole_trace,
    trace_to_csv,
    wa_search,
)
from .surface import (
    INFINITY,
    GeodesicState,
    GeodesicTerminated,
    Psl2Element,
    cross_section_class,
    endpoints,
    first_return,
    mobius_act,
    section_start,
    unipotent_start,
    verify_gauss_factor,
)
from .experiments import (
    ConfigError,
    PrecisionBudgetError,
    RUNNERS,
)

__version__ = "0.1.0"
