"""Workbench for choice-sequence constructions over the dyadic interval spread.

The pieces fit together like this: `dyadic` gives exact binary-rational
intervals, `spreads` the admissibility laws and emitters that grow
interval sequences stage by stage, `reals` the three-valued comparisons
between the points those sequences determine, `fleeing` the properties
of the decimal expansion of pi that nobody has yet decided, `drift` the
kernel/counting-number constructions riding on such properties, `logic`
a stage-indexed modal semantics with an exhaustive small-model sweep,
and `derivation` a checker for the sequent scripts that use it.
"""

from .dyadic import (
    Dyadic,
    Interval,
    IntervalRelation,
    admissible_successors,
    interval_relate,
    lambda_interval,
    parse_dyadic,
    parse_interval,
)
from .errors import ResourceLimitError
from .spreads import (
    AdmissibilityError,
    EventTrace,
    Generator,
    Lawlike,
    Process,
    Resolution,
    SpreadLaw,
    centering_rule,
    centering_strategy,
    emit_prefix,
    format_trace,
    never_trace,
    parse_trace,
    proved_at,
    refuted_at,
    rng_spread,
    universal_spread,
)
from .reals import (
    Point,
    Verdict,
    VerdictValue,
    abs_diff_lt,
    apart_at,
    center,
    centered_point,
    coincide_refute,
    continuity_modulus,
    cpf_modulus,
    delay_map,
    identity_map,
    int_point,
    lt_at,
    lt_rational,
    mapped_point,
    negation_map,
    one_point,
    value_point,
    virtual_order_check,
    zero_point,
)
from .fleeing import (
    CriticalSearch,
    DecidableProperty,
    DigitOracle,
    berlin_r,
    cambridge_c,
    critical_number,
    default_oracle,
    find_pattern,
    geometric_family,
    pattern_property,
    run_property,
    veldman_f2,
)
from .drift import (
    BUNDLED_DRIFTS,
    CheckingKind,
    CheckingRun,
    Drift,
    Tag,
    Wing,
    berlin_s,
    bundled_drift,
    checking_sequence,
    flatten_checking,
    rationality_descriptor,
    validate_drift,
    vienna_e,
    vienna_family,
    vienna_run,
)
from .logic import (
    Countermodel,
    StageTree,
    SweepBounds,
    SweepResult,
    forces,
    load_model,
    parse,
    principle_suite,
    show,
    validity_sweep,
)
from .derivation import BUNDLED_SCRIPTS, Rejected, Verified, check_script

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
