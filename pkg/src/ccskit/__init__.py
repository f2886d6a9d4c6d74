"""ccskit: a value-passing CCS workbench.

Parse process-calculus models, expand them into finite labeled transition
systems, decide weak trace equivalence with counterexample extraction, and
check modal mu-calculus formulas.
"""

from .equivalence import (
    Dts, EqVerdict, bounded_traces, determinize, tau_closure, trace_equivalent,
)
from .logic import check, diamond_witness, sat_states
from .parser import SourceError, parse_formula, parse_model, print_formula, print_model
from .semantics import (
    ExploreLimits, Lts, TruncatedLtsError, UnguardedRecursionError,
    build_lts, canonical_key, ground_transitions, to_dot,
)
from .syntax import (
    Label, Model, TAU, eval_bool, free_value_vars, substitute,
)

__version__ = "0.1.0"
