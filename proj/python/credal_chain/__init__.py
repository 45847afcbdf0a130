"""Belief-function and exact credal inference on interval-valued chains."""

from ._core import (
    Chain,
    DomainError,
    Goodness,
    InfeasibleError,
    Interval,
    ParseError,
    SolverError,
    StructuralError,
    belief,
    coherent_closure,
    credal_bounds,
    fix_adhoc,
    fix_uniform,
    goodness,
    is_coherent,
    natural_extension,
    parse_model,
    propagate,
    read_model,
    run_experiment,
    sample_chain,
    sample_intervals,
    sgm,
)

METHODS = ("credal", "sgm-uniform", "sgm-adhoc", "adhoc-mass", "full-mass")
