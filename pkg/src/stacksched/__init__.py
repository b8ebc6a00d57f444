"""Feasibility scheduling with release times and deadlines, and the
instance constructions connecting it to boolean satisfiability."""

from .auxiliary import (
    AuxInstance,
    AuxOracleResult,
    PendingDeadlines,
    aux_from_json,
    aux_oracle,
    aux_to_json,
    expand_aux,
    validate_aux,
    verify_aux_schedule,
)
from .core import (
    FormatError,
    Instance,
    Schedule,
    Task,
    Violation,
    instance_from_json,
    instance_to_json,
    schedule_from_json,
    schedule_to_json,
    validate_instance,
    verify_schedule,
)
from .gantt import render_gantt
from .harness import (
    PipelineDisagreement,
    PipelineReport,
    SatResult,
    parse_dimacs,
    run_roundtrip,
    sat_bruteforce,
    to_dimacs,
)
from .satgadget import (
    Block,
    CnfFormula,
    FilledInstance,
    build_block_sequence,
    check_offset_property,
    decode_schedule,
    encode_model,
    flatten_filled,
    layout_from_json,
    layout_to_json,
    make_block,
    pending_labels,
    satisfies,
)
from .solve import (
    OracleGuardError,
    SolveResult,
    SolveStats,
    edd_unit_schedule,
    exhaustive_oracle,
    preemptive_edf_feasible,
    solve_decision,
)
from .stacked import (
    StackedInstance,
    embed_aux_schedule,
    extract_aux_schedule,
    normalize_bins,
    reduce_aux_to_instance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
