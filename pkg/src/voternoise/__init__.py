"""Voter-model consensus on finite graphs under conservative dynamical noise."""

from .graph import (
    Graph,
    GraphSpecError,
    HittingBoundResult,
    build_graph,
    check_hitting_bound,
    expected_hitting_times,
)
from .noise import (
    NoiseParams,
    SwapPermutation,
    adjacent_swap,
    apply_permutation,
    brownian_noise,
    brownian_noise_halfline,
    interchange_evolve,
    move_entry,
    opinion_exclusion,
    reflect,
)
from .pivotal import (
    OverlapClass,
    PivotalRecord,
    classify_overlap,
    is_pivotal_move,
    is_pivotal_swap,
    pivotal_set,
)
from .voter import (
    ConsensusResult,
    EdgeStream,
    EdgeWindow,
    MovedSequence,
    StepCapExceeded,
    StreamExhausted,
    SwappedSequence,
    TimedSelections,
    coalescence_steps,
    dictator_of_suffix,
    run_to_consensus,
    sample_initial,
    sample_ppp,
    step,
    timed_selections_to_csv,
    trace_dictator,
)

__version__ = "0.1.0"
