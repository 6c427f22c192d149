"""Deterministic multiple access for tandem collision networks.

Shift-invariant protocol sequences, nested erasure coding across the
relay chain, sender identification and offset discovery from channel
activity, and the associated rate-region computations.
"""

from .coding import (
    CodingError,
    CorruptCodewordError,
    InsufficientDataError,
    NodeCoderState,
    RateInfeasibleError,
    frame_from_line,
    frame_to_line,
    nested_decode,
    nested_encode,
    nested_polynomial,
    rs_decode,
    rs_encode,
)
from .gf import Field, field
from .network import (
    ChannelActivitySignal,
    DiscoveryFailedError,
    ExperimentConfig,
    InconsistentObservationError,
    NetworkError,
    NetworkSpec,
    SimResult,
    SimTrace,
    Source,
    activity_signal,
    discover_offset,
    identify_senders,
    is_bidirectional,
    load_config,
    parse_config,
    relay_sets,
    simulate,
    simulate_subslot,
)
from .rates import (
    AlohaParams,
    Constraint,
    SymmetricRateResult,
    achievable_point,
    aloha_region_point,
    capacity_constraints,
    max_rate2_given_rate1,
    max_symmetric_rate,
    membership_lattice,
    outer_constraints,
    outer_point,
    region_boundary,
)
from .sequences import (
    DutyFactor,
    ProtocolSequence,
    SequenceSet,
    ShiftInvarianceReport,
    construct_sequences,
    expand_sequence,
    expand_set,
    generalized_hamming,
    is_consecutively_3wise_shift_invariant,
    throughput_backward,
    throughput_forward,
    unit_vector,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
