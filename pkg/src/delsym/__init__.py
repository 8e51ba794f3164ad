"""Exact symmetry structure of the binary deletion channel and the binary symmetric channel."""

from .bitstring import (
    MAX_N,
    BitString,
    all_subsequence_counts,
    count_embeddings,
    distinct_outputs_of_length,
    parse,
    render,
)
from .capacity import (
    InputDistribution,
    MIResult,
    blahut_arimoto,
    bsc_capacity_closed_form,
    invariance_gap,
    mutual_information,
    orbit_symmetrize,
)
from .channel import (
    ChannelParam,
    OutputDistribution,
    TransitionMatrix,
    output_distribution,
    output_entropy,
    rank_exact,
    sample_output,
    transition_matrix,
)
from .classify import (
    ConjectureReport,
    Fingerprint,
    entropy_partition,
    fingerprint,
    fingerprint_partition,
    partitions_equal,
    verify_conjecture,
)
from .errors import InputError, UnsupportedCompositionError
from .symmetry import (
    BIT_FLIP,
    FLIP_REVERSAL,
    IDENTITY,
    REVERSAL,
    GroupElement,
    Orbit,
    Partition,
    apply,
    bsc_translation_check,
    commutes_with_channel,
    compose,
    exhaustive_symmetry_search,
    inverse,
    klein_table_check,
    lp_permutations,
    orbit,
    orbit_count_burnside,
    orbit_partition,
    perm_symmetry_search,
    satisfies_local_property,
    step_string,
    step_support_size,
)

__version__ = "0.1.0"
