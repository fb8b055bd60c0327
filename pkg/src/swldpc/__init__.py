"""Distributed joint source-channel coding of correlated binary sources."""

from .channels import (
    BinaryAsymmetricChannel,
    CorrelationModel,
    bac_capacity,
    backward_capacity,
    backward_channel,
    binary_entropy,
    bsc,
    invert_binary_entropy,
    joint_distribution,
    joint_entropy,
    posterior_channel,
    transmit,
)
from .errors import (
    ConfigError,
    ConstructionError,
    DecodingFailureError,
    DegenerateChannelError,
    InfeasiblePlanError,
    MalformedStreamError,
    SwldpcError,
    UnsupportedModelError,
)
from .jscc import DecoderSetup, EncodedStream, decode_source, encode_pair, init_beliefs
from .ldpc import (
    BeliefPropagationDecoder,
    ParityCheckMatrix,
    SystematicLdpcCode,
    bp_decode,
    construct_regular,
    read_alist,
    syndrome,
    to_systematic,
    write_alist,
)
from .markov import (
    MarkovNoiseModel,
    Trellis,
    build_trellis,
    entropy_rate,
    forward_backward,
    forward_backward_extrinsic,
    load_markov_model,
    sample_noise,
    save_markov_model,
    two_state_model,
    validate,
)
from .markov_codec import (
    MarkovSetup,
    MarkovStream,
    combine_to_noise_beliefs,
    encode_markov,
    joint_decode,
    update_systematic,
)
from .planner import (
    CodePlan,
    RateTargets,
    check_sw_region,
    eq1_residuals,
    parity_budget,
    ratio_invariance_check,
    repuncture,
    solve_plan,
    sw_plan,
)
from .simulate import (
    SweepConfig,
    SweepRow,
    build_systematic_code,
    export_csv,
    run_markov_sweep,
    run_memoryless_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
