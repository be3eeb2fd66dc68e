"""starcast: star-topology coded broadcast toolkit.

Random linear network coding over GF(2)/GF(256), a degree-of-freedom fluid
model of source-only and peer-assisted dissemination, and a packet-level
Monte Carlo simulator that validates the fluid model with real coded shards.
"""

from starcast.galois import GaloisField, get_field, gf_add, gf_inv, gf_mul
from starcast.rlnc import (
    CodedShard,
    DecoderState,
    InsufficientRankError,
    Payload,
    absorb,
    decode,
    innovation_bound,
    make_source_shard,
    recode,
)
from starcast.fluid import (
    NO_TURBO,
    PEER_TURBO,
    REGIMES,
    FluidParams,
    SurvivalState,
    Trajectory,
    init_state,
    run,
    step_no_turbo,
    step_peer_turbo,
)
from starcast.mc import (
    EnsembleSurvival,
    McConfig,
    NodeState,
    initial_nodes,
    run_ensemble,
    run_round,
    run_trial,
)
from starcast.metrics import (
    QuorumResult,
    diff_surface,
    quorum_table,
    quorum_time,
    sup_norm_deviation,
    transition_width,
)

__version__ = "0.1.0"

__all__ = [
    "GaloisField",
    "get_field",
    "gf_add",
    "gf_mul",
    "gf_inv",
    "Payload",
    "CodedShard",
    "DecoderState",
    "InsufficientRankError",
    "make_source_shard",
    "recode",
    "absorb",
    "decode",
    "innovation_bound",
    "NO_TURBO",
    "PEER_TURBO",
    "REGIMES",
    "FluidParams",
    "SurvivalState",
    "Trajectory",
    "init_state",
    "step_no_turbo",
    "step_peer_turbo",
    "run",
    "McConfig",
    "NodeState",
    "EnsembleSurvival",
    "initial_nodes",
    "run_round",
    "run_trial",
    "run_ensemble",
    "QuorumResult",
    "quorum_time",
    "transition_width",
    "sup_norm_deviation",
    "diff_surface",
    "quorum_table",
    "__version__",
]
