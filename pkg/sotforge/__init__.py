"""sotforge: states over time on finite-dimensional quantum systems.

Usage:
    import numpy as np
    from sotforge import classical_channel, fp, star, Operator
    joint = star(fp(), classical_channel([[0.9, 0.2], [0.1, 0.8]]), Operator(np.diag([0.25, 0.75])))
"""

from sotforge.channels import (
    Channel,
    apply,
    channel_from_jamiolkowski,
    channel_from_kraus,
    choi_matrix,
    classical_channel,
    compose,
    dephasing_channel,
    identity_channel,
    jamiolkowski_state,
    limitation,
    random_channel,
    random_state,
)
from sotforge.errors import (
    ConditioningError,
    DimensionError,
    SingularMarginalError,
    SotforgeError,
    StarConfigurationError,
    UnsupportedStarError,
)
from sotforge.inference import (
    ConditionalState,
    bayes_inverse,
    belief_propagation,
    conditional_state,
    petz_recovery,
    roundtrip_check,
    symmetric_bloom_inverse,
)
from sotforge.stars import (
    StarProduct,
    bloom,
    cfam,
    chain_star,
    extract_rendering,
    extract_theta,
    fp,
    ls,
    make_eta_family,
    make_gfam,
    make_xi_perturbed,
    mean_marginal,
    star,
    star_on_subsystem,
    time_expansion,
)
from sotforge.tensor import (
    DimsSpec,
    EigenSystem,
    Operator,
    embed_block,
    kron,
    partial_trace,
    spectral_decomposition,
    swap_operator,
    vec_index,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "ConditionalState",
    "ConditioningError",
    "DimensionError",
    "DimsSpec",
    "EigenSystem",
    "Operator",
    "SingularMarginalError",
    "SotforgeError",
    "StarConfigurationError",
    "StarProduct",
    "UnsupportedStarError",
    "__version__",
    "apply",
    "bayes_inverse",
    "belief_propagation",
    "bloom",
    "cfam",
    "chain_star",
    "channel_from_jamiolkowski",
    "channel_from_kraus",
    "choi_matrix",
    "classical_channel",
    "compose",
    "conditional_state",
    "dephasing_channel",
    "embed_block",
    "extract_rendering",
    "extract_theta",
    "fp",
    "identity_channel",
    "jamiolkowski_state",
    "kron",
    "limitation",
    "ls",
    "make_eta_family",
    "make_gfam",
    "make_xi_perturbed",
    "mean_marginal",
    "partial_trace",
    "petz_recovery",
    "random_channel",
    "random_state",
    "roundtrip_check",
    "spectral_decomposition",
    "star",
    "star_on_subsystem",
    "swap_operator",
    "symmetric_bloom_inverse",
    "time_expansion",
    "vec_index",
]
