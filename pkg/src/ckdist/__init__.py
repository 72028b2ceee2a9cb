"""Cantor-Kantorovich distance between labeled Markov chains."""

from .bisimulation import (
    BisimRelation,
    BisimVerdict,
    ClosedSetPair,
    check_bisim,
    enumerate_closed_sets,
    load_relation,
    minimal_epsilon,
)
from .bounds import (
    bisim_impossibility_threshold,
    ck_upper_bound,
    max_safe_horizon,
    tv_bisim_bound,
    tv_from_ck_bound,
)
from .chain import (
    LabeledMarkovChain,
    bias_onegin,
    check_compatible,
    dump_chain,
    load_chain,
    onegin,
    validate,
)
from .distances import (
    CkReport,
    Coupling,
    cantor_distance,
    ck_truncated,
    horizon_for_precision,
    kantorovich_cantor,
    kantorovich_closed_form,
    kantorovich_oracle,
)
from .product import (
    ProductSpec,
    encode_product,
    product_tv_bruteforce,
    tv_via_linear_system,
    tv_via_sk_difference,
)
from .traces import PrefixLevel, extend, initial_level, tv_direct

__version__ = "0.1.0"
