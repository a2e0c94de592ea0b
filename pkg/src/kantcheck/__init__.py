"""Numerical verification of Kantorovich-type operator inequality chains.

Hermitian spectral calculus, closed-form extremal constants with a
brute-force maximization oracle, certified random instance generators,
chain verifiers, and a campaign CLI.
"""

from .constants import (
    ChordCoefficients,
    ExtremumResult,
    alpha_ratio,
    beta_generic,
    beta_power_closed,
    chord_coefficients,
    grid_max_1d,
    kantorovich_C,
    kantorovich_C2,
    kantorovich_K,
    kantorovich_K2,
    power_fun,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateExponentError,
    DomainError,
    GenerationError,
    HermiticityError,
    HypothesisError,
    KantCheckError,
    ParameterError,
)
from .generators import (
    CertifiedPair,
    gen_chaotic_pair,
    gen_dominated_pair,
    gen_hermitian_in_window,
    gen_positive_linear_map,
    gen_relative_pair,
    gen_weighted_family,
)
from .hermitian import (
    LoewnerVerdict,
    SpectralDecomposition,
    SpectralWindow,
    apply_scalar_function,
    eig_hermitian,
    loewner_leq,
    matrix_exp,
    matrix_from_json,
    matrix_log,
    matrix_power,
    matrix_to_json,
    spectrum_in_window,
    superlog_bound,
)
from .posmaps import (
    PositiveLinearMap,
    WeightedFamily,
    apply_map,
    f_connection,
    sharp,
    tsallis_entropy,
)
from .campaign import CampaignConfig, CampaignSummary, load_config, run_campaign
from .hunt import hunt_sharpness
from .sweep import sweep_constants
from .verifiers import (
    CHAIN_CATALOG,
    ChainReport,
    Link,
    check_corollary_2_2,
    check_corollary_2_3,
    check_corollary_2_4,
    check_corollary_3_2,
    check_corollary_3_3,
    check_corollary_4_3,
    check_corollary_4_4,
    check_lemma_3_1_forward,
    check_theorem_1_1,
    check_theorem_2_1,
    check_theorem_4_1,
    check_theorem_4_2,
    check_theorem_4_5,
)

__version__ = "0.1.0"
