"""Non-perturbative two-detector channel simulator.

Two qubit detectors kick a scalar quantum field at single instants; the
exact channel induced on the second detector, the causal structure
connecting the kicks, and the effect of measuring the first detector in
between are all computed in closed form through the field's generator
algebra, with a dense truncated-Fock oracle as an independent check.
"""

from .channel import (
    GammaTensor,
    Monopole,
    QubitChannel,
    alpha_overlap,
    bloch_state,
    channel_from_state,
    excited_state,
    general_channel,
    ground_state,
    plus_state,
    quasifree_channel,
    validate_density,
)
from .config import ExperimentConfig, build_config, load_config, parse_config_text
from .errors import (
    AccuracyError,
    DomainError,
    InternalConsistencyError,
    NullEventError,
    TwoAtomError,
    UnregisteredSmearingError,
)
from .geometry import (
    BoxSpec,
    DetectorSpec,
    PairGeometry,
    box_mode_couplings,
    box_modes,
    causal_propagator,
    classify_pair,
    detector_pair_data,
    smeared_wightman,
)
from .harness import (
    PointResult,
    format_csv,
    initial_density,
    run_measure,
    run_oracle_check,
    run_point,
    run_sweep,
)
from .measurement import (
    UpdatedState,
    averaged_channel,
    conditioned_expectation,
    outcome_probability,
    tilde_channel,
)
from .oracle import (
    OracleReport,
    TruncatedField,
    build_y,
    choi_at_cutoff,
    delta_unitary,
    oracle_channel,
)
from .states import (
    BilinearData,
    ModeCouplings,
    QuasifreeState,
    thermal_from_modes,
    thermal_occupation,
    vacuum_from_modes,
)
from .weyl import (
    COS,
    SIN,
    CombinedSmearing,
    WeylCombination,
    cos_combination,
    expect_word,
    quasifree_expectation,
    reduce_product,
    sin_combination,
    trig_to_weyl,
    weyl_multiply,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BilinearData",
    "BoxSpec",
    "COS",
    "CombinedSmearing",
    "DetectorSpec",
    "DomainError",
    "ExperimentConfig",
    "GammaTensor",
    "InternalConsistencyError",
    "ModeCouplings",
    "Monopole",
    "NullEventError",
    "OracleReport",
    "PairGeometry",
    "PointResult",
    "QuasifreeState",
    "QubitChannel",
    "SIN",
    "TruncatedField",
    "TwoAtomError",
    "UnregisteredSmearingError",
    "UpdatedState",
    "WeylCombination",
    "alpha_overlap",
    "averaged_channel",
    "bloch_state",
    "box_mode_couplings",
    "box_modes",
    "build_config",
    "build_y",
    "causal_propagator",
    "channel_from_state",
    "choi_at_cutoff",
    "classify_pair",
    "conditioned_expectation",
    "cos_combination",
    "delta_unitary",
    "detector_pair_data",
    "excited_state",
    "expect_word",
    "format_csv",
    "general_channel",
    "ground_state",
    "initial_density",
    "load_config",
    "oracle_channel",
    "outcome_probability",
    "parse_config_text",
    "plus_state",
    "quasifree_channel",
    "quasifree_expectation",
    "reduce_product",
    "run_measure",
    "run_oracle_check",
    "run_point",
    "run_sweep",
    "sin_combination",
    "smeared_wightman",
    "thermal_from_modes",
    "thermal_occupation",
    "tilde_channel",
    "trig_to_weyl",
    "validate_density",
    "vacuum_from_modes",
    "weyl_multiply",
]
