"""Two-user downlink NOMA with power-level selection: simulation and analysis."""

from .ber import (
    UnionBound,
    ber_ua,
    ber_ub,
    bit_error_table,
    equivalent_noise,
    pam_ber_level,
    pep_oracle_mc,
    pep_pair,
    rayleigh_pep,
    ser_sb_at_ua,
)
from .channel import LinkParams, derived_rng, draw_channel, draw_noise, make_rng, propagate
from .constellation import (
    JointConstellation,
    PamConstellation,
    RotatedPowerMatrix,
    SuperConstellation,
    TransmitFrame,
    build_joint_constellation,
    build_pam,
    build_power_matrix,
    build_super_constellation,
    demap_frame,
    map_bits,
)
from .detector import (
    FullDecision,
    JointDecision,
    detect_full,
    detect_joint,
    detect_user_b,
    sic_detect_sa,
)
from .experiments import (
    CurvePoint,
    ExperimentConfig,
    format_csv,
    load_config_file,
    noma_counterpart,
    parse_config_text,
    preset,
    preset_names,
    ps_benchmark,
    run_ber_sweep,
    run_experiment,
    run_min_dist,
    run_rate_sweep,
    validate_config,
)
from .geometry import (
    DistanceReport,
    compare_levels,
    compare_power_matrix_designs,
    da_min,
    joint_dmin,
    pair_table_csv,
)
from .rate import (
    RateEstimate,
    mi_pl,
    mi_sa_given_pl,
    mi_sb_given_pl,
    mi_sb_pl,
    mi_sb_pl_direct,
)

__all__ = [
    "UnionBound", "ber_ua", "ber_ub", "bit_error_table", "equivalent_noise",
    "pam_ber_level", "pep_oracle_mc", "pep_pair", "rayleigh_pep", "ser_sb_at_ua",
    "LinkParams", "derived_rng", "draw_channel", "draw_noise", "make_rng", "propagate",
    "JointConstellation", "PamConstellation", "RotatedPowerMatrix",
    "SuperConstellation", "TransmitFrame", "build_joint_constellation", "build_pam",
    "build_power_matrix", "build_super_constellation", "demap_frame", "map_bits",
    "FullDecision", "JointDecision", "detect_full", "detect_joint", "detect_user_b",
    "sic_detect_sa",
    "CurvePoint", "ExperimentConfig", "format_csv", "load_config_file",
    "noma_counterpart", "parse_config_text", "preset", "preset_names", "ps_benchmark",
    "run_ber_sweep", "run_experiment", "run_min_dist", "run_rate_sweep",
    "validate_config",
    "DistanceReport", "compare_levels", "compare_power_matrix_designs", "da_min",
    "joint_dmin", "pair_table_csv",
    "RateEstimate", "mi_pl", "mi_sa_given_pl", "mi_sb_given_pl", "mi_sb_pl",
    "mi_sb_pl_direct",
]

__version__ = "0.1.0"
