"""Beamforming for constant-envelope RIS-aided wireless power transfer."""

from ._cewpt import (
    AdmmConfig,
    Channel,
    ConfigError,
    DimensionMismatch,
    NonHermitian,
    ScenarioConfig,
    Solution,
    __version__,
    algorithm_comparison,
    estimate_qmm,
    fairness_sweep,
    make_ideal,
    make_scenario,
    project_codebook,
    prop2_bound,
    qos_halfspace_project,
    quantization_sweep,
    scaling_law_sweep,
    solve_diag_sdp,
    solve_spm_sca,
    solve_spm_sdr,
    solve_spmc,
    sum_power,
    wishart_lambda_check,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
