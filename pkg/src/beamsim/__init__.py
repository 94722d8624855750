"""NLOS mmWave link modeling under optimal analog beamforming.

Sparse multipath channel realizations, power-maximizing beam-pair
selection, closed-form spectral-efficiency bounds, and a beam-count
planner that trades training overhead against beamforming gain.
"""

__version__ = "0.1.0"

from .analytic import (
    NakagamiBoundEval,
    SnrScale,
    SparseModel,
    bernoulli_p,
    opt_power_cdf,
    opt_power_pdf_bound,
    opt_power_pdf_exact,
    se_lower,
    se_sparse_approx,
    se_upper_nakagami,
    se_upper_nakagami_eval,
    se_upper_rayleigh,
    snr_scale,
)
from .beam import (
    BeamGrid,
    BeamSelection,
    beam_grid,
    pair_received_power,
    select_optimal_pair,
)
from .channel import (
    ChannelRealization,
    FadingFamily,
    FadingModel,
    LinkBudget,
    draw_fading_power,
    draw_path_count,
    per_beam_intensity,
    realize_channel,
    rician_k_to_nakagami_m,
)
from .errors import (
    ApproximationInvalidError,
    BeamsimError,
    ConfigError,
    ConvergenceError,
    DegenerateSampleError,
    InfeasibleConfigError,
    NumericalError,
    SeriesCancellationError,
)
from .montecarlo import (
    EmpiricalCdf,
    SEEstimate,
    SimConfig,
    empirical_opt_power_cdf,
    estimate_se,
)
from .rng import child_seed, substream
from .specfun import exp_e1_scaled, exp_integral_e1, ln_gamma, reg_lower_gamma

# The throughput() function itself stays at beamsim.throughput.throughput so
# the submodule name is not shadowed at package level.
from .throughput import (
    ThroughputConfig,
    best_square_b,
    coherence_time,
    coherence_time_models,
    feasible_region,
    optimal_b_closed_form,
    optimal_b_numeric,
    optimal_hpbw,
    register_coherence_time_model,
    throughput_continuous,
    throughput_curve,
    training_overhead,
)

__all__ = [name for name in dir() if not name.startswith("_")]
