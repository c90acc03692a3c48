"""Error-feedback quantizer design, analysis, fitting, and simulation.

The package answers four questions about a quantizer wrapped in an
error-feedback loop driving a known reconstruction filter:

* ``design``   — what is the best noise-shaping filter and the distortion it buys?
* ``rd_curve`` — how does that distortion trade off against word length and
  oversampling, next to the unshaped baseline and an analytic upper bound?
* ``fitting``  — what realizable FIR/IIR filter comes closest to the ideal shape?
* ``simulate`` — does a bit-exact time-domain loop reproduce the predictions?
"""

from .config import (
    ExperimentConfig,
    FitConfig,
    PlantConfig,
    SimConfig,
    config_hash,
    default_config,
    load_config,
    save_config,
    validate_config,
)
from .design import (
    DesignProblem,
    OptimalDesign,
    QuantizerSpec,
    RDRow,
    db,
    design_for_nu,
    design_mse,
    gamma_from_bits,
    geomean_amplitude,
    optimal_shaper,
    predicted_output_mse,
    rd_curve,
    rd_point,
    shaped_noise_gain,
    shaper_norm_sq,
    solve_min_mse,
    upper_bound,
)
from .errors import ConfigError, InfeasibleError, NumericalError, VerificationFailure
from .fitting import (
    FIRFilter,
    FitReport,
    as_discrete_tf,
    complete_report,
    evaluate_fit,
    norm_constrained_fir,
    normalize_head,
    yule_walker_fit,
)
from .simulate import (
    MidRiseQuantizer,
    SignalModel,
    SimulationResult,
    discretize_plant,
    gen_input,
    loop_identity_residual,
    quantize_midrise,
    run_feedback_loop,
    summarize_run,
)
from .spectral import (
    AmplitudeResponse,
    FrequencyGrid,
    amplitude_of_tf,
    band_integral,
    band_mean,
    ct_frequency_map,
    l2_norm_sq,
    log_geometric_mean,
    oversample_response,
)
from .transfer import ContinuousTF, RationalDiscreteTF, frequency_response, impulse_response

__version__ = "0.1.0"

__all__ = [
    "AmplitudeResponse",
    "ConfigError",
    "ContinuousTF",
    "DesignProblem",
    "ExperimentConfig",
    "FIRFilter",
    "FitConfig",
    "FitReport",
    "FrequencyGrid",
    "InfeasibleError",
    "MidRiseQuantizer",
    "NumericalError",
    "OptimalDesign",
    "PlantConfig",
    "QuantizerSpec",
    "RDRow",
    "RationalDiscreteTF",
    "SignalModel",
    "SimConfig",
    "SimulationResult",
    "VerificationFailure",
    "amplitude_of_tf",
    "as_discrete_tf",
    "band_integral",
    "band_mean",
    "complete_report",
    "config_hash",
    "ct_frequency_map",
    "db",
    "default_config",
    "design_for_nu",
    "design_mse",
    "discretize_plant",
    "evaluate_fit",
    "frequency_response",
    "gamma_from_bits",
    "gen_input",
    "geomean_amplitude",
    "impulse_response",
    "l2_norm_sq",
    "load_config",
    "log_geometric_mean",
    "loop_identity_residual",
    "norm_constrained_fir",
    "normalize_head",
    "optimal_shaper",
    "oversample_response",
    "predicted_output_mse",
    "quantize_midrise",
    "rd_curve",
    "rd_point",
    "run_feedback_loop",
    "save_config",
    "shaped_noise_gain",
    "shaper_norm_sq",
    "simulate",
    "solve_min_mse",
    "summarize_run",
    "upper_bound",
    "validate_config",
    "yule_walker_fit",
]
