"""Polarization-entangled Stokes/anti-Stokes photon pairs: model, simulation, estimators."""

from ._core import (
    SasbellError,
    __version__,
    bell_weights,
    chsh_from_config,
    config_keys,
    correlation_e,
    density_from_pure,
    generate_sas_state,
    maximize_chsh,
    outcome_probabilities,
    predict_optimal_s,
    preset_names,
    preset_text,
    purity,
    raman_tensor,
    simulate_config,
    tomography_noiseless,
    werner_state,
)

__all__ = [
    "SasbellError",
    "__version__",
    "bell_weights",
    "chsh_from_config",
    "config_keys",
    "correlation_e",
    "density_from_pure",
    "generate_sas_state",
    "maximize_chsh",
    "outcome_probabilities",
    "predict_optimal_s",
    "preset_names",
    "preset_text",
    "purity",
    "raman_tensor",
    "simulate_config",
    "tomography_noiseless",
    "werner_state",
]
