"""Training-free image segmentation by phase encoding on a small Fourier basis."""

from phaseseg.core import (
    AngleParams,
    AmplitudeDistribution,
    BASIS_MATRIX,
    PhaseTriple,
    classify_gray_pixel,
    classify_rgb_pixel,
    gray_probabilities,
    iqft_amplitudes,
    parse_theta,
    phase_encode_rgb,
    phase_vector,
    segment_gray,
    segment_rgb,
    theta_from_threshold,
    thresholds_from_theta,
)

__all__ = [
    "AngleParams",
    "AmplitudeDistribution",
    "BASIS_MATRIX",
    "PhaseTriple",
    "classify_gray_pixel",
    "classify_rgb_pixel",
    "gray_probabilities",
    "iqft_amplitudes",
    "parse_theta",
    "phase_encode_rgb",
    "phase_vector",
    "segment_gray",
    "segment_rgb",
    "theta_from_threshold",
    "thresholds_from_theta",
]

__version__ = "0.1.0"
