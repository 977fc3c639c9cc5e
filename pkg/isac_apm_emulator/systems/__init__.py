"""
Signal-processing systems of the emulator.

Systems hold the numerical work (geometry, compilation, synthesis and the
estimation chain) separate from scenario models and file handling.
"""

from .array_geometry import build_split_ula, build_upa, near_field_phases, steering_matrix
from .beamforming import delay_profiles, padp_beamform, pas_correlation, pas_slice, theoretical_pas
from .compiler import compile_adtr, compile_satr, compile_snapshot, quantize_apm
from .near_field_estimator import joint_range_angle_satr
from .peak_detection import detect_peaks, find_peaks_2d
from .range_velocity import range_velocity_map
from .synthesis import synthesize_cfr_adtr, synthesize_cfr_satr

__all__ = [
    "build_upa",
    "build_split_ula",
    "steering_matrix",
    "near_field_phases",
    "compile_adtr",
    "compile_satr",
    "compile_snapshot",
    "quantize_apm",
    "synthesize_cfr_adtr",
    "synthesize_cfr_satr",
    "range_velocity_map",
    "find_peaks_2d",
    "detect_peaks",
    "delay_profiles",
    "padp_beamform",
    "pas_slice",
    "theoretical_pas",
    "pas_correlation",
    "joint_range_angle_satr",
]
