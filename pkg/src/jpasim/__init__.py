"""Pumped nonlinear-resonator amplifier toolkit.

Steady-state response, bistability mapping, small-signal gain, large-signal
saturation, and a lab-frame classical cross-check — all driven by one device
description (resonance frequency, junction critical current, quality factor).
"""

from .device import (DeviceParams, DerivedParams, derive,
                     critical_current_for_kerr_q_ratio,
                     device_from_json_dict, device_to_json_dict)
from .errors import (JpasimError, ValidationError, NumericalError,
                     DivergenceError, PoleError, ConvergenceError)
from .steady_state import (PumpDrive, SteadyState, StabilityDiagram, CuspPoint,
                           detuning_term, solve_photon_number, default_branch,
                           pump_amplitude, reflection_s11, stability_diagram,
                           find_cusp)
from .linear_gain import (LinearCoefficients, LinearGain, GainCurve,
                          GainMaximum, linear_coefficients, gain,
                          photon_gain_balance, gain_sweep, max_gain, peak_gain,
                          bandwidth_fwhm, match_pump_power)
from .saturation import (MODELS, CubicCoefficients, SimConfig, EnvelopeSeries,
                         SaturationPoint, SaturationCurve, cubic_coefficients,
                         default_dt, integrate_envelope, extract_tone,
                         gain_at_amplitude, saturation_curve,
                         stiff_pump_marker, compression_point)
from .phase_oracle import (PhaseSimConfig, PhaseResponse, ComparisonRow,
                           ResonanceComparison, pump_current_from_r,
                           ring_down_rate, integrate_phase_eq,
                           compare_resonance_curves)
from .output import write_csv, write_json, read_csv

__all__ = [
    "DeviceParams", "DerivedParams", "derive",
    "critical_current_for_kerr_q_ratio",
    "device_from_json_dict", "device_to_json_dict",
    "JpasimError", "ValidationError", "NumericalError",
    "DivergenceError", "PoleError", "ConvergenceError",
    "PumpDrive", "SteadyState", "StabilityDiagram", "CuspPoint",
    "detuning_term", "solve_photon_number", "default_branch",
    "pump_amplitude", "reflection_s11", "stability_diagram", "find_cusp",
    "LinearCoefficients", "LinearGain", "GainCurve", "GainMaximum",
    "linear_coefficients", "gain", "photon_gain_balance", "gain_sweep",
    "max_gain", "peak_gain", "bandwidth_fwhm", "match_pump_power",
    "MODELS", "CubicCoefficients", "SimConfig", "EnvelopeSeries",
    "SaturationPoint", "SaturationCurve", "cubic_coefficients", "default_dt",
    "integrate_envelope", "extract_tone", "gain_at_amplitude",
    "saturation_curve", "stiff_pump_marker", "compression_point",
    "PhaseSimConfig", "PhaseResponse", "ComparisonRow", "ResonanceComparison",
    "pump_current_from_r", "ring_down_rate", "integrate_phase_eq",
    "compare_resonance_curves",
    "write_csv", "write_json", "read_csv",
]

__version__ = "0.1.0"
