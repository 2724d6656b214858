"""Stabilizer-code toolkit: Pauli algebra, encoders, bare-ancilla syndrome extraction,
lookup decoding and Monte Carlo error-rate estimation."""

from .circuit import CliffordCircuit, DetectorSchedule, Op, adjoint, build_detector, build_encoder, encoder_for
from .code import StabilizerCode, min_distance, standard_form, syndrome_of, validate
from .codefile import CodeDefinition, load, parse
from .experiment import TrialConfig, TrialResult, estimate_rates, run_trial
from .ft import build_lookup_table, check_fault_tolerance, propagated_errors, search_schedules
from .noise import NoiseModel
from .pauli import PauliOperator, format_pauli, parse_pauli
from .tableau import FaultEvent, StabilizerTableau

__version__ = "0.1.0"

__all__ = [
    "CliffordCircuit", "CodeDefinition", "DetectorSchedule", "FaultEvent", "NoiseModel", "Op", "PauliOperator",
    "StabilizerCode", "StabilizerTableau", "TrialConfig", "TrialResult", "adjoint", "build_detector",
    "build_encoder", "build_lookup_table", "check_fault_tolerance", "encoder_for", "estimate_rates",
    "format_pauli", "load", "min_distance", "parse", "parse_pauli", "propagated_errors", "run_trial",
    "search_schedules", "standard_form", "syndrome_of", "validate",
]
