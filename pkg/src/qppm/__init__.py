"""Quantum PPM detection: Glauber states, symmetry-based SRM, Helstrom and classical baselines."""

from .constellation import PpmParams, slot_states
from .detect import classical_ppm, helstrom_2ppm, helstrom_binary, ook_baselines, pure_ppm_closed_form
from .result import DetectionResult
from .srm import pc_gram_matrix, pc_gram_operator

__all__ = [
    "DetectionResult",
    "PpmParams",
    "classical_ppm",
    "helstrom_2ppm",
    "helstrom_binary",
    "ook_baselines",
    "pc_gram_matrix",
    "pc_gram_operator",
    "pure_ppm_closed_form",
    "slot_states",
]

__version__ = "0.1.0"
