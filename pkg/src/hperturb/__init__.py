"""Exact homological perturbation theory for finite chain complexes."""

from .bpl import PerturbedSdr, perturb_sdr, perturb_sdr_dual_order
from .calculus import NonDgIso
from .complex import ChainComplex, Perturbation, check_maurer_cartan
from .errors import FormatError, HptError, Violation
from .graded import GradedMap, GradedModule
from .homology import homology
from .ring import GF, QQ, ZZ, Ring
from .sdr import Sdr, compose_sdr, tensor_sdr, validate_sdr

__version__ = "0.1.0"

__all__ = [
    "ChainComplex", "FormatError", "GF", "GradedMap", "GradedModule", "HptError",
    "NonDgIso", "Perturbation", "PerturbedSdr", "QQ", "Ring", "Sdr", "Violation", "ZZ",
    "check_maurer_cartan", "compose_sdr", "homology", "perturb_sdr",
    "perturb_sdr_dual_order", "tensor_sdr", "validate_sdr",
]
