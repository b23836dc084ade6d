"""Teleportation through entangled and disentangled photon-pair channels.

Exact density-operator simulation on one to three qubits, with ensemble
averaging of the disentangled pair over quantization axes.
"""

from .bell import BellOutcome, UndefinedConditionalError, build_projectors, conditional_state
from .channel import Disentangled, Entangled, PairAxis, crystal_transform, disentangled_pair, epr_pair
from .ensemble import EnsembleSpec, average_pair_state, average_teleport, detection_rate
from .opalg import DimensionError, partial_trace, tensor, validate
from .states import Axis, InputQubit, NormalizationError, Sign, basis_ket, input_density, single_density
from .teleport import CoincidenceQuery, TeleportReport, coincidence, fidelity, run

__version__ = "0.1.0"
