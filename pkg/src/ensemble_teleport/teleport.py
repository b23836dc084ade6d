"""End-to-end teleportation of Alice's photon through a pair channel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import opalg
from .bell import OUTCOMES, BellOutcome, conditional_state
from .channel import ChannelModel, singlet_ket
from .states import InputQubit, input_density


@dataclass(frozen=True)
class BranchResult:
    probability: float
    bob_raw: np.ndarray
    bob_corrected: np.ndarray
    fidelity: float


@dataclass(frozen=True)
class TeleportReport:
    input: InputQubit
    channel: str
    branches: dict[BellOutcome, BranchResult]

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches.values())

    @property
    def mean_fidelity(self) -> float:
        """Fidelity averaged over outcomes with their probabilities as weights."""
        return sum(b.probability * b.fidelity for b in self.branches.values())


def fidelity(rho: np.ndarray, psi) -> float:
    """``<psi| rho |psi>`` for a pure reference state."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return float(np.real(np.vdot(psi, rho @ psi)))


def three_photon_state(q: InputQubit, pair: np.ndarray) -> np.ndarray:
    return opalg.tensor(input_density(q), pair)


def report_from_state(q: InputQubit, rho123: np.ndarray, channel: str = "custom") -> TeleportReport:
    """Run the Bell measurement on an arbitrary ``rho1 x rho23`` style operator."""
    branches = {}
    for outcome in OUTCOMES:
        prob, bob = conditional_state(rho123, outcome)
        u = outcome.correction
        corrected = opalg.adjoint(u) @ bob @ u
        branches[outcome] = BranchResult(prob, bob, corrected, fidelity(corrected, q.ket))
    return TeleportReport(q, channel, branches)


def run(q: InputQubit, channel: ChannelModel) -> TeleportReport:
    return report_from_state(q, three_photon_state(q, channel.pair_state()), channel.describe())


@dataclass(frozen=True)
class CoincidenceQuery:
    """A normalized three-photon pure state ``|Phi_123>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (8,):
            raise ValueError(f"expected 8 amplitudes, got {amp.shape}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"query state norm {norm} is not 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def product(cls, photon1, pair23) -> "CoincidenceQuery":
        return cls(np.kron(np.asarray(photon1, complex), np.asarray(pair23, complex)))

    @classmethod
    def singlet_coincidence(cls, q: InputQubit) -> "CoincidenceQuery":
        """Alice's input on photon 1 with photons 2 and 3 in the singlet."""
        return cls.product(q.ket, singlet_ket())


def coincidence_with_pair(q: InputQubit, pair: np.ndarray, query: CoincidenceQuery) -> float:
    phi = query.amplitudes
    value = np.vdot(phi, three_photon_state(q, pair) @ phi)
    if abs(value.imag) > 1e-12:
        raise ArithmeticError(f"expectation value has imaginary part {value.imag:.3e}")
    return float(value.real)


def coincidence(q: InputQubit, channel: ChannelModel, query: CoincidenceQuery) -> float:
    """``<Phi_123| rho1 x rho23 |Phi_123>`` for one channel realization."""
    return coincidence_with_pair(q, channel.pair_state(), query)
