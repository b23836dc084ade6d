"""Bell-state measurement on photons 1 and 2.

The four projectors are assembled from their Pauli-sum forms::

    A    = 1/4 (II - s.s)             -> |Psi->
    S^x  = 1/4 (II + s.s - 2 XX)      -> |Phi->
    S^y  = 1/4 (II + s.s - 2 YY)      -> |Phi+>
    S^z  = 1/4 (II + s.s - 2 ZZ)      -> |Psi+>

where ``s.s = XX + YY + ZZ``.  Ket outer products are kept alongside purely
as a cross-check.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from . import opalg
from .opalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, tensor


class UndefinedConditionalError(ArithmeticError):
    """A Bell branch has (numerically) zero probability."""


PROBABILITY_FLOOR = 1e-14


class BellOutcome(Enum):
    PSI_MINUS = "PsiMinus"
    PHI_MINUS = "PhiMinus"
    PHI_PLUS = "PhiPlus"
    PSI_PLUS = "PsiPlus"

    @property
    def correction(self) -> np.ndarray:
        """Pauli that conjugates Bob's photon in this branch."""
        return np.array(_CORRECTIONS[self])

    @property
    def correction_name(self) -> str:
        return _CORRECTION_NAMES[self]


_CORRECTIONS = {
    BellOutcome.PSI_MINUS: I2,
    BellOutcome.PHI_MINUS: SIGMA_X,
    BellOutcome.PHI_PLUS: SIGMA_Y,
    BellOutcome.PSI_PLUS: SIGMA_Z,
}
_CORRECTION_NAMES = {
    BellOutcome.PSI_MINUS: "I",
    BellOutcome.PHI_MINUS: "X",
    BellOutcome.PHI_PLUS: "Y",
    BellOutcome.PSI_PLUS: "Z",
}

OUTCOMES = tuple(BellOutcome)


def spin_dot() -> np.ndarray:
    """``sigma^1 . sigma^2`` on two qubits."""
    return sum(tensor(p, p) for p in (SIGMA_X, SIGMA_Y, SIGMA_Z))


def antisymmetric_projector() -> np.ndarray:
    return 0.25 * (np.eye(4) - spin_dot())


def symmetric_projector() -> np.ndarray:
    return 0.25 * (3 * np.eye(4) + spin_dot())


def _symmetric_component(pauli: np.ndarray) -> np.ndarray:
    return 0.25 * (np.eye(4) + spin_dot() - 2 * tensor(pauli, pauli))


def build_projectors() -> dict[BellOutcome, np.ndarray]:
    return {
        BellOutcome.PSI_MINUS: antisymmetric_projector(),
        BellOutcome.PHI_MINUS: _symmetric_component(SIGMA_X),
        BellOutcome.PHI_PLUS: _symmetric_component(SIGMA_Y),
        BellOutcome.PSI_PLUS: _symmetric_component(SIGMA_Z),
    }


def bell_ket(outcome: BellOutcome) -> np.ndarray:
    r = 1 / math.sqrt(2)
    return {
        BellOutcome.PSI_MINUS: np.array([0, r, -r, 0], dtype=complex),
        BellOutcome.PSI_PLUS: np.array([0, r, r, 0], dtype=complex),
        BellOutcome.PHI_MINUS: np.array([r, 0, 0, -r], dtype=complex),
        BellOutcome.PHI_PLUS: np.array([r, 0, 0, r], dtype=complex),
    }[outcome]


def _lift(p: np.ndarray) -> np.ndarray:
    return tensor(p, I2)


def _check_density(rho123: np.ndarray, tol: float) -> np.ndarray:
    rho123 = opalg.as_operator(rho123)
    if opalg.n_qubits(rho123) != 3:
        raise opalg.DimensionError("expected a three-qubit operator")
    ok, r = opalg.validate(rho123, "density", tol)
    if not ok:
        raise ValueError(f"input is not a density operator (residual {r:.3e})")
    return rho123


def bell_transform(rho123: np.ndarray, tol: float = 1e-10) -> dict[BellOutcome, np.ndarray]:
    """The four diagonal branches ``(P x I) rho (P x I)``; cross terms are not formed."""
    rho123 = _check_density(rho123, tol)
    out = {}
    for outcome, p in build_projectors().items():
        lp = _lift(p)
        out[outcome] = lp @ rho123 @ lp
    return out


def branch_probability(rho123: np.ndarray, outcome: BellOutcome) -> float:
    lp = _lift(build_projectors()[outcome])
    return float(np.real(np.trace(lp @ rho123)))


def conditional_state(
    rho123: np.ndarray, outcome: BellOutcome, tol: float = 1e-10
) -> tuple[float, np.ndarray]:
    """Probability of ``outcome`` and Bob's (photon 3) normalized state in that branch."""
    rho123 = _check_density(rho123, tol)
    lp = _lift(build_projectors()[outcome])
    branch = lp @ rho123 @ lp
    prob = float(np.real(np.trace(branch)))
    if prob < PROBABILITY_FLOOR:
        raise UndefinedConditionalError(f"{outcome.value} has probability {prob:.3e}")
    return prob, opalg.partial_trace(branch, keep={3}) / prob


def branch_form(rho3: np.ndarray) -> dict[BellOutcome, np.ndarray]:
    """Right-hand branch form ``1/4 |B_k><B_k| x s_k rho3 s_k`` for each outcome."""
    projectors = build_projectors()
    return {
        k: 0.25 * tensor(projectors[k], opalg.conjugate(k.correction, rho3))
        for k in OUTCOMES
    }
