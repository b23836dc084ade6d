"""Pair states for photons 2 and 3: the singlet and the disentangled mixture."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .opalg import PAULIS, ket_to_density, tensor
from .states import Axis, Sign, single_density, wrap_angle

PHASE_MATCH_TOL = 1e-9


def circular_distance(x: float, y: float) -> float:
    """Distance between two angles on the circle, in ``[0, pi]``."""
    d = abs(wrap_angle(x) - wrap_angle(y))
    return min(d, 2 * math.pi - d)


@dataclass(frozen=True)
class PairAxis:
    """Shared polar parameter with separate azimuthal phases for photons 2 and 3."""

    theta: float
    phi2: float = 0.0
    phi3: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2):
            raise ValueError(f"theta={self.theta} outside [0, pi/2]")
        object.__setattr__(self, "phi2", wrap_angle(self.phi2))
        object.__setattr__(self, "phi3", wrap_angle(self.phi3))

    @property
    def axis2(self) -> Axis:
        return Axis(self.theta, self.phi2)

    @property
    def axis3(self) -> Axis:
        return Axis(self.theta, self.phi3)

    def phase_mismatch(self, offset: float = 0.0) -> float:
        """Circular distance between ``phi3`` and ``phi2 + offset``."""
        return circular_distance(self.phi3, self.phi2 + offset)

    def phase_matched(self, tol: float = PHASE_MATCH_TOL, offset: float = 0.0) -> bool:
        """``offset=pi`` gives the criterion after a crystal on one photon."""
        return self.phase_mismatch(offset) < tol


@dataclass(frozen=True)
class Entangled:
    def pair_state(self) -> np.ndarray:
        return epr_pair()

    def describe(self) -> str:
        return "entangled"


@dataclass(frozen=True)
class Disentangled:
    axis: PairAxis

    def pair_state(self) -> np.ndarray:
        return disentangled_pair(self.axis)

    def describe(self) -> str:
        a = self.axis
        return f"disentangled(theta={a.theta!r},phi2={a.phi2!r},phi3={a.phi3!r})"


ChannelModel = Entangled | Disentangled


def singlet_ket() -> np.ndarray:
    r = 1 / math.sqrt(2)
    return np.array([0, r, -r, 0], dtype=complex)


def epr_pair() -> np.ndarray:
    """Singlet density operator ``1/4 (II - sigma.sigma)``."""
    return 0.25 * (np.eye(4) - sum(tensor(p, p) for p in PAULIS))


def epr_pair_from_ket() -> np.ndarray:
    return ket_to_density(singlet_ket())


def disentangled_pair(axis: PairAxis) -> np.ndarray:
    """Equal mixture of ``(+,-)`` and ``(-,+)`` product states along a shared axis."""
    a2, a3 = axis.axis2, axis.axis3
    return 0.5 * (
        tensor(single_density(a2, Sign.PLUS), single_density(a3, Sign.MINUS))
        + tensor(single_density(a2, Sign.MINUS), single_density(a3, Sign.PLUS))
    )


def disentangled_pair_batch(theta, phi2, phi3) -> np.ndarray:
    """Vectorized :func:`disentangled_pair` over arrays of angles; shape ``(N, 4, 4)``.

    ``theta`` may be a scalar or broadcast against the phase arrays.
    """
    phi2, phi3 = np.broadcast_arrays(np.atleast_1d(np.asarray(phi2, float)), np.atleast_1d(np.asarray(phi3, float)))
    theta = np.broadcast_to(np.asarray(theta, float), phi2.shape)
    c, s = np.cos(theta), np.sin(theta)
    e2, e3 = np.exp(1j * phi2), np.exp(1j * phi3)
    plus2 = np.stack([c + 0j, s * e2], axis=-1)
    minus2 = np.stack([s + 0j, -c * e2], axis=-1)
    plus3 = np.stack([c + 0j, s * e3], axis=-1)
    minus3 = np.stack([s + 0j, -c * e3], axis=-1)

    def product_projector(u, v):
        k = np.einsum("ni,nj->nij", u, v).reshape(-1, 4)
        return np.einsum("ni,nj->nij", k, k.conj())

    return 0.5 * (product_projector(plus2, minus3) + product_projector(minus2, plus3))


def crystal_transform(axis: PairAxis, photon: int) -> PairAxis:
    """Advance the selected photon's phase by pi; theta is untouched."""
    if photon == 2:
        return replace(axis, phi2=axis.phi2 + math.pi)
    if photon == 3:
        return replace(axis, phi3=axis.phi3 + math.pi)
    raise ValueError(f"photon must be 2 or 3, got {photon}")
