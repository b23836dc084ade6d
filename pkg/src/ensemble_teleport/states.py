"""Single-photon states along a quantization axis, and Alice's input qubit.

Angle convention: an :class:`Axis` ``(theta, phi)`` gives the kets

    |+> = (cos theta, sin theta e^{i phi})
    |-> = (sin theta, -cos theta e^{i phi})

so ``theta`` is half the usual Bloch-sphere polar angle.  A Bloch vector with
polar angle ``beta`` corresponds to ``theta = beta / 2``; ``theta = pi/4``
therefore lies on the equator of the Bloch sphere and ``theta = 0`` is the
z axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .opalg import PAULIS

TWO_PI = 2.0 * math.pi


class NormalizationError(ValueError):
    pass


class Sign(Enum):
    PLUS = 1
    MINUS = -1


def wrap_angle(phi: float) -> float:
    """Map an angle onto ``[0, 2*pi)``."""
    w = math.fmod(phi, TWO_PI)
    if w < 0:
        w += TWO_PI
    # fmod of a value just below a negative multiple can round up to 2*pi
    return 0.0 if w >= TWO_PI else w


@dataclass(frozen=True)
class Axis:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2):
            raise ValueError(f"theta={self.theta} outside [0, pi/2]")
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    def bloch_vector(self) -> np.ndarray:
        s = math.sin(2 * self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi), math.cos(2 * self.theta)])


def basis_ket(axis: Axis, s: Sign) -> np.ndarray:
    c, sn = math.cos(axis.theta), math.sin(axis.theta)
    ph = complex(math.cos(axis.phi), math.sin(axis.phi))
    if s is Sign.PLUS:
        return np.array([c, sn * ph], dtype=complex)
    return np.array([sn, -c * ph], dtype=complex)


def single_density(axis: Axis, s: Sign) -> np.ndarray:
    """Projector onto ``basis_ket(axis, s)``, built entrywise so it is exactly Hermitian.

    plus:  [[cos^2,  cs e^{-i phi}], [ cs e^{i phi}, sin^2]]
    minus: [[sin^2, -cs e^{-i phi}], [-cs e^{i phi}, cos^2]]
    """
    c, sn = math.cos(axis.theta), math.sin(axis.theta)
    off = c * sn * complex(math.cos(axis.phi), -math.sin(axis.phi))
    if s is Sign.PLUS:
        return np.array([[c * c, off], [off.conjugate(), sn * sn]], dtype=complex)
    return np.array([[sn * sn, -off], [-off.conjugate(), c * c]], dtype=complex)


def axis_operator(axis: Axis) -> np.ndarray:
    """Spin component along the axis: ``rho(+) - rho(-)``."""
    return single_density(axis, Sign.PLUS) - single_density(axis, Sign.MINUS)


@dataclass(frozen=True)
class InputQubit:
    """Alice's pure input ``a|0> + b|1>``.

    Unnormalized amplitudes are accepted and rescaled; ``norm_factor`` keeps
    the multiplier that was applied (1.0 when the input was already unit norm).
    """

    a: complex
    b: complex
    norm_factor: float = field(default=1.0, init=False)

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        if not all(math.isfinite(x) for x in (a.real, a.imag, b.real, b.imag)):
            raise NormalizationError("amplitudes must be finite")
        norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if norm == 0.0:
            raise NormalizationError("amplitudes (0, 0) cannot be normalized")
        factor = 1.0 if abs(norm - 1.0) <= 1e-15 else 1.0 / norm
        object.__setattr__(self, "a", a * factor)
        object.__setattr__(self, "b", b * factor)
        object.__setattr__(self, "norm_factor", factor)

    @property
    def ket(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    @classmethod
    def from_bloch(cls, polar: float, azimuth: float) -> "InputQubit":
        return cls(math.cos(polar / 2), complex(math.cos(azimuth), math.sin(azimuth)) * math.sin(polar / 2))

    @classmethod
    def haar_random(cls, rng: np.random.Generator) -> "InputQubit":
        z = rng.normal(size=4)
        return cls(complex(z[0], z[1]), complex(z[2], z[3]))


def input_density(q: InputQubit) -> np.ndarray:
    """``[[|a|^2, a b*], [a* b, |b|^2]]``."""
    a, b = q.a, q.b
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-12:
        raise NormalizationError(f"|a|^2 + |b|^2 = {abs(a) ** 2 + abs(b) ** 2}")
    return np.array(
        [[abs(a) ** 2, a * b.conjugate()], [a.conjugate() * b, abs(b) ** 2]],
        dtype=complex,
    )


def pauli_basis() -> tuple[np.ndarray, ...]:
    """Identity followed by sigma_x, sigma_y, sigma_z."""
    return (np.eye(2, dtype=complex),) + tuple(np.array(p) for p in PAULIS)
