"""Dense complex operator algebra on one to three qubits.

Operators are plain ``numpy`` arrays of dtype ``complex128`` and shape
``(2**n, 2**n)`` with ``n`` in ``{1, 2, 3}``.  Subsystems are numbered from 1,
with subsystem 1 the leftmost (most significant) tensor factor, so a
three-photon operator is laid out as photon 1 x photon 2 x photon 3.

Every function returns a fresh array and never mutates its arguments.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

MAX_QUBITS = 3
DEFAULT_TOL = 1e-12
EIG_RESIDUAL_TOL = 1e-10


class DimensionError(ValueError):
    """Operand shapes are incompatible or exceed the supported qubit count."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


I2 = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def identity(n_qubits: int) -> np.ndarray:
    _check_qubit_count(n_qubits)
    return np.eye(2**n_qubits, dtype=complex)


def _check_qubit_count(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise DimensionError(f"qubit count {n} outside 1..{MAX_QUBITS}")


def n_qubits(a: np.ndarray) -> int:
    """Number of qubits an operator acts on; raises if ``a`` is not a valid operator."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"operator must be square, got shape {a.shape}")
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if dim != 2**n:
        raise DimensionError(f"dimension {dim} is not a power of two")
    _check_qubit_count(n)
    return n


def as_operator(a) -> np.ndarray:
    """Coerce to a complex operator, checking shape and finiteness."""
    a = np.array(a, dtype=complex)
    n_qubits(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("operator has non-finite entries")
    return a


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the more significant factor."""
    na, nb = n_qubits(a), n_qubits(b)
    if na + nb > MAX_QUBITS:
        raise DimensionError(f"tensor of {na} and {nb} qubits exceeds {MAX_QUBITS}")
    return np.kron(a, b)


def tensor_all(*ops: np.ndarray) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = tensor(out, op)
    return np.array(out, dtype=complex)


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if n_qubits(a) != n_qubits(b):
        raise DimensionError(f"shape mismatch {np.shape(a)} vs {np.shape(b)}")


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return np.asarray(a) @ np.asarray(b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return np.asarray(a) + np.asarray(b)


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return np.asarray(a) - np.asarray(b)


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    n_qubits(a)
    return c * np.asarray(a, dtype=complex)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def trace(a: np.ndarray) -> complex:
    n_qubits(a)
    return complex(np.trace(a))


def conjugate(u: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Return ``u a u^dagger``."""
    return mul(mul(u, a), adjoint(u))


def partial_trace(a: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduce ``a`` onto the 1-based subsystems listed in ``keep``.

    The kept subsystems stay in their original order.  ``keep`` must be a
    nonempty proper subset of ``{1, ..., n}``.
    """
    n = n_qubits(a)
    keep = sorted(set(keep))
    if not keep or len(keep) >= n or keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep={keep} is not a nonempty proper subset of 1..{n}")
    t = np.asarray(a).reshape((2,) * (2 * n))
    # einsum labels: row index i_k, column index j_k; traced systems share a label
    rows = [chr(ord("a") + k) for k in range(n)]
    cols = [rows[k] if k + 1 not in keep else chr(ord("n") + k) for k in range(n)]
    kept_rows = [rows[k - 1] for k in keep]
    kept_cols = [cols[k - 1] for k in keep]
    spec = "".join(rows) + "".join(cols) + "->" + "".join(kept_rows) + "".join(kept_cols)
    d = 2 ** len(keep)
    return np.einsum(spec, t).reshape(d, d)


def ket_to_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


class Validation(NamedTuple):
    ok: bool
    residual: float


def _hermitian_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - adjoint(a))))


def min_eigenvalue(a: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``a``.

    Each eigenpair is checked against ``||Av - lambda v|| <= 1e-10``.
    """
    h = 0.5 * (a + adjoint(a))
    w, v = np.linalg.eigh(h)
    resid = np.linalg.norm(h @ v - v * w, axis=0)
    if np.max(resid) > EIG_RESIDUAL_TOL:
        raise ArithmeticError(f"eigen-decomposition residual {np.max(resid):.3e}")
    return float(w[0])


def validate(a: np.ndarray, kind: str, tol: float = DEFAULT_TOL) -> Validation:
    """Check ``a`` is a hermitian / psd / projector / density operator.

    Returns the pass flag and the largest residual among the checks for
    ``kind``.  For ``psd`` the residual is ``max(0, -lambda_min)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=complex)
    n_qubits(a)
    if kind == "hermitian":
        r = _hermitian_residual(a)
    elif kind == "psd":
        r = max(0.0, -min_eigenvalue(a))
    elif kind == "projector":
        r = float(np.max(np.abs(a @ a - a)))
    elif kind == "density":
        r = max(
            _hermitian_residual(a),
            max(0.0, -min_eigenvalue(a)),
            abs(np.trace(a) - 1),
        )
    else:
        raise ValueError(f"unknown validation kind {kind!r}")
    return Validation(r <= tol, float(r))


def max_abs_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
