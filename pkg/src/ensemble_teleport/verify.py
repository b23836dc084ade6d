"""Invariant suite behind ``ensemble-teleport verify``.

Each check returns a nonnegative residual that is compared with its
tolerance.  The suite is deterministic: random inputs come from a fixed seed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import opalg
from .bell import OUTCOMES, bell_ket, bell_transform, branch_form, build_projectors, conditional_state
from .bell import antisymmetric_projector, symmetric_projector
from .channel import Disentangled, Entangled, PairAxis, disentangled_pair, epr_pair, epr_pair_from_ket, singlet_ket
from .ensemble import EnsembleSpec, average_pair_state
from .opalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, max_abs_diff
from .states import InputQubit, input_density
from .teleport import run

SUITE_SEED = 2003
PERTURBATION = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def _inputs(n=100):
    rng = np.random.default_rng(SUITE_SEED)
    return [InputQubit.haar_random(rng) for _ in range(n)]


def _completeness(p):
    return max_abs_diff(sum(p.values()), np.eye(4))


def _orthogonality(p):
    return max(
        max_abs_diff(p[a] @ p[b], p[a] if a is b else np.zeros((4, 4)))
        for a, b in itertools.product(OUTCOMES, OUTCOMES)
    )


def _projectors_vs_kets(p):
    return max(max_abs_diff(p[k], np.outer(bell_ket(k), bell_ket(k).conj())) for k in OUTCOMES)


def _sym_decomposition(p):
    s = sum(p[k] for k in OUTCOMES[1:])
    return max(max_abs_diff(s, symmetric_projector()), max_abs_diff(p[OUTCOMES[0]], antisymmetric_projector()))


def _pauli_algebra(_):
    res = [max_abs_diff(s @ s, I2) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    res += [
        max_abs_diff(SIGMA_X @ SIGMA_Y, 1j * SIGMA_Z),
        max_abs_diff(SIGMA_Y @ SIGMA_Z, 1j * SIGMA_X),
        max_abs_diff(SIGMA_Z @ SIGMA_X, 1j * SIGMA_Y),
    ]
    return max(res)


def _epr_forms(_):
    return max_abs_diff(epr_pair(), epr_pair_from_ket())


def _entangled_teleport(_):
    worst = 0.0
    for q in _inputs():
        for b in run(q, Entangled()).branches.values():
            worst = max(worst, abs(b.probability - 0.25), abs(b.fidelity - 1))
    return worst


def _disentangled_z(_):
    worst = 0.0
    for q in _inputs():
        target = np.diag([abs(q.a) ** 2, abs(q.b) ** 2])
        for b in run(q, Disentangled(PairAxis(0.0))).branches.values():
            worst = max(worst, max_abs_diff(b.bob_corrected, target))
            worst = max(worst, abs(b.fidelity - abs(q.a) ** 4 - abs(q.b) ** 4))
    return worst


def _branch_structure(_):
    worst = 0.0
    for q, pair in itertools.product(_inputs(20), (epr_pair(), disentangled_pair(PairAxis(0.0)))):
        rho = opalg.tensor(input_density(q), pair)
        left = bell_transform(rho)
        right = branch_form(conditional_state(rho, OUTCOMES[0])[1])
        worst = max(worst, max(max_abs_diff(left[k], right[k]) for k in OUTCOMES))
    return worst


def _singlet_overlap(_):
    rng = np.random.default_rng(SUITE_SEED)
    psi = singlet_ket()
    worst = 0.0
    for t, phi in zip(rng.uniform(0, math.pi / 2, 1000), rng.uniform(0, 2 * math.pi, 1000)):
        rho = disentangled_pair(PairAxis(t, phi, phi))
        worst = max(worst, abs(np.vdot(psi, rho @ psi) - 0.5))
    return worst


def _reduced_pair_states(_):
    rng = np.random.default_rng(SUITE_SEED)
    worst = max_abs_diff(opalg.partial_trace(epr_pair(), {1}), I2 / 2)
    for t, p2, p3 in rng.uniform(0, math.pi / 2, (100, 3)):
        rho = disentangled_pair(PairAxis(t, 4 * p2, 4 * p3))
        for keep in ({1}, {2}):
            worst = max(worst, max_abs_diff(opalg.partial_trace(rho, keep), I2 / 2))
    return worst


def _ensemble_matched(_):
    xx, yy = np.kron(SIGMA_X, SIGMA_X), np.kron(SIGMA_Y, SIGMA_Y)
    expected = 0.25 * (np.eye(4) - 0.5 * (xx + yy))
    return max_abs_diff(average_pair_state(EnsembleSpec(n_nodes=64)).mean_pair_state, expected)


def _ensemble_independent(_):
    got = average_pair_state(EnsembleSpec(phase_model="independent", n_nodes=64)).mean_pair_state
    return max_abs_diff(got, np.eye(4) / 4)


CHECKS: list[tuple[str, Callable, float]] = [
    ("projector_completeness", _completeness, 1e-12),
    ("projector_orthogonality", _orthogonality, 1e-14),
    ("projectors_match_bell_kets", _projectors_vs_kets, 1e-14),
    ("symmetric_decomposition", _sym_decomposition, 1e-14),
    ("pauli_algebra", _pauli_algebra, 1e-15),
    ("epr_pauli_form_matches_ket", _epr_forms, 1e-14),
    ("entangled_teleport_perfect", _entangled_teleport, 1e-12),
    ("disentangled_z_dephases", _disentangled_z, 1e-12),
    ("bell_branch_structure", _branch_structure, 1e-12),
    ("singlet_overlap_half", _singlet_overlap, 1e-12),
    ("pair_reduced_states_mixed", _reduced_pair_states, 1e-12),
    ("ensemble_matched_average", _ensemble_matched, 1e-10),
    ("ensemble_independent_average", _ensemble_independent, 1e-10),
]


def run_checks(tol: float | None = None, perturb: bool = False) -> list[CheckResult]:
    """Run every check; ``tol`` overrides all tolerances.

    ``perturb`` adds a small error to one projector entry as a negative control.
    """
    projectors = build_projectors()
    if perturb:
        p = projectors[OUTCOMES[0]].copy()
        p[1, 1] += PERTURBATION
        projectors[OUTCOMES[0]] = p
    return [CheckResult(name, float(fn(projectors)), tol if tol is not None else t) for name, fn, t in CHECKS]
