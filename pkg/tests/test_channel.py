import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ensemble_teleport import opalg
from ensemble_teleport.channel import (
    PairAxis,
    circular_distance,
    crystal_transform,
    disentangled_pair,
    disentangled_pair_batch,
    epr_pair,
    epr_pair_from_ket,
    singlet_ket,
)
from ensemble_teleport.opalg import I2, PAULIS
from ensemble_teleport.states import Axis, Sign, single_density

thetas = st.floats(0, math.pi / 2)
phis = st.floats(0, 2 * math.pi)


def pauli_form_pair(axis: PairAxis):
    """Hand reduction: 1/4 (II - (n2.s) x (n3.s)) with n the Bloch vectors."""
    n2, n3 = axis.axis2.bloch_vector(), axis.axis3.bloch_vector()
    s2 = sum(c * p for c, p in zip(n2, PAULIS))
    s3 = sum(c * p for c, p in zip(n3, PAULIS))
    return 0.25 * (np.eye(4) - np.kron(s2, s3))


def test_epr_matrix():
    expected = 0.5 * np.array([[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]])
    assert opalg.max_abs_diff(epr_pair(), expected) < 1e-15
    assert opalg.max_abs_diff(epr_pair(), epr_pair_from_ket()) < 1e-14
    assert opalg.validate(epr_pair(), "projector").ok
    psi = singlet_ket()
    assert abs(np.vdot(psi, epr_pair() @ psi) - 1) < 1e-15


def test_disentangled_z():
    expected = 0.5 * np.diag([0, 1, 1, 0])
    for phi in (0.0, 1.3):
        assert opalg.max_abs_diff(disentangled_pair(PairAxis(0.0, phi, phi)), expected) < 1e-15


def test_disentangled_opposite_phases_entrywise():
    # theta = pi/4, phi2 = 0, phi3 = pi: every e^{i phi3} factor becomes -1
    p2 = 0.5 * np.array([[1, 1], [1, 1]])
    m2 = 0.5 * np.array([[1, -1], [-1, 1]])
    p3, m3 = m2, p2
    expected = 0.5 * (np.kron(p2, m3) + np.kron(m2, p3))
    got = disentangled_pair(PairAxis(math.pi / 4, 0.0, math.pi))
    assert opalg.max_abs_diff(got, expected) < 1e-15


def test_singlet_overlap_quarter_matched():
    psi = singlet_ket()
    for phi in np.linspace(0, 2 * math.pi, 7):
        rho = disentangled_pair(PairAxis(math.pi / 4, phi, phi))
        assert abs(np.vdot(psi, rho @ psi) - 0.5) < 1e-12


def test_random_axes_are_densities(rng):
    for t, p2, p3 in zip(rng.uniform(0, math.pi / 2, 1000), rng.uniform(0, 7, 1000), rng.uniform(0, 7, 1000)):
        rho = disentangled_pair(PairAxis(t, p2, p3))
        ok, r = opalg.validate(rho, "density")
        assert ok, r
        assert np.linalg.matrix_rank(rho, tol=1e-10) <= 2


@settings(max_examples=200)
@given(thetas, phis, phis)
def test_matches_pauli_reduction(t, p2, p3):
    axis = PairAxis(t, p2, p3)
    assert opalg.max_abs_diff(disentangled_pair(axis), pauli_form_pair(axis)) < 1e-14


@settings(max_examples=200)
@given(thetas, phis, phis)
def test_reduced_states_are_maximally_mixed(t, p2, p3):
    rho = disentangled_pair(PairAxis(t, p2, p3))
    assert opalg.max_abs_diff(opalg.partial_trace(rho, {1}), I2 / 2) < 1e-12
    assert opalg.max_abs_diff(opalg.partial_trace(rho, {2}), I2 / 2) < 1e-12


@settings(max_examples=200)
@given(thetas, phis)
def test_singlet_overlap_invariant(t, phi):
    psi = singlet_ket()
    rho = disentangled_pair(PairAxis(t, phi, phi))
    assert abs(np.vdot(psi, rho @ psi) - 0.5) < 1e-12


def test_batch_agrees_with_scalar(rng):
    t = rng.uniform(0, math.pi / 2, 50)
    p2, p3 = rng.uniform(0, 7, 50), rng.uniform(0, 7, 50)
    batch = disentangled_pair_batch(t, p2, p3)
    for k in range(50):
        assert opalg.max_abs_diff(batch[k], disentangled_pair(PairAxis(t[k], p2[k], p3[k]))) < 1e-15
    assert disentangled_pair_batch(0.3, 1.0, 2.0).shape == (1, 4, 4)


class TestCrystal:
    def test_photon2(self):
        out = crystal_transform(PairAxis(math.pi / 4, 0.0, 0.0), 2)
        assert out == PairAxis(math.pi / 4, math.pi, 0.0)

    @settings(max_examples=200)
    @given(thetas, phis, phis, st.sampled_from([2, 3]))
    def test_involution(self, t, p2, p3, photon):
        axis = PairAxis(t, p2, p3)
        twice = crystal_transform(crystal_transform(axis, photon), photon)
        assert twice.theta == axis.theta
        assert circular_distance(twice.phi2, axis.phi2) < 1e-12
        assert circular_distance(twice.phi3, axis.phi3) < 1e-12

    def test_crystal_adjusted_matching(self):
        axis = crystal_transform(PairAxis(math.pi / 4, 0.8, 0.8), 3)
        assert axis.phase_matched(offset=math.pi)
        assert not axis.phase_matched()

    def test_bad_photon(self):
        with pytest.raises(ValueError):
            crystal_transform(PairAxis(0.0), 1)

    def test_swap_equivalence_only_on_equator(self):
        # the phase shift reproduces the |+> <-> |-> swap at theta = pi/4 only
        phi = 0.9
        for theta, holds in ((math.pi / 4, True), (0.3, False)):
            shifted = single_density(Axis(theta, phi + math.pi), Sign.PLUS)
            swapped = single_density(Axis(theta, phi), Sign.MINUS)
            assert (opalg.max_abs_diff(shifted, swapped) < 1e-14) is holds


def test_circular_distance():
    assert circular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    assert circular_distance(0.0, math.pi) == pytest.approx(math.pi)
    assert circular_distance(-7.0, -7.0) == 0.0
