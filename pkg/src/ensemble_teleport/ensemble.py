"""Averages of the disentangled pair over an ensemble of quantization axes.

The polar parameter is held fixed (``pi/4`` by default) and only the
azimuthal angle ``chi`` is averaged over ``[0, 2*pi)``.  How ``chi`` enters
the two photon phases is set by the phase model:

``matched``      phi2 = phi3 = chi
``offset``       phi2 = chi, phi3 = chi + delta
``independent``  phi2, phi3 independent and uniform

Two integration methods are available.  ``quadrature`` uses equally spaced
nodes (a rectangle rule, exact for trigonometric polynomials of degree below
the node count; the integrand here has degree 2).  ``montecarlo`` draws
samples from a seeded stream split into ``n_partitions`` contiguous index
ranges; partition ``r`` is driven by child ``r`` of
``numpy.random.SeedSequence(seed)``, and partial sums are combined in
partition order.  The result is therefore bit-identical for any number of
worker threads as long as ``seed`` and ``n_partitions`` are unchanged.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import opalg
from .bell import OUTCOMES, BellOutcome
from .channel import disentangled_pair_batch
from .teleport import BranchResult, TeleportReport, fidelity, report_from_state, three_photon_state
from .states import TWO_PI, InputQubit, input_density, wrap_angle

DEFAULT_SEED = 20030804
DEFAULT_PARTITIONS = 16
AVERAGE_THETA = math.pi / 4
PHASE_MODELS = ("matched", "offset", "independent")
METHODS = ("quadrature", "montecarlo")
_CHUNK = 1 << 16


@dataclass(frozen=True)
class EnsembleSpec:
    theta: float = AVERAGE_THETA
    phase_model: str = "matched"
    offset: float = 0.0
    method: str = "quadrature"
    n_nodes: int = 64
    n_samples: int = 100_000
    seed: int = DEFAULT_SEED
    n_partitions: int = DEFAULT_PARTITIONS

    def __post_init__(self):
        if self.phase_model not in PHASE_MODELS:
            raise ValueError(f"phase_model must be one of {PHASE_MODELS}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not (0.0 <= self.theta <= math.pi / 2):
            raise ValueError(f"theta={self.theta} outside [0, pi/2]")
        if self.method == "quadrature" and self.n_nodes < 4:
            raise ValueError("quadrature needs n_nodes >= 4")
        if self.method == "montecarlo" and self.n_samples < 1:
            raise ValueError("montecarlo needs n_samples >= 1")
        if self.n_partitions < 1:
            raise ValueError("n_partitions must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        object.__setattr__(self, "offset", wrap_angle(self.offset))

    @property
    def n_points(self) -> int:
        """Number of axes the average runs over."""
        if self.method == "montecarlo":
            return self.n_samples
        if self.phase_model == "independent":
            return self.n_nodes**2
        return self.n_nodes


@dataclass(frozen=True)
class AveragedResult:
    spec: EnsembleSpec
    mean_pair_state: np.ndarray
    n_effective: int
    stderr: np.ndarray | None = None
    """Per-entry standard error: real part for Re, imaginary part for Im."""
    report: TeleportReport | None = field(default=None)


# -- phase generation ------------------------------------------------------


def _phases_from_chi(spec: EnsembleSpec, chi2: np.ndarray, chi3: np.ndarray | None):
    if spec.phase_model == "matched":
        return chi2, chi2
    if spec.phase_model == "offset":
        return chi2, chi2 + spec.offset
    return chi2, chi3


def quadrature_phases(spec: EnsembleSpec) -> tuple[np.ndarray, np.ndarray]:
    nodes = TWO_PI * np.arange(spec.n_nodes) / spec.n_nodes
    if spec.phase_model == "independent":
        g2, g3 = np.meshgrid(nodes, nodes, indexing="ij")
        return g2.ravel(), g3.ravel()
    return _phases_from_chi(spec, nodes, None)


def partition_bounds(n: int, n_partitions: int) -> list[tuple[int, int]]:
    """Contiguous ``[start, stop)`` ranges; the first ``n % P`` ranges get one extra."""
    base, extra = divmod(n, n_partitions)
    bounds, start = [], 0
    for r in range(n_partitions):
        stop = start + base + (1 if r < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def partition_rng(seed: int, r: int, n_partitions: int) -> np.random.Generator:
    child = np.random.SeedSequence(seed).spawn(n_partitions)[r]
    return np.random.Generator(np.random.PCG64(child))


def montecarlo_phases(spec: EnsembleSpec, r: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Phases for partition ``r``, which holds ``count`` samples."""
    rng = partition_rng(spec.seed, r, spec.n_partitions)
    chi2 = rng.uniform(0.0, TWO_PI, size=count)
    chi3 = rng.uniform(0.0, TWO_PI, size=count) if spec.phase_model == "independent" else None
    return _phases_from_chi(spec, chi2, chi3)


def iter_phases(spec: EnsembleSpec):
    """Yield ``(phi2, phi3)`` array blocks covering every point of the ensemble, in order."""
    if spec.method == "quadrature":
        yield quadrature_phases(spec)
        return
    for r, (start, stop) in enumerate(partition_bounds(spec.n_samples, spec.n_partitions)):
        yield montecarlo_phases(spec, r, stop - start)


# -- averaging -------------------------------------------------------------


def _partition_sums(spec: EnsembleSpec, r: int, count: int):
    total = np.zeros((4, 4), dtype=complex)
    sq_re = np.zeros((4, 4))
    sq_im = np.zeros((4, 4))
    if count == 0:
        return total, sq_re, sq_im
    phi2, phi3 = montecarlo_phases(spec, r, count)
    for lo in range(0, count, _CHUNK):
        block = disentangled_pair_batch(spec.theta, phi2[lo : lo + _CHUNK], phi3[lo : lo + _CHUNK])
        total += block.sum(axis=0)
        sq_re += (block.real**2).sum(axis=0)
        sq_im += (block.imag**2).sum(axis=0)
    return total, sq_re, sq_im


def _montecarlo_average(spec: EnsembleSpec, workers: int):
    bounds = partition_bounds(spec.n_samples, spec.n_partitions)
    tasks = [(r, stop - start) for r, (start, stop) in enumerate(bounds)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda t: _partition_sums(spec, *t), tasks))
    else:
        parts = [_partition_sums(spec, *t) for t in tasks]

    total = np.zeros((4, 4), dtype=complex)
    sq_re = np.zeros((4, 4))
    sq_im = np.zeros((4, 4))
    for t, sr, si in parts:  # fixed range-id order
        total += t
        sq_re += sr
        sq_im += si

    n = spec.n_samples
    mean = total / n
    if n > 1:
        var_re = np.clip((sq_re - n * mean.real**2) / (n - 1), 0.0, None)
        var_im = np.clip((sq_im - n * mean.imag**2) / (n - 1), 0.0, None)
        stderr = (np.sqrt(var_re) + 1j * np.sqrt(var_im)) / math.sqrt(n)
    else:
        stderr = np.full((4, 4), np.nan + 1j * np.nan)
    return mean, stderr


def average_pair_state(spec: EnsembleSpec, workers: int = 1) -> AveragedResult:
    """Ensemble mean of the disentangled pair operator."""
    if spec.method == "quadrature":
        phi2, phi3 = quadrature_phases(spec)
        mean = disentangled_pair_batch(spec.theta, phi2, phi3).mean(axis=0)
        return AveragedResult(spec, mean, spec.n_points)
    mean, stderr = _montecarlo_average(spec, workers)
    return AveragedResult(spec, mean, spec.n_points, stderr)


def average_teleport(
    q: InputQubit, spec: EnsembleSpec, mode: str = "operator", workers: int = 1
) -> AveragedResult:
    """Teleport through the ensemble-averaged channel.

    ``mode="operator"`` averages the pair state first and then measures once,
    which is exact because every reported linear quantity is linear in the
    pair state.  ``mode="per_sample"`` runs the full pipeline at every axis
    and averages branch weights and unnormalized Bob states; it exists to
    check that linearity and is slow for large ensembles.
    """
    if mode == "operator":
        avg = average_pair_state(spec, workers)
        report = report_from_state(q, three_photon_state(q, avg.mean_pair_state), _describe(spec))
        return AveragedResult(spec, avg.mean_pair_state, avg.n_effective, avg.stderr, report)
    if mode != "per_sample":
        raise ValueError(f"unknown mode {mode!r}")

    rho1 = input_density(q)
    weight = {k: 0.0 for k in OUTCOMES}
    unnorm = {k: np.zeros((2, 2), dtype=complex) for k in OUTCOMES}
    pair_sum = np.zeros((4, 4), dtype=complex)
    for phi2, phi3 in iter_phases(spec):
        for pair in disentangled_pair_batch(spec.theta, phi2, phi3):
            pair_sum += pair
            rep = report_from_state(q, opalg.tensor(rho1, pair))
            for k, b in rep.branches.items():
                weight[k] += b.probability
                unnorm[k] += b.probability * b.bob_raw
    n = spec.n_points
    branches: dict[BellOutcome, BranchResult] = {}
    for k in OUTCOMES:
        prob = weight[k] / n
        bob = unnorm[k] / weight[k]
        u = k.correction
        corrected = opalg.adjoint(u) @ bob @ u
        branches[k] = BranchResult(prob, bob, corrected, fidelity(corrected, q.ket))
    report = TeleportReport(q, _describe(spec), branches)
    return AveragedResult(spec, pair_sum / n, n, None, report)


def _describe(spec: EnsembleSpec) -> str:
    return f"ensemble({spec.phase_model},theta={spec.theta!r},{spec.method})"


# -- detection-rate model --------------------------------------------------


def phase_mismatch(phi2: np.ndarray, phi3: np.ndarray, target_offset: float = 0.0) -> np.ndarray:
    """Vectorized circular distance between ``phi3`` and ``phi2 + target_offset``."""
    d = np.mod(np.asarray(phi3) - np.asarray(phi2) - target_offset, TWO_PI)
    return np.minimum(d, TWO_PI - d)


def detection_rate(
    epsilon: float,
    spec: EnsembleSpec,
    target_offset: float = 0.0,
    workers: int = 1,
) -> float:
    """Fraction of sampled pairs whose phases lie within ``epsilon`` of the match condition.

    Sampling always uses the Monte Carlo stream of ``spec`` (its ``n_samples``,
    ``seed`` and ``n_partitions``), whatever ``spec.method`` says.  For
    independent uniform phases the expected rate is ``epsilon / pi``.
    ``target_offset=pi`` applies the criterion used after a crystal.
    """
    if not (0.0 < epsilon <= math.pi):
        raise ValueError("epsilon must lie in (0, pi]")
    bounds = partition_bounds(spec.n_samples, spec.n_partitions)

    def count(task):
        r, (start, stop) = task
        if stop == start:
            return 0
        phi2, phi3 = montecarlo_phases(spec, r, stop - start)
        # window covers everything at epsilon = pi
        d = phase_mismatch(phi2, phi3, target_offset)
        return int(np.count_nonzero(d < epsilon if epsilon < math.pi else d <= epsilon))

    tasks = list(enumerate(bounds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(count, tasks))
    else:
        hits = [count(t) for t in tasks]
    return sum(hits) / spec.n_samples
