import numpy as np
import pytest

from ensemble_teleport.states import InputQubit


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_inputs(rng):
    return [InputQubit.haar_random(rng) for _ in range(100)]


def random_operator(rng, dim):
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


def random_density(rng, dim):
    g = random_operator(rng, dim)
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def brute_partial_trace_keep_last(a):
    """Reduce an 8x8 operator onto its last qubit with explicit index loops."""
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(4):
                out[i, j] += a[2 * k + i, 2 * k + j]
    return out


ACCEPTANCE_LINES = []


def record_criterion(number, name, ok, detail):
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
