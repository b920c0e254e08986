import numpy as np
import pytest
from scipy.stats import unitary_group

from relent.qlinalg import DensityMatrix

_ACCEPTANCE = []


def record_criterion(number, ok, detail):
    _ACCEPTANCE.append((number, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE, key=lambda t: t[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def random_density(rng, n=4, rank=None, real=False):
    rank = rank or n
    g = rng.normal(size=(n, rank))
    if not real:
        g = g + 1j * rng.normal(size=(n, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_state(rng, dims=(2, 2), **kw):
    return DensityMatrix(random_density(rng, int(np.prod(dims)), **kw), dims)


def random_unitary(rng, n):
    return unitary_group.rvs(n, random_state=rng)


def random_separable(rng, terms=6):
    """Explicit mixture of random pure product states on two qubits."""
    p = rng.dirichlet(np.ones(terms))
    m = np.zeros((4, 4), dtype=complex)
    for w in p:
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        m += w * np.outer(v, v.conj())
    return DensityMatrix(m, (2, 2))


def bell_state():
    return DensityMatrix.from_ket(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
