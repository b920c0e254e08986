import numpy as np
import pytest

from relent.entropy import relative_entropy
from relent.qlinalg import DensityMatrix, DimensionError, is_ppt, partial_transpose
from relent.states import StateFamilyParams, w_reduced
from relent.symmetry import (
    GLOBAL_TRANSPOSITION,
    GLOBAL_UNITARY,
    LOCAL_PAIR,
    PAULI_Z,
    ConstrainedSigmaParams,
    SymmetryElement,
    SymmetryGroup,
    constrained_sigma,
    is_invariant,
    local_zz_group,
    twirl,
    w_ab_symmetry_group,
)
from relent import published

from conftest import bell_state, random_density, random_state

# entries allowed by {I, Z x Z} invariance
ZZ_PATTERN = np.array([
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
], dtype=bool)


def test_twirl_identity_group(rng):
    sigma = random_state(rng)
    group = SymmetryGroup([SymmetryElement(GLOBAL_UNITARY, (np.eye(4),))], 4)
    assert np.max(np.abs(twirl(sigma, group).data - sigma.data)) < 1e-15


def test_twirl_idempotent(rng):
    group = w_ab_symmetry_group()
    for _ in range(100):
        sigma = random_state(rng)
        once = twirl(sigma, group)
        assert np.max(np.abs(twirl(once, group).data - once.data)) < 1e-14
        assert is_invariant(once, group)


def test_zz_twirl_pattern(rng):
    group = local_zz_group()
    for real in (True, False):
        sigma = random_state(rng, real=real)
        t = twirl(sigma, group).data
        assert np.all(np.abs(t[~ZZ_PATTERN]) < 1e-15)
        assert np.allclose(t[ZZ_PATTERN], sigma.data[ZZ_PATTERN])


def test_w_reduction_invariances(rng):
    zz = local_zz_group()
    w = SymmetryGroup.generated_by([SymmetryElement(GLOBAL_UNITARY, (np.diag([1.0, 1, -1, 1]),))], 4)
    for _ in range(20):
        rho = w_reduced(StateFamilyParams.w(f2=rng.uniform(0, 0.5)), "AB")
        assert is_invariant(rho, zz)
        assert is_invariant(rho, w)
        assert is_invariant(rho, w_ab_symmetry_group())


def test_bell_not_invariant_under_local_z():
    group = SymmetryGroup.generated_by([SymmetryElement(LOCAL_PAIR, (PAULI_Z, np.eye(2)))], 4)
    assert not is_invariant(bell_state(), group)


def test_w_ab_group_structure():
    group = w_ab_symmetry_group()
    assert len(group) == 8
    assert sum(g.is_transposing for g in group) == 4
    # rebuilding from the element list re-runs the closure check
    SymmetryGroup(group.elements, 4)


def test_random_state_not_invariant(rng):
    assert not is_invariant(random_state(rng), w_ab_symmetry_group())


def test_group_rejects_non_closed_and_missing_identity():
    zz = SymmetryElement(LOCAL_PAIR, (PAULI_Z, PAULI_Z))
    ident = SymmetryElement(GLOBAL_UNITARY, (np.eye(4),))
    with pytest.raises(ValueError):
        SymmetryGroup([zz], 4)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    xh = SymmetryElement(LOCAL_PAIR, (h, np.eye(2)))
    with pytest.raises(ValueError):
        SymmetryGroup([ident, zz, xh], 4)


def test_element_validation():
    with pytest.raises(ValueError):
        SymmetryElement(GLOBAL_UNITARY, (np.ones((2, 2)),))
    with pytest.raises(ValueError):
        SymmetryElement("rotation", ())
    t = SymmetryElement(GLOBAL_TRANSPOSITION)
    assert t.is_transposing


def test_twirl_dimension_mismatch(rng):
    with pytest.raises(DimensionError):
        twirl(random_state(rng, (2, 3)), w_ab_symmetry_group())


def test_twirl_never_increases_relative_entropy_to_invariant_target(rng):
    group = w_ab_symmetry_group()
    for _ in range(200):
        rho = w_reduced(StateFamilyParams.w(f2=rng.uniform(0.01, 0.49)), "AB")
        sigma = random_state(rng)
        assert relative_entropy(rho, twirl(sigma, group)) <= relative_entropy(rho, sigma) + 1e-9


def test_twirl_preserves_ppt(rng):
    group = w_ab_symmetry_group()
    for _ in range(100):
        a = random_density(rng, 2)
        b = random_density(rng, 2)
        sigma = DensityMatrix(np.kron(a, b), (2, 2))
        assert is_ppt(twirl(sigma, group))[0]


def test_constrained_sigma_examples():
    s = constrained_sigma(ConstrainedSigmaParams(1.0, 0.0, 0.0))
    assert np.allclose(s.data, np.diag([1, 0, 0, 0]))
    s = constrained_sigma(ConstrainedSigmaParams(0.25, 0.25, 0.25))
    expected = np.array([[0.25, 0, 0, 0.25], [0, 0.25, 0, 0], [0, 0, 0.25, 0], [0.25, 0, 0, 0.25]])
    assert np.allclose(s.data, expected)
    assert np.linalg.eigvalsh(s.data)[0] > -1e-15
    assert abs(np.linalg.eigvalsh(partial_transpose(s, 1))[0]) < 1e-12
    s = constrained_sigma(ConstrainedSigmaParams(*published.SIGMA_XYZ))
    ok, lam = is_ppt(s)
    assert ok and abs(lam) < 1e-12
    assert is_invariant(s, w_ab_symmetry_group())


def test_constrained_sigma_always_on_boundary(rng):
    count = 0
    while count < 1000:
        x, y, z, u = rng.dirichlet(np.ones(4))
        if x * u < y * z:
            continue
        count += 1
        s = constrained_sigma(ConstrainedSigmaParams(x, y, z))
        lam = np.linalg.eigvalsh(partial_transpose(s, 1))[0]
        assert -1e-12 <= lam <= 1e-12


def test_constrained_params_domain():
    with pytest.raises(ValueError):
        ConstrainedSigmaParams(-0.1, 0.2, 0.3)
    with pytest.raises(ValueError):
        ConstrainedSigmaParams(0.5, 0.4, 0.3)
    p = ConstrainedSigmaParams(0.1, 0.2, 0.3)
    assert p.u == pytest.approx(0.4) and p.v == pytest.approx(np.sqrt(0.06)) and p.w == 0.0
