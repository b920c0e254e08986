"""Finite symmetry groups acting on bipartite density matrices, and twirling.

A group element acts on an operator as ``s -> U s^T U^dag`` (transposing
elements) or ``s -> U s U^dag``. Transposition is taken in the
computational product basis; for the real states used here it coincides
with complex conjugation, so the two are treated as one symmetry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qlinalg import DensityMatrix, DimensionError, partial_transpose_array

UNITARY_TOL = 1e-12
CLOSURE_TOL = 1e-10

LOCAL_PAIR = "local-unitary-pair"
GLOBAL_UNITARY = "global-unitary"
GLOBAL_TRANSPOSITION = "global-transposition"
_KINDS = (LOCAL_PAIR, GLOBAL_UNITARY, GLOBAL_TRANSPOSITION)

PAULI_Z = np.diag([1.0, -1.0])


@dataclass(frozen=True, eq=False)
class SymmetryElement:
    """One symmetry operation.

    ``matrices`` holds ``(U, V)`` for a local pair, ``(U,)`` for a global
    unitary and is empty for a bare transposition. ``transpose`` marks
    elements that transpose the operator before the unitary conjugation;
    it is always set for the ``global-transposition`` kind.
    """

    kind: str
    matrices: tuple = ()
    transpose: bool = False
    label: str = ""
    unitary: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown symmetry kind {self.kind!r}")
        mats = tuple(np.asarray(m, dtype=complex) for m in self.matrices)
        for m in mats:
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise DimensionError("symmetry matrices must be square")
            err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
            if err > UNITARY_TOL:
                raise ValueError(f"matrix is not unitary (deviation {err:.2e})")
        if self.kind == LOCAL_PAIR:
            if len(mats) != 2:
                raise ValueError("a local pair needs exactly two unitaries")
            full = np.kron(mats[0], mats[1])
        elif self.kind == GLOBAL_UNITARY:
            if len(mats) != 1:
                raise ValueError("a global unitary needs exactly one matrix")
            full = mats[0]
        else:
            if mats:
                raise ValueError("a transposition carries no matrices")
            object.__setattr__(self, "transpose", True)
            full = None
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "unitary", full)

    def full_unitary(self, dim: int) -> np.ndarray:
        if self.unitary is None:
            return np.eye(dim, dtype=complex)
        if self.unitary.shape[0] != dim:
            raise DimensionError(f"element acts on dimension {self.unitary.shape[0]}, not {dim}")
        return self.unitary

    def apply(self, a: np.ndarray) -> np.ndarray:
        u = self.full_unitary(a.shape[0])
        if self.transpose:
            a = a.T
        return u @ a @ u.conj().T

    @property
    def is_transposing(self) -> bool:
        return self.transpose


def _compose(g: SymmetryElement, h: SymmetryElement, dim: int) -> SymmetryElement:
    """Element acting as ``g(h(.))``."""
    ug, uh = g.full_unitary(dim), h.full_unitary(dim)
    # (U_h s U_h^dag)^T = conj(U_h) s^T U_h^T
    u = ug @ (uh.conj() if g.transpose else uh)
    t = g.transpose != h.transpose
    return SymmetryElement(GLOBAL_UNITARY, (u,), transpose=t, label=f"{g.label}*{h.label}")


def _same_action(g: SymmetryElement, h: SymmetryElement, dim: int, tol: float = CLOSURE_TOL) -> bool:
    if g.transpose != h.transpose:
        return False
    ug, uh = g.full_unitary(dim), h.full_unitary(dim)
    overlap = np.vdot(ug, uh) / dim
    if abs(abs(overlap) - 1.0) > tol:
        return False
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(uh - phase * ug)) <= tol)


class SymmetryGroup:
    """Finite group of symmetry elements acting on operators of side ``dim``.

    The element list must already be closed under composition and contain
    the identity; both are verified here and a :class:`ValueError` is raised
    otherwise. Use :meth:`generated_by` to close a set of generators.
    """

    def __init__(self, elements, dim: int):
        self.elements = tuple(elements)
        self.dim = int(dim)
        if not self.elements:
            raise ValueError("a group needs at least the identity")
        for g in self.elements:
            g.full_unitary(self.dim)
        identity = SymmetryElement(GLOBAL_UNITARY, (np.eye(self.dim),), label="I")
        if not any(_same_action(g, identity, self.dim) for g in self.elements):
            raise ValueError("group does not contain the identity")
        for g in self.elements:
            for h in self.elements:
                gh = _compose(g, h, self.dim)
                if not any(_same_action(gh, k, self.dim) for k in self.elements):
                    raise ValueError(f"group is not closed: {g.label or g.kind} * {h.label or h.kind}")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @classmethod
    def generated_by(cls, generators, dim: int, max_order: int = 4096) -> "SymmetryGroup":
        identity = SymmetryElement(GLOBAL_UNITARY, (np.eye(dim),), label="I")
        elements = [identity]
        frontier = [identity]
        while frontier:
            fresh = []
            for g in frontier:
                for h in generators:
                    gh = _compose(h, g, dim)
                    if not any(_same_action(gh, k, dim) for k in elements):
                        elements.append(gh)
                        fresh.append(gh)
            if len(elements) > max_order:
                raise ValueError("generated group exceeds max_order; is it finite?")
            frontier = fresh
        return cls(elements, dim)


def twirl(sigma: DensityMatrix, group: SymmetryGroup) -> DensityMatrix:
    """Uniform average of ``g(sigma)`` over the group."""
    if sigma.dim != group.dim:
        raise DimensionError(f"state dimension {sigma.dim} does not match group dimension {group.dim}")
    acc = np.zeros_like(sigma.data)
    for g in group:
        acc = acc + g.apply(sigma.data)
    return DensityMatrix(acc / len(group), sigma.dims)


def twirl_array(a: np.ndarray, group: SymmetryGroup) -> np.ndarray:
    return sum(g.apply(a) for g in group) / len(group)


def is_invariant(rho: DensityMatrix, group: SymmetryGroup, tol: float = 1e-10) -> bool:
    if rho.dim != group.dim:
        raise DimensionError(f"state dimension {rho.dim} does not match group dimension {group.dim}")
    return all(np.max(np.abs(g.apply(rho.data) - rho.data)) <= tol for g in group)


def local_zz_group() -> SymmetryGroup:
    """``{I, Z x Z}`` on two qubits."""
    zz = SymmetryElement(LOCAL_PAIR, (PAULI_Z, PAULI_Z), label="ZZ")
    return SymmetryGroup.generated_by([zz], 4)


def w_ab_symmetry_group() -> SymmetryGroup:
    """Symmetries of the W-family AB reduction.

    Generated by the local ``Z x Z``, the non-local sign flip
    ``diag(1, 1, -1, 1)`` and transposition; eight elements in total.
    """
    zz = SymmetryElement(LOCAL_PAIR, (PAULI_Z, PAULI_Z), label="ZZ")
    w = SymmetryElement(GLOBAL_UNITARY, (np.diag([1.0, 1.0, -1.0, 1.0]),), label="W")
    t = SymmetryElement(GLOBAL_TRANSPOSITION, label="T")
    return SymmetryGroup.generated_by([zz, w, t], 4)


@dataclass(frozen=True)
class ConstrainedSigmaParams:
    """Diagonal weights of the symmetric, boundary-PPT two-qubit family.

    ``u = 1 - x - y - z`` and the corner coherence ``v = sqrt(y z)``.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        if min(self.x, self.y, self.z) < 0 or self.x + self.y + self.z > 1.0 + 1e-15:
            raise ValueError(f"(x, y, z) = ({self.x}, {self.y}, {self.z}) outside the simplex")

    @property
    def u(self) -> float:
        return max(1.0 - self.x - self.y - self.z, 0.0)

    @property
    def v(self) -> float:
        return math.sqrt(self.y * self.z)

    @property
    def w(self) -> float:
        return 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


def constrained_sigma_array(x: float, y: float, z: float) -> np.ndarray:
    u = 1.0 - x - y - z
    v = math.sqrt(y * z)
    return np.array([
        [x, 0.0, 0.0, v],
        [0.0, y, 0.0, 0.0],
        [0.0, 0.0, z, 0.0],
        [v, 0.0, 0.0, u],
    ])


def constrained_sigma(params: ConstrainedSigmaParams) -> DensityMatrix:
    """``[[x,0,0,v],[0,y,0,0],[0,0,z,0],[v,0,0,u]]`` with ``v = sqrt(y z)``.

    The partial transpose has the block ``[[y, v], [v, z]]`` with zero
    determinant, so it sits exactly on the PPT boundary.
    """
    return DensityMatrix(constrained_sigma_array(*params.as_tuple()), (2, 2))


def pt_min_eigenvalue(a: np.ndarray, dims=(2, 2), sys: int = 1) -> float:
    pt = partial_transpose_array(a, dims, sys)
    return float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])
