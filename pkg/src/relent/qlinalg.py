"""Dense Hermitian linear algebra for small multipartite density matrices.

Everything here works on plain ``numpy`` arrays of side at most 64. The
:class:`DensityMatrix` container carries the subsystem dimensions next to
the entries and validates the usual invariants (Hermitian, unit trace,
positive semidefinite) on construction.

Logarithms are base 2 throughout the package.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12


class DimensionError(ValueError):
    """Raised when matrix shapes or subsystem dimensions do not fit together."""


class ValidationError(ValueError):
    """Raised when a matrix violates a required invariant."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator on a tensor product.

    Parameters
    ----------
    data : ndarray
        Square complex array of side ``prod(dims)``.
    dims : tuple of int
        Subsystem dimensions, most significant factor first.
    """

    data: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"invalid subsystem dimensions {dims}")
        n = int(np.prod(dims))
        if data.shape != (n, n):
            raise DimensionError(f"shape {data.shape} does not match dims {dims}")
        herm_err = np.max(np.abs(data - data.conj().T)) if n else 0.0
        if herm_err > HERMITIAN_TOL:
            raise ValidationError(f"matrix is not Hermitian (max deviation {herm_err:.3e})")
        tr = np.trace(data).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr!r}, expected 1")
        data = 0.5 * (data + data.conj().T)
        lam_min = np.linalg.eigvalsh(data)[0]
        if lam_min < -PSD_TOL:
            raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_ket(cls, amplitudes, dims: Sequence[int]) -> "DensityMatrix":
        psi = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(np.outer(psi, psi.conj()), tuple(dims))

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "re": self.data.real.tolist(),
            "im": self.data.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DensityMatrix":
        try:
            dims = payload["dims"]
            re = np.asarray(payload["re"], dtype=float)
            im = np.asarray(payload["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed matrix payload: {exc}") from exc
        if re.shape != im.shape:
            raise DimensionError(f"re/im shapes differ: {re.shape} vs {im.shape}")
        return cls(re + 1j * im, tuple(dims))

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.data, other.data)


def load_density_matrix(path) -> DensityMatrix:
    """Read a density matrix stored in the ``{"dims", "re", "im"}`` JSON layout."""
    with open(Path(path)) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return DensityMatrix.from_dict(payload)


def save_density_matrix(rho: DensityMatrix, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(rho.to_dict(), fh)


def _as_square(a) -> np.ndarray:
    a = np.asarray(a.data if isinstance(a, DensityMatrix) else a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` with ``a`` as the most significant factor."""
    return np.kron(_as_square(a), _as_square(b))


def _check_subsystems(dims: Sequence[int], idx: Iterable[int]) -> list[int]:
    idx = list(idx)
    for i in idx:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < len(dims):
            raise ValueError(f"subsystem index {i!r} out of range for dims {tuple(dims)}")
    return idx


def partial_trace_array(a: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    keep = sorted(set(_check_subsystems(dims, keep)))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    n = len(dims)
    if n > 13:
        raise DimensionError("too many subsystems")
    letters = string.ascii_letters
    row = list(letters[:n])
    col = [letters[n + i] if i in keep else row[i] for i in range(n)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    spec = "".join(row) + "".join(col) + "->" + "".join(out)
    t = np.einsum(spec, a.reshape(tuple(dims) * 2))
    m = int(np.prod([dims[i] for i in keep]))
    return t.reshape(m, m)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep`` (order of ``rho.dims``)."""
    keep = sorted(set(_check_subsystems(rho.dims, keep)))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    reduced = partial_trace_array(rho.data, rho.dims, keep)
    return DensityMatrix(reduced, tuple(rho.dims[i] for i in keep))


def partial_transpose_array(a: np.ndarray, dims: Sequence[int], sys: int) -> np.ndarray:
    _check_subsystems(dims, [sys])
    n = len(dims)
    if int(np.prod(dims)) != a.shape[0]:
        raise DimensionError(f"dims {tuple(dims)} do not match shape {a.shape}")
    t = a.reshape(tuple(dims) * 2)
    t = np.swapaxes(t, sys, n + sys)
    return t.reshape(a.shape)


def partial_transpose(rho, sys: int, dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose the tensor factor ``sys`` in the computational product basis.

    ``rho`` may be a :class:`DensityMatrix` or a bare array together with
    ``dims``. The result is returned as an array because it need not be
    positive.
    """
    if isinstance(rho, DensityMatrix):
        return partial_transpose_array(rho.data, rho.dims, sys)
    if dims is None:
        raise ValueError("dims are required for bare arrays")
    return partial_transpose_array(_as_square(rho), dims, sys)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and matching orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def _jacobi_eigh(h: np.ndarray, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix."""
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a[offdiag])
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns p, q of the unitary diag(1, conj(phase)) @ [[c, s], [-s, c]]
                gp = np.array([c, -s * np.conj(phase)])
                gq = np.array([s, c * np.conj(phase)])
                cols = a[:, [p, q]]
                new_p = cols @ gp
                new_q = cols @ gq
                a[:, p] = new_p
                a[:, q] = new_q
                rows = a[[p, q], :]
                a[p, :] = gp.conj() @ rows
                a[q, :] = gq.conj() @ rows
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vcols = v[:, [p, q]]
                v[:, p] = vcols @ gp
                v[:, q] = vcols @ gq
    values = np.diag(a).real
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def herm_eigensystem(h, method: str = "lapack", tol: float = 1e-10) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with ascending eigenvalues.

    Parameters
    ----------
    h : array_like or DensityMatrix
        Hermitian matrix (deviation from Hermiticity at most ``tol``).
    method : {"lapack", "jacobi"}
        ``"lapack"`` calls :func:`numpy.linalg.eigh`; ``"jacobi"`` runs the
        package's own cyclic Jacobi rotations, kept as an independent path.
    """
    a = _as_square(h).astype(complex)
    if a.size and np.max(np.abs(a - a.conj().T)) > tol:
        raise ValidationError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
    elif method == "jacobi":
        w, v = _jacobi_eigh(a)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return EigenSystem(w, v)


def trace_norm(a) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(_as_square(a), compute_uv=False)))


def log2_on_support(h, cutoff: float = SUPPORT_CUTOFF) -> tuple[np.ndarray, np.ndarray]:
    """Base-2 matrix logarithm restricted to the support of a PSD matrix.

    Eigenvalues at or below ``cutoff`` are left out of the logarithm; the
    returned projector spans the remaining eigenvectors.

    Returns
    -------
    log_h : ndarray
        ``sum_i log2(l_i) |v_i><v_i|`` over eigenvalues ``l_i > cutoff``.
    support : ndarray
        Orthogonal projector onto the same eigenvectors.
    """
    es = herm_eigensystem(h)
    if es.values.size and es.values[0] < -PSD_TOL:
        raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {es.values[0]:.3e})")
    mask = es.values > cutoff
    vs = es.vectors[:, mask]
    log_h = (vs * np.log2(es.values[mask])) @ vs.conj().T
    return log_h, vs @ vs.conj().T


def is_ppt(rho: DensityMatrix, sys: int = 1, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Peres test: is the partial transpose on ``sys`` positive within ``tol``?

    Returns the flag together with the smallest eigenvalue of the partial
    transpose, unrounded.
    """
    pt = partial_transpose(rho, sys)
    lam_min = float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])
    return lam_min >= -tol, lam_min
