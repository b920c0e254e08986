"""Von Neumann entropy, quantum relative entropy and closed-form W-family values.

All quantities are in bits. A relative entropy that diverges because the
support of ``rho`` is not contained in the support of ``sigma`` is returned
as ``math.inf`` and never as a large finite number.
"""
from __future__ import annotations

import math

import numpy as np

from .qlinalg import (
    PSD_TOL,
    SUPPORT_CUTOFF,
    DensityMatrix,
    DimensionError,
    ValidationError,
    log2_on_support,
)

SUPPORT_TOL = 1e-10


def _xlog2x(p: float) -> float:
    return 0.0 if p <= 0.0 else p * math.log2(p)


def _entropy_of_spectrum(values) -> float:
    values = np.asarray(values, dtype=float)
    pos = values[values > 0.0]
    return float(-np.sum(pos * np.log2(pos)))


def von_neumann(rho: DensityMatrix) -> float:
    """``-tr(rho log2 rho)`` with the convention ``0 log 0 = 0``."""
    if not isinstance(rho, DensityMatrix):
        raise ValidationError("von_neumann expects a DensityMatrix")
    s = _entropy_of_spectrum(np.linalg.eigvalsh(rho.data))
    return min(max(s, 0.0), math.log2(rho.dim))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy ``S(rho || sigma)`` in bits.

    Returns ``math.inf`` when ``tr(P_perp rho) > 1e-10``, where ``P_perp``
    projects onto the kernel of ``sigma``.
    """
    if rho.dims != sigma.dims:
        raise DimensionError(f"dims differ: {rho.dims} vs {sigma.dims}")
    return relative_entropy_array(rho.data, sigma.data)


def relative_entropy_array(rho: np.ndarray, sigma: np.ndarray) -> float:
    log_sigma, support = log2_on_support(sigma, SUPPORT_CUTOFF)
    leak = float(np.trace(rho).real - np.vdot(support, rho).real)
    if leak > SUPPORT_TOL:
        return math.inf
    lam = np.linalg.eigvalsh(rho)
    if lam[0] < -PSD_TOL:
        raise ValidationError(f"rho is not positive semidefinite (min eigenvalue {lam[0]:.3e})")
    neg_entropy = -_entropy_of_spectrum(lam)
    cross = float(np.vdot(log_sigma, rho).real)
    return max(neg_entropy - cross, 0.0)


def _check_f2(f2: float, *, open_left: bool = False, open_right: bool = False) -> None:
    lo_ok = f2 > 0 if open_left else f2 >= 0
    hi_ok = f2 < 0.5 if open_right else f2 <= 0.5
    if not (lo_ok and hi_ok):
        raise ValueError(f"f2={f2!r} outside the admissible range")


def binary_entropy(p: float) -> float:
    return -_xlog2x(p) - _xlog2x(1.0 - p)


def es_bc_closed_form(f2: float) -> float:
    """Relative entropy of entanglement of the W-family BC reduction.

    ``2 (f2 - 1) log2(1 - f2) + (1 - 2 f2) log2(1 - 2 f2)``
    """
    _check_f2(f2)
    return -2.0 * _xlog2x(1.0 - f2) + _xlog2x(1.0 - 2.0 * f2)


def s_bc_closed_form(f2: float) -> float:
    _check_f2(f2)
    return -_xlog2x(1.0 - 2.0 * f2) - _xlog2x(2.0 * f2)


def s_ab_closed_form(f2: float) -> float:
    _check_f2(f2)
    return binary_entropy(f2)


def necnew_rhs(f2: float) -> float:
    """Value of ``E_S(rho_AB)`` that balances the AB and BC accounting.

    ``(f2 - 1) log2(1 - f2) - 2 f2 log2(2 f2) + f2 log2(f2)``; equal to
    ``es_bc + s_bc - s_ab`` at the same ``f2``.
    """
    _check_f2(f2, open_left=True)
    return -_xlog2x(1.0 - f2) - _xlog2x(2.0 * f2) + _xlog2x(f2)
