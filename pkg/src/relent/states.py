"""Three-qubit state families and their two-party reductions.

Party A is the most significant qubit, so basis index ``4a + 2b + c``
labels ``|abc>``. All family amplitudes are real and non-negative.

Two families are provided:

* the W-type family ``e|000> + f|101> + f|110>`` with ``e^2 + 2 f^2 = 1``;
* the Lambda family ``a|000> + b(|100> + |101> + |110> + |111>)`` with
  ``a^2 + 4 b^2 = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qlinalg import DensityMatrix, partial_trace

NORM_TOL = 1e-12
PAIRS = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over a tensor product of parties."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        dims = tuple(int(d) for d in self.dims)
        if amp.size != int(np.prod(dims)):
            raise ValueError(f"{amp.size} amplitudes do not match dims {dims}")
        norm2 = float(np.vdot(amp, amp).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm2!r})")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", dims)

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix.from_ket(self.amplitudes, self.dims)

    def reduced(self, keep) -> DensityMatrix:
        return partial_trace(self.density_matrix(), keep)


@dataclass(frozen=True)
class StateFamilyParams:
    """Real amplitudes for one of the two families.

    Use :meth:`w` or :meth:`lambda_` to build from squared amplitudes, which
    is how the command line takes them.
    """

    family: str
    first: float
    second: float

    def __post_init__(self):
        if self.family not in ("w", "lambda"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.first < 0 or self.second < 0:
            raise ValueError("amplitudes must be real and non-negative")
        weight = 2.0 if self.family == "w" else 4.0
        norm2 = self.first ** 2 + weight * self.second ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"{self.family} family normalization violated: {norm2!r}")

    @classmethod
    def w(cls, f2: float | None = None, e2: float | None = None) -> "StateFamilyParams":
        """W-type family from ``f^2`` (``e^2`` derived) or from both squares."""
        if f2 is None and e2 is None:
            raise ValueError("need f2 or e2")
        if f2 is None:
            f2 = (1.0 - e2) / 2.0
        if e2 is None:
            e2 = 1.0 - 2.0 * f2
        if e2 < 0 or f2 < 0:
            raise ValueError(f"squared amplitudes must be non-negative (e2={e2}, f2={f2})")
        return cls("w", math.sqrt(e2), math.sqrt(f2))

    @classmethod
    def lambda_(cls, a2: float | None = None, b2: float | None = None) -> "StateFamilyParams":
        if a2 is None and b2 is None:
            raise ValueError("need a2 or b2")
        if b2 is None:
            b2 = (1.0 - a2) / 4.0
        if a2 is None:
            a2 = 1.0 - 4.0 * b2
        if a2 < 0 or b2 < 0:
            raise ValueError(f"squared amplitudes must be non-negative (a2={a2}, b2={b2})")
        return cls("lambda", math.sqrt(a2), math.sqrt(b2))

    @property
    def e(self) -> float:
        self._expect("w")
        return self.first

    @property
    def f(self) -> float:
        self._expect("w")
        return self.second

    @property
    def a(self) -> float:
        self._expect("lambda")
        return self.first

    @property
    def b(self) -> float:
        self._expect("lambda")
        return self.second

    def _expect(self, family):
        if self.family != family:
            raise ValueError(f"expected {family} parameters, got {self.family}")


def _pair(pair: str) -> tuple[int, int]:
    try:
        return PAIRS[pair.upper()]
    except (KeyError, AttributeError):
        raise ValueError(f"pair must be one of {sorted(PAIRS)}, got {pair!r}") from None


def w_state(params: StateFamilyParams) -> PureState:
    """``e|000> + f|101> + f|110>``."""
    amp = np.zeros(8)
    amp[0b000] = params.e
    amp[0b101] = params.f
    amp[0b110] = params.f
    return PureState(amp, (2, 2, 2))


def w_reduced(params: StateFamilyParams, pair: str) -> DensityMatrix:
    """Closed-form two-qubit reduction of :func:`w_state`.

    AB and AC share one matrix; BC is block diagonal with a triplet-like
    middle block.
    """
    _pair(pair)
    e, f = params.e, params.f
    m = np.zeros((4, 4))
    if pair.upper() in ("AB", "AC"):
        m[0, 0] = e * e
        m[0, 3] = m[3, 0] = e * f
        m[2, 2] = f * f
        m[3, 3] = f * f
    else:
        m[0, 0] = e * e
        m[1:3, 1:3] = f * f
    return DensityMatrix(m, (2, 2))


def lambda_state(params: StateFamilyParams) -> PureState:
    """``a|000> + b(|100> + |101> + |110> + |111>)``."""
    amp = np.zeros(8)
    amp[0b000] = params.a
    amp[0b100:] = params.b
    return PureState(amp, (2, 2, 2))


def lambda_reduced(params: StateFamilyParams, pair: str) -> DensityMatrix:
    _pair(pair)
    a, b = params.a, params.b
    if pair.upper() in ("AB", "AC"):
        m = np.array([
            [a * a, 0, a * b, a * b],
            [0, 0, 0, 0],
            [a * b, 0, 2 * b * b, 2 * b * b],
            [a * b, 0, 2 * b * b, 2 * b * b],
        ])
    else:
        # a^2 |00><00| + 4 b^2 |++><++|
        plus = np.full(4, 0.5)
        m = 4 * b * b * np.outer(plus, plus)
        m[0, 0] += a * a
    return DensityMatrix(m, (2, 2))


def reduced(psi: PureState, pair: str) -> DensityMatrix:
    """Two-party reduction of a three-party state by pair label."""
    return psi.reduced(_pair(pair))


def ghz() -> PureState:
    amp = np.zeros(8)
    amp[0] = amp[7] = 1 / math.sqrt(2)
    return PureState(amp, (2, 2, 2))


def epr() -> PureState:
    amp = np.zeros(4)
    amp[0] = amp[3] = 1 / math.sqrt(2)
    return PureState(amp, (2, 2))


def family_state(family: str, params: StateFamilyParams | None = None) -> PureState:
    """Look up a constructor by its command-line name."""
    family = family.lower()
    if family == "w":
        return w_state(params)
    if family == "lambda":
        return lambda_state(params)
    if family == "ghz":
        return ghz()
    if family == "epr":
        return epr()
    raise ValueError(f"unknown family {family!r}")
