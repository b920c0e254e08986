"""Entanglement accounting for tripartite pure states.

If a tripartite pure state is made reversibly from GHZ states (``g`` per
copy) and EPR pairs (``s_ij`` per copy on pair ``ij``), then

    E(rho_ij) = s_ij
    S(rho_A)  = g + s_AB + s_AC
    S(rho_B)  = g + s_AB + s_BC
    S(rho_C)  = g + s_AC + s_BC

with ``E`` the regularised relative entropy of entanglement. Regularised
values are out of reach numerically, so every audit here plugs in
single-copy values and is reported as conditional on asymptotic
additivity.
"""
from __future__ import annotations

import math
import threading
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import necnew_rhs, von_neumann
from .qlinalg import DensityMatrix, is_ppt, partial_trace, trace_norm
from .reeopt import MixtureAnsatz, OptimizerConfig, ree_mixture
from .states import PureState, StateFamilyParams, lambda_state, reduced

PARTIES = ("A", "B", "C")
PAIR_LABELS = ("AB", "AC", "BC")
OPTIMIZER_TOL = 1e-3
CLOSED_FORM_TOL = 1e-9
CONDITIONAL_NOTE = ("single-copy relative entropies stand in for regularised ones; "
                    "conclusions are conditional on asymptotic additivity")
UPPER_BOUND_NOTE = ("optimizer values are upper bounds on E_S; a gap within tolerance is "
                    "consistent with additivity but does not prove it")


@dataclass(frozen=True)
class ContinuityInput:
    """Trace distance between two states and the joint Hilbert-space dimension."""

    delta: float
    dim: int

    def __post_init__(self):
        if not (self.delta >= 0):
            raise ValueError(f"delta must be non-negative, got {self.delta!r}")
        if self.delta > 1.0:
            raise ValueError("delta above 1 leaves the range where the bound is monotone")
        if self.dim < 2:
            raise ValueError(f"dim must be at least 2, got {self.dim!r}")


def continuity_bound(inp: ContinuityInput) -> float:
    """``2 log2(dim) D - 2 D log2(D) + 4 D`` for trace distance ``D``.

    Bounds ``|E_S(rho1) - E_S(rho2)|``; ``dim`` is the dimension of the
    joint (bipartite) Hilbert space.
    """
    d = inp.delta
    if d == 0.0:
        return 0.0
    return 2.0 * math.log2(inp.dim) * d - 2.0 * d * math.log2(d) + 4.0 * d


def continuity_bound_between(rho1: DensityMatrix, rho2: DensityMatrix) -> tuple[float, float]:
    """Trace distance and continuity bound for two states on the same space."""
    if rho1.dims != rho2.dims:
        raise ValueError(f"dims differ: {rho1.dims} vs {rho2.dims}")
    delta = trace_norm(rho1.data - rho2.data)
    return delta, continuity_bound(ContinuityInput(min(delta, 1.0), rho1.dim))


@dataclass
class MregsReport:
    """Result of :func:`mregs_balance`.

    ``residuals`` are ordered A, B, C: ``S(rho_i) - g - s_ij - s_ik``.
    ``party_g`` is the GHZ yield each equation alone would give; its spread
    is the imbalance between the equations.
    """

    S_A: float
    S_B: float
    S_C: float
    E_AB: float
    E_AC: float
    E_BC: float
    methods: dict
    g: float
    s_AB: float
    s_AC: float
    s_BC: float
    residuals: tuple
    party_g: tuple
    imbalance: float
    tolerance: float
    consistent: bool
    feasible: bool
    pure_cut_checks: dict = field(default_factory=dict)
    note: str = CONDITIONAL_NOTE

    def to_dict(self) -> dict:
        out = asdict(self)
        out["residuals"] = list(self.residuals)
        out["party_g"] = list(self.party_g)
        return out


def _pair_value(entry):
    if isinstance(entry, (tuple, list)):
        value, method = entry
    else:
        value, method = entry, "supplied"
    return float(value), str(method)


def mregs_balance(psi: PureState, e_values: dict, tol: float | None = None) -> MregsReport:
    """Solve the GHZ/EPR accounting for one tripartite pure state.

    Parameters
    ----------
    psi : PureState
        Three-party pure state.
    e_values : dict
        Maps ``"AB"``, ``"AC"``, ``"BC"`` to an entanglement value in bits,
        or to ``(value, method_tag)``.
    tol : float, optional
        Consistency tolerance on the residuals. Defaults to 1e-9 when every
        method tag is ``"closed-form"`` and 1e-3 otherwise.

    Notes
    -----
    ``s_ij`` is set to ``E_ij`` and the single unknown ``g`` is the least
    squares solution of the three entropy equations, i.e. the mean of the
    per-party estimates.
    """
    if len(psi.dims) != 3:
        raise ValueError(f"expected a three-party state, got dims {psi.dims}")
    missing = set(PAIR_LABELS) - set(e_values)
    if missing:
        raise ValueError(f"missing entanglement values for {sorted(missing)}")
    vals, methods = {}, {}
    for pair in PAIR_LABELS:
        vals[pair], methods[pair] = _pair_value(e_values[pair])
    if tol is None:
        tol = CLOSED_FORM_TOL if all(m == "closed-form" for m in methods.values()) else OPTIMIZER_TOL

    rho = psi.density_matrix()
    S = [von_neumann(partial_trace(rho, [i])) for i in range(3)]
    touching = {0: ("AB", "AC"), 1: ("AB", "BC"), 2: ("AC", "BC")}
    party_g = [S[i] - vals[a] - vals[b] for i, (a, b) in touching.items()]
    g = float(np.mean(party_g))
    residuals = tuple(float(pg - g) for pg in party_g)

    pure_checks = {}
    for pair, keep in zip(PAIR_LABELS, ((0, 1), (0, 2), (1, 2))):
        rho_ij = partial_trace(rho, keep)
        purity = float(np.vdot(rho_ij.data, rho_ij.data).real)
        if abs(purity - 1.0) < 1e-10:
            expected = von_neumann(partial_trace(rho, [keep[0]]))
            pure_checks[pair] = {"expected": expected, "ok": abs(vals[pair] - expected) <= tol}

    consistent = max(abs(r) for r in residuals) <= tol and g >= -tol
    return MregsReport(
        S_A=S[0], S_B=S[1], S_C=S[2],
        E_AB=vals["AB"], E_AC=vals["AC"], E_BC=vals["BC"],
        methods=methods,
        g=g, s_AB=vals["AB"], s_AC=vals["AC"], s_BC=vals["BC"],
        residuals=residuals,
        party_g=tuple(float(x) for x in party_g),
        imbalance=float(max(party_g) - min(party_g)),
        tolerance=tol,
        consistent=bool(consistent and all(c["ok"] for c in pure_checks.values())),
        feasible=g >= -tol,
        pure_cut_checks=pure_checks,
    )


def necessary_residual(f2: float, es_ab: float) -> float:
    """``es_ab`` minus the value the W-family balance requires.

    Positive means the supplied ``E_S(rho_AB)`` is too large for the AB and
    BC equations to hold together.
    """
    if not 0.0 < f2 < 0.5:
        raise ValueError(f"f2 must lie in (0, 1/2), got {f2!r}")
    return es_ab - necnew_rhs(f2)


def lambda_prediction(a2: float) -> float:
    """``S(rho_BC) - S(rho_AB)`` for the Lambda family.

    This is the value ``E_S^reg(rho_AB)`` would be forced to take if
    GHZ and EPR states generated the family reversibly; it is a conditional
    prediction, not a computed entanglement.
    """
    params = StateFamilyParams.lambda_(a2=a2)
    psi = lambda_state(params)
    rho_bc = reduced(psi, "BC")
    ok, lam_min = is_ppt(rho_bc, 1)
    if not ok:
        raise ValueError(f"rho_BC is not PPT (min eigenvalue {lam_min:.3e}); prediction undefined")
    return von_neumann(rho_bc) - von_neumann(reduced(psi, "AB"))


@dataclass
class LambdaAudit:
    a2: float
    b2: float
    prediction: float
    upper_bound: float
    gap: float
    bc_ppt: bool
    bc_min_pt_eigenvalue: float
    ab_ppt: bool
    ab_min_pt_eigenvalue: float
    converged: bool
    method: str = "mixture"
    note: str = CONDITIONAL_NOTE

    def to_dict(self) -> dict:
        return asdict(self)


def lambda_audit(a2: float, config: OptimizerConfig | None = None) -> LambdaAudit:
    """Compare the conditional prediction with an optimizer upper bound on ``E_S(rho_AB)``.

    ``gap = upper_bound - prediction``.
    """
    params = StateFamilyParams.lambda_(a2=a2)
    psi = lambda_state(params)
    bc_ok, bc_min = is_ppt(reduced(psi, "BC"), 1)
    rho_ab = reduced(psi, "AB")
    ab_ok, ab_min = is_ppt(rho_ab, 1)
    prediction = lambda_prediction(a2)
    res = ree_mixture(rho_ab, config)
    return LambdaAudit(
        a2=a2, b2=params.b ** 2,
        prediction=prediction,
        upper_bound=res.value,
        gap=res.value - prediction,
        bc_ppt=bc_ok, bc_min_pt_eigenvalue=bc_min,
        ab_ppt=ab_ok, ab_min_pt_eigenvalue=ab_min,
        converged=res.converged,
    )


def two_copy_state(rho: DensityMatrix) -> DensityMatrix:
    """``rho (x) rho`` regrouped as ``(A1 A2)(B1 B2)``."""
    if len(rho.dims) != 2:
        raise ValueError("two_copy_state needs a bipartite state")
    da, db = rho.dims
    t = np.kron(rho.data, rho.data).reshape(da, db, da, db, da, db, da, db)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = (da * db) ** 2
    return DensityMatrix(t.reshape(n, n), (da * da, db * db))


def _fit_components(ansatz: MixtureAnsatz, k: int) -> MixtureAnsatz:
    """Trim or pad a warm start to exactly ``k`` components."""
    w, a, b = ansatz.weights, ansatz.local_a, ansatz.local_b
    order = np.argsort(-w, kind="stable")
    if w.size >= k:
        idx = order[:k]
        w2 = w[idx]
        return MixtureAnsatz(w2 / w2.sum(), a[idx], b[idx])
    extra = np.resize(order, k - w.size)
    w2 = np.concatenate([w, np.full(extra.size, 1e-9)])
    return MixtureAnsatz(w2 / w2.sum(), np.vstack([a, a[extra]]), np.vstack([b, b[extra]]))


@dataclass
class AdditivityReport:
    gap: float
    single_copy: float
    two_copy: float
    single_components: int
    two_copy_components: int
    converged: bool
    tolerance: float
    regrouping: str = "(A1 A2)(B1 B2)"
    method: str = "mixture"
    note: str = UPPER_BOUND_NOTE

    def to_dict(self) -> dict:
        return asdict(self)


def additivity_check(rho: DensityMatrix, copies: int = 2, config: OptimizerConfig | None = None,
                     stop: threading.Event | None = None, tol: float = 1e-3) -> AdditivityReport:
    """Two-copy additivity probe: ``E(rho (x) rho) - 2 E(rho)`` from the mixture search.

    The single-copy search uses ``isqrt`` of the two-copy component count so
    that the tensor square of its closest state fits the two-copy layout;
    that product seeds restart 0 of the two-copy search, which therefore
    never ends above twice the single-copy value.
    """
    if copies != 2:
        raise ValueError("only two copies are supported")
    config = config or OptimizerConfig()
    da, db = rho.dims
    k2 = config.components_for((da * da, db * db))
    k1 = max(da * db, math.isqrt(k2))
    single = ree_mixture(rho, _with(config, mixture_size=k1), stop=stop)
    warm = _fit_components(single.ansatz.tensor(single.ansatz), k2)
    double = ree_mixture(two_copy_state(rho), _with(config, mixture_size=k2), initial=warm, stop=stop)
    return AdditivityReport(
        gap=double.value - 2.0 * single.value,
        single_copy=single.value,
        two_copy=double.value,
        single_components=k1,
        two_copy_components=k2,
        converged=single.converged and double.converged,
        tolerance=tol,
    )


def additivity_gap(rho: DensityMatrix, copies: int = 2, config: OptimizerConfig | None = None,
                   stop: threading.Event | None = None) -> float:
    """Signed two-copy gap in bits; negative values point to subadditivity."""
    return additivity_check(rho, copies, config, stop).gap


def _with(config: OptimizerConfig, **changes) -> OptimizerConfig:
    data = config.to_dict()
    data.update(changes)
    return OptimizerConfig(**data)
