"""Minimizers for the relative entropy of entanglement.

Two routes are provided.

``ree_constrained``
    For two-qubit states with the W-family symmetries the closest separable
    state can be taken of the form ``constrained_sigma(x, y, z)``; the
    search runs over those three numbers with closed-form derivatives of
    the 2x2 corner block.

``ree_mixture``
    General bipartite route: ``sigma = sum_k p_k |a_k b_k><a_k b_k|`` with a
    fixed number of product components, searched by L-BFGS from several
    seeded starting points. Any such ``sigma`` is separable, so the value
    is an upper bound on the true minimum.

``stationarity_inverse`` goes the other way: it fixes ``sigma`` and solves
the (linear) stationarity equations for the state it is optimal for.
"""
from __future__ import annotations

import json
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from .entropy import relative_entropy, von_neumann
from .qlinalg import SUPPORT_CUTOFF, DensityMatrix, ValidationError
from .symmetry import (
    ConstrainedSigmaParams,
    constrained_sigma,
    constrained_sigma_array,
    is_invariant,
    pt_min_eigenvalue,
    w_ab_symmetry_group,
)

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
SIMPLEX_EPS = 1e-12
STALL_WINDOW = 50
STALL_TOL = 1e-10
GRAD_TOL = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for :func:`ree_mixture`.

    ``mixture_size=None`` means ``4 * d_A * d_B`` components.
    ``init_scale`` is the spread of the random starting logits; the
    L-BFGS line search picks the step lengths after that.
    """

    mixture_size: int | None = None
    restarts: int = 16
    max_iter: int = 5000
    value_tol: float = STALL_TOL
    stall_window: int = STALL_WINDOW
    grad_tol: float = GRAD_TOL
    init_scale: float = 0.1
    seed: int = 20011
    workers: int = 1

    def __post_init__(self):
        if self.mixture_size is not None and self.mixture_size < 1:
            raise ValueError("mixture_size must be positive")
        if self.restarts < 1 or self.max_iter < 1 or self.workers < 1:
            raise ValueError("restarts, max_iter and workers must be positive")
        if self.value_tol <= 0 or self.grad_tol <= 0 or self.stall_window < 1:
            raise ValueError("tolerances must be positive")

    def components_for(self, dims) -> int:
        da, db = dims
        m = 4 * da * db if self.mixture_size is None else self.mixture_size
        if m < da * db:
            raise ValueError(f"mixture_size {m} is below d_A*d_B = {da * db}")
        return m

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "OptimizerConfig":
        known = {k: payload[k] for k in cls.__dataclass_fields__ if k in payload}
        extra = set(payload) - set(known)
        if extra:
            raise ValueError(f"unknown optimizer settings: {sorted(extra)}")
        return cls(**known)

    @classmethod
    def from_json(cls, text: str) -> "OptimizerConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class MixtureAnsatz:
    """Separable state ``sum_k weights[k] |a_k><a_k| (x) |b_k><b_k|``.

    Rows of ``local_a`` / ``local_b`` are the (normalized) local pure
    states.
    """

    weights: np.ndarray
    local_a: np.ndarray
    local_b: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must form a probability vector")
        a = np.asarray(self.local_a, dtype=complex)
        b = np.asarray(self.local_b, dtype=complex)
        if a.shape[0] != w.size or b.shape[0] != w.size:
            raise ValueError("one local state per weight is required")
        for m in (a, b):
            if np.max(np.abs(np.linalg.norm(m, axis=1) - 1.0)) > 1e-12:
                raise ValueError("local states must be normalized")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "local_a", a)
        object.__setattr__(self, "local_b", b)

    @property
    def dims(self) -> tuple[int, int]:
        return self.local_a.shape[1], self.local_b.shape[1]

    def matrix(self) -> np.ndarray:
        psi = np.einsum("ki,kj->kij", self.local_a, self.local_b).reshape(self.weights.size, -1)
        return psi.T @ (self.weights[:, None] * psi.conj())

    def state(self) -> DensityMatrix:
        m = self.matrix()
        return DensityMatrix(m / np.trace(m).real, self.dims)

    def tensor(self, other: "MixtureAnsatz") -> "MixtureAnsatz":
        """Product ansatz on ``(A1 A2)(B1 B2)``."""
        w = np.outer(self.weights, other.weights).ravel()
        a = np.einsum("ki,lj->klij", self.local_a, other.local_a).reshape(w.size, -1)
        b = np.einsum("ki,lj->klij", self.local_b, other.local_b).reshape(w.size, -1)
        return MixtureAnsatz(w / w.sum(), a, b)


@dataclass
class OptimizationResult:
    """Outcome of one relative-entropy-of-entanglement search.

    ``value`` is recomputed from ``target`` and ``closest_state`` with
    :func:`relentropy.relative_entropy` after the search.
    ``boundary_certificate`` is the smallest eigenvalue of the partial
    transpose of ``closest_state``.
    """

    value: float
    closest_state: DensityMatrix
    method: str
    iterations: int
    converged: bool
    boundary_certificate: float
    restarts: int
    seed: int | None
    params: dict | None = None
    gradient_norm: float | None = None
    history: list = field(default_factory=list)
    restart_values: list = field(default_factory=list)
    ansatz: MixtureAnsatz | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "value_bits": self.value,
            "converged": self.converged,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "seed": self.seed,
            "boundary_certificate": self.boundary_certificate,
            "gradient_norm": self.gradient_norm,
            "params": self.params,
            "restart_values": list(self.restart_values),
            "closest_state": self.closest_state.to_dict(),
        }
        return out


def lemma2_certificate(result: OptimizationResult, tol: float = 1e-6) -> bool:
    """Does the closest state sit on the PPT boundary?

    An optimal separable state for an NPT target has a partial transpose
    with a zero eigenvalue; a clearly positive minimum means the search
    stopped inside the separable set.
    """
    return abs(result.boundary_certificate) <= tol


# --------------------------------------------------------------------------
# symmetry-constrained route


def _corner_terms(x, y, z):
    """Eigen-data and parameter derivatives of the corner block ``[[x, v], [v, u]]``."""
    u = 1.0 - x - y - z
    v = math.sqrt(y * z)
    half_gap = math.hypot(0.5 * (x - u), v)
    mean = 0.5 * (x + u)
    lam = np.array([mean + half_gap, mean - half_gap])
    theta = 0.5 * math.atan2(2.0 * v, x - u)
    c, s = math.cos(theta), math.sin(theta)
    vecs = np.array([[c, -s], [s, c]])
    dv_dy = 0.5 * z / v
    dv_dz = 0.5 * y / v
    d_blocks = (
        np.array([[1.0, 0.0], [0.0, -1.0]]),
        np.array([[0.0, dv_dy], [dv_dy, -1.0]]),
        np.array([[0.0, dv_dz], [dv_dz, -1.0]]),
    )
    return lam, vecs, d_blocks


def _log_divided_differences(lam):
    l0, l1 = lam
    if abs(l0 - l1) > 1e-12 * max(l0, 1e-300):
        off = (math.log(l0) - math.log(l1)) / (l0 - l1)
    else:
        off = 1.0 / l0
    return np.array([[1.0 / l0, off], [off, 1.0 / l1]])


def _invariant_entries(rho: np.ndarray):
    corner = np.array([[rho[0, 0].real, rho[0, 3].real], [rho[3, 0].real, rho[3, 3].real]])
    return corner, rho[1, 1].real, rho[2, 2].real


def constrained_cross_entropy(rho: np.ndarray, x: float, y: float, z: float, grad: bool = True):
    """``-tr(rho log2 sigma(x, y, z))`` and its gradient in ``(x, y, z)``."""
    corner, r11, r22 = _invariant_entries(rho)
    lam, vecs, d_blocks = _corner_terms(x, y, z)
    if lam[1] <= 0.0:
        return math.inf, None
    rot = vecs.T @ corner @ vecs
    value = -(np.dot(np.diag(rot), np.log(lam)))
    if r11 > 0:
        value -= r11 * math.log(y)
    if r22 > 0:
        value -= r22 * math.log(z)
    value /= LN2
    if not grad:
        return value, None
    weights = rot * _log_divided_differences(lam)
    g = np.array([-np.sum(weights * (vecs.T @ d @ vecs)) for d in d_blocks])
    g[1] -= r11 / y
    g[2] -= r22 / z
    return value, g / LN2


def _simplex_point(theta):
    t = np.append(theta, 0.0)
    t = t - t.max()
    e = np.exp(t)
    s = e / e.sum()
    scale = 1.0 - 4.0 * SIMPLEX_EPS
    return SIMPLEX_EPS + scale * s[:3], s, scale


def _theta_from_point(x, y, z):
    u = 1.0 - x - y - z
    pts = np.maximum(np.array([x, y, z, u]) - SIMPLEX_EPS, 1e-300)
    return np.log(pts[:3]) - np.log(pts[3])


def _newton_polish(rho, xyz, steps=20):
    """Newton steps on ``(x, y, z)`` with a finite-difference Hessian of the exact gradient."""
    xyz = np.array(xyz, dtype=float)
    val, g = constrained_cross_entropy(rho, *xyz)
    h = 1e-7
    for _ in range(steps):
        if np.linalg.norm(g) < 1e-13:
            break
        hess = np.empty((3, 3))
        for i in range(3):
            d = np.zeros(3)
            d[i] = h
            _, gp = constrained_cross_entropy(rho, *(xyz + d))
            _, gm = constrained_cross_entropy(rho, *(xyz - d))
            if gp is None or gm is None:
                return xyz, val, g
            hess[:, i] = (gp - gm) / (2 * h)
        hess = 0.5 * (hess + hess.T)
        try:
            step = -np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            break
        accepted = False
        for _ in range(30):
            cand = xyz + step
            u = 1.0 - cand.sum()
            if min(cand.min(), u) > SIMPLEX_EPS:
                cv, cg = constrained_cross_entropy(rho, *cand)
                if cv <= val + 1e-15 and np.linalg.norm(cg) < np.linalg.norm(g) * 1.5:
                    xyz, val, g = cand, cv, cg
                    accepted = True
                    break
            step = 0.5 * step
        if not accepted:
            break
    return xyz, val, g


def _check_constrained_target(rho: DensityMatrix) -> None:
    if rho.dims != (2, 2):
        raise ValidationError(f"constrained search needs a two-qubit state, got dims {rho.dims}")
    if not is_invariant(rho, w_ab_symmetry_group(), tol=1e-10):
        raise ValidationError("target is not invariant under the W-family symmetry group; "
                              "the three-parameter reduction does not apply")


def ree_constrained(rho: DensityMatrix, max_iter: int = 2000) -> OptimizationResult:
    """Minimize ``S(rho || constrained_sigma(x, y, z))`` over the simplex.

    Only valid for targets invariant under :func:`w_ab_symmetry_group`;
    anything else raises :class:`ValidationError`.
    """
    _check_constrained_target(rho)
    data = rho.data
    neg_entropy = -von_neumann(rho)
    corner, r11, r22 = _invariant_entries(data)

    def objective(theta):
        xyz, s, scale = _simplex_point(theta)
        val, g = constrained_cross_entropy(data, *xyz)
        if not math.isfinite(val):
            return math.inf, np.zeros(3)
        jac = scale * (np.diag(s[:3]) - np.outer(s[:3], s[:3]))
        return val, jac.T @ g

    starts = [np.zeros(3)]
    diag = np.array([corner[0, 0], max(r11, 0.1), max(r22, 0.1), corner[1, 1]])
    diag = np.clip(diag, 1e-3, None)
    diag /= diag.sum()
    starts.append(_theta_from_point(*diag[:3]))

    best = None
    history = []
    iterations = 0
    for theta0 in starts:
        trace = []
        res = minimize(objective, theta0, jac=True, method="BFGS",
                       options={"gtol": 1e-12, "maxiter": max_iter},
                       callback=lambda th: trace.append(objective(th)[0]))
        iterations += res.nit
        if best is None or res.fun < best[1]:
            best = (res.x, res.fun, trace)
    theta, _, trace = best
    xyz, _, _ = _simplex_point(theta)
    xyz, cross, grad_xyz = _newton_polish(data, xyz)
    running = math.inf
    for v in trace + [cross]:
        running = min(running, v)
        history.append(running + neg_entropy)

    x, y, z = (float(t) for t in xyz)
    gnorm = float(np.linalg.norm(grad_xyz))
    u = 1.0 - x - y - z
    on_boundary = min(x, y, z, u) < 1e-6
    # on the boundary only the tangential part of the gradient has to vanish
    _, theta_grad = objective(_theta_from_point(x, y, z))
    converged = gnorm <= GRAD_TOL or (on_boundary and np.linalg.norm(theta_grad) <= GRAD_TOL)
    sigma = constrained_sigma(ConstrainedSigmaParams(x, y, z))
    value = relative_entropy(rho, sigma)
    if not converged:
        log.warning("constrained search did not reach the gradient tolerance (|g| = %.3e)", gnorm)
    return OptimizationResult(
        value=value,
        closest_state=sigma,
        method="constrained",
        iterations=iterations,
        converged=bool(converged),
        boundary_certificate=pt_min_eigenvalue(sigma.data),
        restarts=len(starts),
        seed=None,
        params={"x": x, "y": y, "z": z, "u": u, "v": math.sqrt(y * z)},
        gradient_norm=gnorm,
        history=history,
        restart_values=[],
    )


@dataclass(frozen=True, eq=False)
class StationaritySolution:
    """State solved from the stationarity equations, with diagnostics."""

    matrix: np.ndarray
    params: ConstrainedSigmaParams
    min_eigenvalue: float
    rank: int
    stationarity_residual: float
    psd: bool

    @property
    def state(self) -> DensityMatrix:
        if not self.psd:
            raise StationarityError(self)
        return DensityMatrix(self.matrix, (2, 2))


class StationarityError(ValueError):
    """The solved matrix is not a valid state; ``solution`` holds the details."""

    def __init__(self, solution: StationaritySolution):
        self.solution = solution
        super().__init__(f"solved matrix is not positive semidefinite "
                         f"(min eigenvalue {solution.min_eigenvalue:.3e})")


def solve_stationarity(params: ConstrainedSigmaParams, psd_tol: float = 1e-10) -> StationaritySolution:
    """Solve for ``[[p,0,0,q],[0,0,0,0],[0,0,r,0],[q,0,0,s]]`` stationary at ``sigma(x, y, z)``.

    The three stationarity equations are linear in ``(p, q, r, s)``; unit
    trace closes the system.
    """
    x, y, z = params.as_tuple()
    u = 1.0 - x - y - z
    if min(x, y, z, u) <= 0:
        raise ValueError("stationarity inverse needs strictly interior parameters")
    lam, vecs, d_blocks = _corner_terms(x, y, z)
    dd = _log_divided_differences(lam)
    rows = []
    for k, d in enumerate(d_blocks):
        # derivative of tr(C log corner) along d, expressed in the original basis
        m = vecs @ ((vecs.T @ d @ vecs) * dd) @ vecs.T
        rows.append([m[0, 0], 2.0 * m[0, 1], 1.0 / z if k == 2 else 0.0, m[1, 1]])
    rows.append([1.0, 0.0, 1.0, 1.0])
    a = np.array(rows)
    rhs = np.array([0.0, 0.0, 0.0, 1.0])
    if abs(np.linalg.det(a)) < 1e-14:
        raise np.linalg.LinAlgError("stationarity system is singular for these parameters")
    p, q, r, s = np.linalg.solve(a, rhs)
    m = np.zeros((4, 4))
    m[0, 0], m[0, 3], m[3, 0], m[2, 2], m[3, 3] = p, q, q, r, s
    lam_rho = np.linalg.eigvalsh(m)
    _, g = constrained_cross_entropy(m, x, y, z)
    return StationaritySolution(
        matrix=m,
        params=params,
        min_eigenvalue=float(lam_rho[0]),
        rank=int(np.sum(lam_rho > psd_tol)),
        stationarity_residual=float(np.max(np.abs(g))),
        psd=bool(lam_rho[0] >= -psd_tol),
    )


def stationarity_inverse(params: ConstrainedSigmaParams) -> DensityMatrix:
    """State for which ``constrained_sigma(params)`` is a stationary point.

    Raises :class:`StationarityError` (carrying the solved matrix) when the
    solution is not positive semidefinite.
    """
    return solve_stationarity(params).state


# --------------------------------------------------------------------------
# product-mixture route


class _Stop(Exception):
    pass


class _MixtureProblem:
    def __init__(self, rho: np.ndarray, dims, components: int):
        self.rho = rho
        self.da, self.db = dims
        self.k = components
        self.n = self.da * self.db
        lam = np.linalg.eigvalsh(rho)
        pos = lam[lam > 0]
        self.neg_entropy = float(np.sum(pos * np.log2(pos)))
        self.size = components * (1 + 2 * self.da + 2 * self.db)

    def unpack(self, params):
        k, da, db = self.k, self.da, self.db
        logits = params[:k]
        off = k
        a = params[off:off + k * da].reshape(k, da) + 1j * params[off + k * da:off + 2 * k * da].reshape(k, da)
        off += 2 * k * da
        b = params[off:off + k * db].reshape(k, db) + 1j * params[off + k * db:off + 2 * k * db].reshape(k, db)
        return logits, a, b

    def pack(self, logits, a, b):
        return np.concatenate([logits, a.real.ravel(), a.imag.ravel(), b.real.ravel(), b.imag.ravel()])

    def ansatz(self, params) -> MixtureAnsatz:
        logits, a, b = self.unpack(params)
        w = np.exp(logits - logits.max())
        w /= w.sum()
        a = a / np.linalg.norm(a, axis=1, keepdims=True)
        b = b / np.linalg.norm(b, axis=1, keepdims=True)
        return MixtureAnsatz(w, a, b)

    def sigma(self, params) -> np.ndarray:
        return self.ansatz(params).matrix()

    def __call__(self, params):
        k, da, db = self.k, self.da, self.db
        logits, a, b = self.unpack(params)
        w = np.exp(logits - logits.max())
        p = w / w.sum()
        phi = np.einsum("ki,kj->kij", a, b).reshape(k, -1)
        nrm2 = np.einsum("ki,ki->k", phi.conj(), phi).real
        psi = phi / np.sqrt(nrm2)[:, None]
        sigma = psi.T @ (p[:, None] * psi.conj())
        lam, vecs = np.linalg.eigh(sigma)
        rho_rot = vecs.conj().T @ self.rho @ vecs
        diag = rho_rot.diagonal().real
        keep = lam > SUPPORT_CUTOFF
        if np.any(diag[~keep] > 1e-10):
            return math.inf, np.zeros_like(params)
        lam_k = np.where(keep, lam, 1.0)
        log_lam = np.log(lam_k)
        cross = -float(np.dot(diag[keep], log_lam[keep])) / LN2
        value = self.neg_entropy + cross
        # gradient of -tr(rho log sigma) w.r.t. sigma, via the divided differences of log
        diff = lam_k[:, None] - lam_k[None, :]
        close = np.abs(diff) <= 1e-12 * np.maximum(lam_k[:, None], 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            dd = np.where(close, 1.0 / lam_k[:, None], (log_lam[:, None] - log_lam[None, :]) / np.where(close, 1.0, diff))
        dd[~keep, :] = 0.0
        dd[:, ~keep] = 0.0
        gmat = -(vecs @ (rho_rot * dd) @ vecs.conj().T) / LN2
        g_psi = psi @ gmat.T
        rq = np.einsum("ki,ki->k", psi.conj(), g_psi).real
        grad_logits = p * (rq - np.dot(p, rq))
        # d/d conj(phi) of p phi^dag G phi / phi^dag phi, doubled for real coordinates
        c_phi = (2.0 * p / np.sqrt(nrm2))[:, None] * (g_psi - rq[:, None] * psi)
        c_phi = c_phi.reshape(k, da, db)
        c_a = np.einsum("kij,kj->ki", c_phi, b.conj())
        c_b = np.einsum("kij,ki->kj", c_phi, a.conj())
        grad = np.concatenate([grad_logits, c_a.real.ravel(), c_a.imag.ravel(), c_b.real.ravel(), c_b.imag.ravel()])
        return value, grad

    def random_start(self, rng: np.random.Generator, scale: float):
        logits = scale * rng.standard_normal(self.k)
        a = rng.standard_normal((self.k, self.da)) + 1j * rng.standard_normal((self.k, self.da))
        b = rng.standard_normal((self.k, self.db)) + 1j * rng.standard_normal((self.k, self.db))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        return self.pack(logits, a, b)

    def start_from(self, ansatz: MixtureAnsatz):
        w = np.clip(ansatz.weights, 1e-300, None)
        if w.size != self.k or ansatz.dims != (self.da, self.db):
            raise ValueError("warm start does not match the mixture layout")
        return self.pack(np.log(w), ansatz.local_a, ansatz.local_b)


@dataclass
class _RestartOutcome:
    index: int
    value: float
    params: np.ndarray
    iterations: int
    converged: bool
    history: list


def _run_restart(problem: _MixtureProblem, x0, index: int, config: OptimizerConfig,
                 stop: threading.Event | None) -> _RestartOutcome:
    best = {"value": math.inf, "params": x0.copy()}
    history: list[float] = []
    state = {"converged": False, "nit": 0}

    def fun(params):
        val, grad = problem(params)
        if val < best["value"]:
            best["value"] = val
            best["params"] = params.copy()
        return val, grad

    def callback(intermediate_result):
        state["nit"] += 1
        history.append(best["value"])
        if stop is not None and stop.is_set():
            raise StopIteration
        if len(history) > config.stall_window:
            if history[-config.stall_window - 1] - history[-1] < config.value_tol:
                state["converged"] = True
                raise StopIteration

    res = minimize(fun, x0, jac=True, method="L-BFGS-B", callback=callback,
                   options={"maxiter": config.max_iter, "ftol": 1e-16, "gtol": config.grad_tol,
                            "maxcor": 20, "maxls": 40})
    if res.status == 0 and not state["converged"]:
        # scipy's own gradient test fired
        state["converged"] = True
    fun(res.x)
    return _RestartOutcome(index, best["value"], best["params"], max(state["nit"], res.nit),
                           state["converged"], history)


def ree_mixture(rho: DensityMatrix, config: OptimizerConfig | None = None,
                initial: MixtureAnsatz | None = None,
                stop: threading.Event | None = None) -> OptimizationResult:
    """Upper bound on the relative entropy of entanglement of a bipartite state.

    Parameters
    ----------
    rho : DensityMatrix
        Bipartite target, ``rho.dims == (d_A, d_B)``.
    config : OptimizerConfig, optional
    initial : MixtureAnsatz, optional
        Warm start used for restart 0 instead of a random draw.
    stop : threading.Event, optional
        Checked once per iteration; when set, the search returns the best
        point found so far with ``converged=False`` for unfinished restarts.
    """
    config = config or OptimizerConfig()
    if len(rho.dims) != 2:
        raise ValidationError(f"ree_mixture needs a bipartite state, got dims {rho.dims}")
    k = config.components_for(rho.dims)
    problem = _MixtureProblem(np.asarray(rho.data), rho.dims, k)
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    starts = []
    for i, ss in enumerate(seeds):
        if i == 0 and initial is not None:
            starts.append(problem.start_from(initial))
        else:
            starts.append(problem.random_start(np.random.default_rng(ss), config.init_scale))

    def job(i):
        if stop is not None and stop.is_set():
            return None
        return _run_restart(problem, starts[i], i, config, stop)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(job, range(config.restarts)))
    else:
        outcomes = [job(i) for i in range(config.restarts)]
    outcomes = [o for o in outcomes if o is not None]
    if not outcomes:
        raise RuntimeError("search cancelled before any restart ran")
    winner = min(outcomes, key=lambda o: (o.value, o.index))
    ansatz = problem.ansatz(winner.params)
    sigma = ansatz.state()
    value = relative_entropy(rho, sigma)
    converged = any(o.converged for o in outcomes)
    if not converged:
        log.warning("no restart met the convergence criteria; returning best point found")
    certificate = pt_min_eigenvalue(sigma.data, rho.dims)
    _, grad = problem(winner.params)
    return OptimizationResult(
        value=value,
        closest_state=sigma,
        method="mixture",
        iterations=winner.iterations,
        converged=converged,
        boundary_certificate=certificate,
        restarts=len(outcomes),
        seed=config.seed,
        params={"components": k, "winning_restart": winner.index},
        gradient_norm=float(np.linalg.norm(grad)),
        history=winner.history,
        restart_values=[o.value for o in sorted(outcomes, key=lambda o: o.index)],
        ansatz=ansatz,
    )
