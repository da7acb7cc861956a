"""Numerical search for an almost complex structure compatible with two 2-forms.

A penalty objective over general square matrices A,

    ‖A² + I‖² + Σ_τ ‖AᵀE_τA − E_τ‖² + Σ_τ Σ_i max(0, m − λ_i(sym E_τA))²,

is minimised by L-BFGS-B with an analytic gradient from random conjugates of
the standard J, then polished by Levenberg–Marquardt. A candidate is only
reported as found after the float tolerances pass and, when the matrix is
close to a small-denominator rational matrix, after an exact check.

NotFound is numerical evidence, not a proof of nonexistence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from .acs import ACSError, AlmostComplexStructure, is_compatible, is_nondegenerate, rationalize, skew_matrix, standard_j
from .algebra import KForm, LieAlgebraModel, ModelError

FOUND = "Found"
NOT_FOUND = "NotFound"


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 100
    max_iters: int = 500
    tol_residual: float = 1e-8
    tol_posdef: float = 1e-6
    seed: int = 0
    margin: float = 1e-3  # hinge target for metric eigenvalues
    polish_threshold: float = 1e-6  # objective value below which LM polishing runs
    rational_tol: float = 1e-6
    max_denominator: int = 64

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        for name in ("tol_residual", "tol_posdef", "margin", "polish_threshold", "rational_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Residuals:
    """Float diagnostics for one candidate J."""

    square: float  # ‖J² + I‖
    invariance: tuple[float, float]  # ‖JᵀEJ − E‖ for ω, η
    min_eigenvalue: tuple[float, float]  # of sym(E J) for ω, η

    @property
    def total(self) -> float:
        return max(self.square, *self.invariance)


@dataclass
class SearchOutcome:
    status: str
    J: np.ndarray  # best float matrix seen (the found one when status is Found)
    residuals: Residuals
    best_residual: float
    restart: int
    rationalized: bool = False
    exact_verified: bool = False
    exact_J: AlmostComplexStructure | None = None
    trace: list = field(default_factory=list)  # (restart, residual, min eigenvalue) per restart

    @property
    def found(self) -> bool:
        return self.status == FOUND


def compatibility_residual(J, tau: KForm) -> tuple[float, float]:
    """(equivariance residual, min eigenvalue of the induced metric), in floats.

    Equivariance is max(‖JᵀEJ − E‖, ‖J² + I‖) so a non-complex-structure is flagged.
    """
    a = np.asarray(J, dtype=float)
    e = np.asarray(skew_matrix(tau), dtype=float)
    eye = np.eye(a.shape[0])
    equiv = max(np.linalg.norm(a.T @ e @ a - e), np.linalg.norm(a @ a + eye))
    g = e @ a
    lam = float(np.linalg.eigvalsh((g + g.T) / 2)[0])
    return float(equiv), lam


def residuals_of(a: np.ndarray, e_list) -> Residuals:
    eye = np.eye(a.shape[0])
    inv = tuple(float(np.linalg.norm(a.T @ e @ a - e)) for e in e_list)
    lam = tuple(float(np.linalg.eigvalsh((e @ a + (e @ a).T) / 2)[0]) for e in e_list)
    return Residuals(float(np.linalg.norm(a @ a + eye)), inv, lam)


def objective(x: np.ndarray, e_list, margin: float) -> tuple[float, np.ndarray]:
    """Penalty value and its gradient with respect to the flattened A."""
    n = int(round(np.sqrt(x.size)))
    a = x.reshape(n, n)
    r1 = a @ a + np.eye(n)
    f = float(np.sum(r1 * r1))
    grad = 2 * (r1 @ a.T + a.T @ r1)
    for e in e_list:
        r2 = a.T @ e @ a - e
        f += float(np.sum(r2 * r2))
        grad += 2 * (e @ a @ r2.T + e.T @ a @ r2)
        s = e @ a
        lam, vecs = np.linalg.eigh((s + s.T) / 2)
        for lam_i, v in zip(lam, vecs.T):
            gap = margin - lam_i
            if gap > 0:
                f += gap * gap
                grad -= 2 * gap * e.T @ np.outer(v, v)
    return f, grad.ravel()


def _residual_vector(x: np.ndarray, e_list, margin: float) -> np.ndarray:
    n = int(round(np.sqrt(x.size)))
    a = x.reshape(n, n)
    parts = [(a @ a + np.eye(n)).ravel()]
    for e in e_list:
        parts.append((a.T @ e @ a - e).ravel())
        s = e @ a
        lam = np.linalg.eigvalsh((s + s.T) / 2)
        parts.append(np.maximum(0.0, margin - lam))
    return np.concatenate(parts)


def _start(rng: np.random.Generator, j0: np.ndarray) -> np.ndarray:
    n = j0.shape[0]
    while True:
        p = rng.uniform(-1.0, 1.0, size=(n, n))
        if abs(np.linalg.det(p)) > 1e-3:
            return p @ j0 @ np.linalg.inv(p)


def _exact_check(a: np.ndarray, forms, cfg: SearchConfig):
    """(rationalized, verified, exact J or None)."""
    q = rationalize(a, cfg.max_denominator, cfg.rational_tol)
    if q is None:
        return False, False, None
    try:
        J = AlmostComplexStructure(q)
        ok = all(is_compatible(J, tau) for tau in forms)
    except ACSError:
        return True, False, None
    return True, ok, J if ok else None


def _passes_float(res: Residuals, cfg: SearchConfig) -> bool:
    return res.total <= cfg.tol_residual and min(res.min_eigenvalue) >= cfg.tol_posdef


def find_shared_j(model: LieAlgebraModel | None, omega: KForm, eta: KForm, cfg: SearchConfig = SearchConfig()) -> SearchOutcome:
    """Search for J compatible with both ω and η.

    ``model`` only fixes the dimension check; compatibility is pointwise linear algebra.
    Restarts run in index order; the first restart meeting every tolerance
    wins, otherwise the lowest residual (ties by index) is reported.
    """
    for name, tau in (("ω", omega), ("η", eta)):
        if tau.degree != 2 or not is_nondegenerate(tau):
            raise ModelError(f"{name} must be a nondegenerate 2-form")
    if omega.dim != eta.dim or (model is not None and model.dim != omega.dim):
        raise ModelError("forms and model have different dimensions")
    dim = omega.dim
    e_list = [np.asarray(skew_matrix(t), dtype=float) for t in (omega, eta)]
    j0 = np.asarray(standard_j(dim).J, dtype=float)
    rng = np.random.default_rng(cfg.seed)

    best = None  # (residual, restart, a, res)
    trace = []
    for r in range(cfg.restarts):
        x0 = _start(rng, j0).ravel()
        sol = minimize(
            objective,
            x0,
            args=(e_list, cfg.margin),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "ftol": 1e-16, "gtol": 1e-12},
        )
        x = sol.x
        if sol.fun < cfg.polish_threshold:
            lm = least_squares(
                _residual_vector, x, args=(e_list, cfg.margin), method="lm",
                xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200 * x.size,
            )
            x = lm.x
        a = x.reshape(dim, dim)
        res = residuals_of(a, e_list)
        trace.append((r, res.total, min(res.min_eigenvalue)))
        if best is None or res.total < best[0]:
            best = (res.total, r, a, res)
        if _passes_float(res, cfg):
            rationalized, verified, exact = _exact_check(a, (omega, eta), cfg)
            if verified or not rationalized:
                return SearchOutcome(FOUND, a, res, res.total, r, rationalized, verified, exact, trace)
    total, r, a, res = best
    return SearchOutcome(NOT_FOUND, a, res, total, r, trace=trace)
