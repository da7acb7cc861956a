"""Almost complex structures on the invariant model.

J is stored as an endomorphism of the frame E1..E2n dual to e1..e2n, so the
shorthand ``e1 -> e2`` means J(E1) = E2. It acts on forms by pullback,
(Jα)(X) = α(JX), i.e. by the transpose matrix on covector coordinates, and
is extended to Λ^k as an algebra automorphism. With this convention both
d^c = J^{-1} d J = -iμ̄ + i∂̄ - i∂ + iμ and L^{n-1}α = ⋆Jα/(n-1)! hold; the
other sign fails the second (see ``form_action_matrix``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import linalg
from .algebra import (
    GradedOperator,
    KForm,
    LieAlgebraModel,
    ModelError,
    automorphism_extension,
    basis,
    d_operator,
    nforms,
    wedge_operator,
)
from .hodge import Metric, VolumeForm, gram, harmonics, hodge_star, laplacian
from .linalg import Subspace
from .scalars import I as IMAG
from .scalars import GaussianRational

PULLBACK = "pullback"  # (Jα)(X) = α(JX)  -- adopted
INVERSE = "inverse"  # (Jα)(X) = α(J^-1 X)
CONVENTION = PULLBACK

BIDEGREES = {"mubar": (-1, 2), "dbar": (0, 1), "del": (1, 0), "mu": (2, -1)}


class ACSError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AlmostComplexStructure:
    """J with J^2 = -1; exact (Fractions) unless built from floats."""

    J: np.ndarray
    exact: bool = True

    def __post_init__(self):
        m = np.asarray(self.J, dtype=object if self.exact else float)
        n = m.shape[0]
        if m.ndim != 2 or m.shape != (n, n) or n % 2:
            raise ACSError("J must be a square matrix of even size")
        if self.exact:
            m = linalg.matrix([[Fraction(x) for x in row] for row in m])
            if not linalg.equal(m @ m, -linalg.identity(n)):
                raise ACSError("J^2 != -1")
        else:
            if np.linalg.norm(m @ m + np.eye(n)) > 1e-9:
                raise ACSError("J^2 != -1 (to 1e-9)")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "J", m)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    @classmethod
    def from_images(cls, dim: int, images: dict[int, dict[int, int]]) -> "AlmostComplexStructure":
        """Build J from ``{j: {i: c}}`` meaning J(E_j) = sum_i c E_i."""
        m = linalg.zeros(dim, dim)
        for j, img in images.items():
            for i, c in img.items():
                m[i - 1, j - 1] = Fraction(c)
        return cls(m)

    def as_float(self) -> np.ndarray:
        return linalg.to_float(self.J) if self.exact else np.array(self.J, dtype=float)

    def require_exact(self):
        if not self.exact:
            raise ACSError("this computation needs an exact (rational) J")


def standard_j(dim: int) -> AlmostComplexStructure:
    """J(E_{2i-1}) = E_{2i}, J(E_{2i}) = -E_{2i-1}."""
    images = {}
    for i in range(1, dim, 2):
        images[i] = {i + 1: 1}
        images[i + 1] = {i: -1}
    return AlmostComplexStructure.from_images(dim, images)


def form_action_matrix(J: AlmostComplexStructure, convention: str = CONVENTION) -> np.ndarray:
    J.require_exact()
    if convention == PULLBACK:
        return J.J.T.copy()
    if convention == INVERSE:
        return -J.J.T
    raise ValueError(f"unknown convention {convention!r}")


def form_action(J: AlmostComplexStructure, k: int, convention: str = CONVENTION) -> GradedOperator:
    return automorphism_extension(form_action_matrix(J, convention), k)


def apply_j(J: AlmostComplexStructure, form: KForm, convention: str = CONVENTION) -> KForm:
    return form_action(J, form.degree, convention)(form)


def skew_matrix(tau: KForm) -> np.ndarray:
    """E[i, j] = τ(E_i, E_j)."""
    if tau.degree != 2:
        raise ModelError("expected a 2-form")
    e = linalg.zeros(tau.dim, tau.dim)
    for (i, j), c in tau.terms.items():
        e[i - 1, j - 1] = c
        e[j - 1, i - 1] = -c
    return e


def is_nondegenerate(tau: KForm) -> bool:
    return bool(tau.power(tau.dim // 2).top_coefficient())


@dataclass(frozen=True, eq=False)
class Compatibility:
    compatible: bool
    invariant: bool
    symmetric: bool
    positive: bool
    metric: Metric | None = None
    tangent_gram: np.ndarray | None = field(default=None, repr=False)

    def __bool__(self):
        return self.compatible


def is_compatible(J: AlmostComplexStructure, tau: KForm) -> Compatibility:
    """τ(J·, J·) = τ and τ(·, J·) positive definite, checked exactly."""
    J.require_exact()
    if not is_nondegenerate(tau):
        raise ACSError("τ is degenerate")
    e = skew_matrix(tau)
    a = J.J
    invariant = linalg.equal(a.T @ e @ a, e)
    g = e @ a
    symmetric = linalg.equal(g, g.T)
    positive = symmetric and linalg.leading_minors_positive(g)
    ok = invariant and symmetric and positive
    metric = Metric.from_tangent(g) if ok else None
    return Compatibility(ok, invariant, symmetric, positive, metric, g)


def induced_metric(J: AlmostComplexStructure, tau: KForm) -> Metric:
    c = is_compatible(J, tau)
    if not c:
        raise ACSError("J is not compatible with the form")
    return c.metric


def volume_of(tau: KForm) -> VolumeForm:
    """τ^n / n!."""
    n = tau.dim // 2
    return VolumeForm(KForm(tau.dim, tau.dim, {tuple(range(1, tau.dim + 1)): tau.power(n).top_coefficient() / factorial(n)}))


def rationalize(m: np.ndarray, max_denominator: int = 64, tol: float = 1e-9):
    """Exact matrix if every entry is within tol of p/q with q <= max_denominator."""
    out = linalg.zeros(*m.shape)
    for idx, x in np.ndenumerate(m):
        q = Fraction(float(x)).limit_denominator(max_denominator)
        if abs(float(q) - x) > tol:
            return None
        out[idx] = q
    return out


def canonical_compatible_J(tau: KForm, g0: Metric | None = None, tol: float = 1e-9) -> AlmostComplexStructure:
    """Polar-decomposition J for τ relative to a background metric g0.

    Writes τ(X, Y) = g0(X, KY) and takes J = -K (-K^2)^{-1/2}; the result is
    rationalized and re-verified exactly when possible.
    """
    if not is_nondegenerate(tau):
        raise ACSError("τ is degenerate")
    dim = tau.dim
    g0 = g0 or Metric.identity(dim)
    g_vec = np.linalg.inv(linalg.to_float(g0.G))
    e = linalg.to_float(skew_matrix(tau))
    w, v = np.linalg.eigh(g_vec)
    s = v @ np.diag(np.sqrt(w)) @ v.T
    s_inv = v @ np.diag(1 / np.sqrt(w)) @ v.T
    e_t = s_inv @ e @ s_inv  # skew in g0-orthonormal coordinates
    w2, v2 = np.linalg.eigh(e_t.T @ e_t)
    root_inv = v2 @ np.diag(1 / np.sqrt(w2)) @ v2.T
    j = s_inv @ (-e_t @ root_inv) @ s
    residual = np.linalg.norm(j @ j + np.eye(dim))
    if not np.isfinite(residual) or residual > tol:
        raise ACSError(f"polar construction failed, residual {residual:.3e}")
    exact = rationalize(j, tol=max(tol, 1e-9))
    if exact is not None:
        try:
            cand = AlmostComplexStructure(exact)
            if is_compatible(cand, tau):
                return cand
        except ACSError:
            pass
    return AlmostComplexStructure(j, exact=False)


def dc_operator(
    model: LieAlgebraModel, J: AlmostComplexStructure, k: int, convention: str = CONVENTION
) -> GradedOperator:
    """d^c = J^{-1} d J on Λ^k."""
    dim = model.dim
    if not 0 <= k < dim:
        return d_operator(model, k)
    f_inv = linalg.inverse(form_action_matrix(J, convention))
    return automorphism_extension(f_inv, k + 1) @ d_operator(model, k) @ form_action(J, k, convention)


# --- bidegree decomposition ------------------------------------------------


@dataclass(frozen=True, eq=False)
class BidegreeDecomposition:
    dim: int
    change_of_basis: np.ndarray  # columns: (1,0) covectors then their conjugates
    projectors: dict  # (p, q) -> GradedOperator on Λ^{p+q}
    components: dict  # name -> {k: GradedOperator Λ^k → Λ^{k+1}}

    def family(self, name: str):
        comps = self.components[name]
        return lambda k: comps.get(k) or GradedOperator(
            self.dim, k, k + 1, linalg.complexify(linalg.zeros(nforms(self.dim, k + 1), nforms(self.dim, k)))
        )

    def projector(self, p: int, q: int) -> GradedOperator:
        return self.projectors[(p, q)]

    def type_subspace(self, p: int, q: int) -> Subspace:
        return linalg.image(self.projectors[(p, q)].matrix)


def type_basis_change(J: AlmostComplexStructure, convention: str = CONVENTION) -> np.ndarray:
    """Columns φ_1..φ_n spanning Λ^{1,0} (= +i eigenspace of J), then conj(φ)."""
    f = linalg.complexify(form_action_matrix(J, convention))
    n2 = J.dim
    pi10 = (linalg.complexify(linalg.identity(n2)) - IMAG * f) * Fraction(1, 2)
    phis = linalg.image(pi10).vectors()
    if len(phis) != n2 // 2:
        raise ACSError("(1,0) space has the wrong dimension")
    cols = phis + [linalg.conj_matrix(p) for p in phis]
    return np.stack(cols, axis=1)


@lru_cache(maxsize=64)
def _decompose_cached(model: LieAlgebraModel, jkey: tuple, convention: str) -> BidegreeDecomposition:
    dim = model.dim
    n = dim // 2
    J = AlmostComplexStructure(np.array(jkey, dtype=object).reshape(dim, dim))
    b = type_basis_change(J, convention)
    projectors = {}
    for k in range(dim + 1):
        bk = linalg.compound(b, k)
        bk_inv = linalg.inverse(bk)
        counts = [sum(1 for i in idx if i <= n) for idx in basis(dim, k)]
        for p in range(k + 1):
            q = k - p
            diag = linalg.complexify(linalg.zeros(len(counts), len(counts)))
            for pos, c in enumerate(counts):
                if c == p:
                    diag[pos, pos] = GaussianRational(1)
            projectors[(p, q)] = GradedOperator(dim, k, k, bk @ diag @ bk_inv)
    components: dict = {name: {} for name in BIDEGREES}
    for k in range(dim):
        dk = d_operator(model, k).complexified()
        found = {}
        for p in range(k + 1):
            q = k - p
            src = projectors[(p, q)]
            for a in range(-1 - k, k + 3):
                b_ = 1 - a
                key = (p + a, q + b_)
                if key not in projectors:
                    continue
                piece = projectors[key] @ dk @ src
                if piece.is_zero():
                    continue
                found[(a, b_)] = found[(a, b_)] + piece if (a, b_) in found else piece
        for bideg, op in found.items():
            name = next((nm for nm, bd in BIDEGREES.items() if bd == bideg), None)
            if name is None:
                raise ACSError(f"d has a component of bidegree {bideg}")
            components[name][k] = op
    return BidegreeDecomposition(dim, b, projectors, components)


def decompose_d(
    model: LieAlgebraModel, J: AlmostComplexStructure, convention: str = CONVENTION
) -> BidegreeDecomposition:
    """d = μ̄ + ∂̄ + ∂ + μ over Q(i), via conjugated type projectors."""
    J.require_exact()
    if J.dim != model.dim:
        raise ACSError("J and model have different dimensions")
    return _decompose_cached(model, tuple(J.J.flat), convention)


def dc_from_components(decomp: BidegreeDecomposition, k: int) -> GradedOperator:
    """-iμ̄ + i∂̄ - i∂ + iμ on Λ^k; must be real."""
    coeff = {"mubar": -IMAG, "dbar": IMAG, "del": -IMAG, "mu": IMAG}
    total = None
    for name, c in coeff.items():
        term = decomp.family(name)(k) * c
        total = term if total is None else total + term
    if not total.is_real():
        raise ACSError("d^c assembled from components has an imaginary part")
    return total.real()


# --- almost-Kähler identities ---------------------------------------------


def weil_identity(omega: KForm, J: AlmostComplexStructure, convention: str = CONVENTION) -> bool:
    """L^{n-1} = ⋆J/(n-1)! on Λ^1 for g = ω(·, J·), vol = ω^n/n!."""
    n = omega.dim // 2
    metric = induced_metric(J, omega)
    lhs = wedge_operator(omega.power(n - 1), 1)
    rhs = hodge_star(metric, volume_of(omega), 1) @ form_action(J, 1, convention)
    return lhs == rhs * Fraction(1, factorial(n - 1))


def laplacian_of(decomp: BidegreeDecomposition, name: str, metric: Metric, k: int) -> GradedOperator:
    return laplacian(decomp.family(name), metric, k)


def almost_kahler_identity(decomp: BidegreeDecomposition, metric: Metric, k: int) -> bool:
    """Δ_∂̄ + Δ_μ = Δ_∂ + Δ_μ̄ on Λ^k."""
    lap = {nm: laplacian_of(decomp, nm, metric, k) for nm in BIDEGREES}
    return lap["dbar"] + lap["mu"] == lap["del"] + lap["mubar"]


def j_is_orthogonal(J: AlmostComplexStructure, metric: Metric, k: int) -> bool:
    f = form_action(J, k).matrix
    g = gram(metric, k)
    return linalg.equal(f.T @ g @ f, g)


def projectors_are_complete(decomp: BidegreeDecomposition, k: int) -> bool:
    """Π^{p,q} idempotent, mutually annihilating, summing to 1 on Λ^k."""
    ps = [decomp.projector(p, k - p).matrix for p in range(k + 1)]
    ident = linalg.complexify(linalg.identity(nforms(decomp.dim, k)))
    for i, a in enumerate(ps):
        if not linalg.equal(a @ a, a):
            return False
        for j, b in enumerate(ps):
            if i != j and not linalg.is_zero(a @ b):
                return False
    return linalg.equal(sum(ps[1:], ps[0]), ident)


def complex_harmonics(decomp: BidegreeDecomposition, name: str, metric: Metric, k: int):
    return harmonics(decomp.family(name), metric, k, tag=name)


def pure_type_check(decomp: BidegreeDecomposition) -> bool:
    """Each component maps (p,q) forms into (p+a, q+b) forms."""
    for name, (a, b) in BIDEGREES.items():
        for k, op in decomp.components[name].items():
            for p in range(k + 1):
                q = k - p
                tgt = (p + a, q + b)
                src = decomp.projector(p, q)
                piece = op @ src
                if tgt in decomp.projectors:
                    if not (decomp.projectors[tgt] @ piece) == piece:
                        return False
                elif not piece.is_zero():
                    return False
    return True


__all__ = [
    "ACSError",
    "AlmostComplexStructure",
    "BIDEGREES",
    "BidegreeDecomposition",
    "CONVENTION",
    "Compatibility",
    "INVERSE",
    "PULLBACK",
    "almost_kahler_identity",
    "apply_j",
    "canonical_compatible_J",
    "complex_harmonics",
    "dc_from_components",
    "dc_operator",
    "decompose_d",
    "form_action",
    "form_action_matrix",
    "induced_metric",
    "is_compatible",
    "is_nondegenerate",
    "j_is_orthogonal",
    "laplacian_of",
    "projectors_are_complete",
    "pure_type_check",
    "rationalize",
    "skew_matrix",
    "standard_j",
    "type_basis_change",
    "volume_of",
    "weil_identity",
]
