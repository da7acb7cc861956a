"""Inner products, Hodge star, adjoints, Laplacians and harmonic spaces.

Adjoints come straight from gram matrices (``G_p^-1 op^H G_q``), so every
Laplacian kernel is exact. The Hodge star needs a rational volume
coefficient and is only built when ``v^2 = 1/det(G)`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import linalg
from .algebra import (
    GradedOperator,
    KForm,
    LieAlgebraModel,
    ModelError,
    basis,
    d_operator,
    merge_sign,
    nforms,
)
from .linalg import Subspace

OperatorFamily = Callable[[int], GradedOperator]


class MetricError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Metric:
    """Inner products of the covector basis e1..e2n (a matrix on Λ^1)."""

    G: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.G, dtype=object)
        n = g.shape[0]
        if g.shape != (n, n):
            raise MetricError("metric matrix must be square")
        if not linalg.equal(g, g.T):
            raise MetricError("metric matrix is not symmetric")
        if not linalg.is_real(g) or not linalg.leading_minors_positive(g):
            raise MetricError("metric matrix is not positive definite")
        g = g.copy()
        g.flags.writeable = False
        object.__setattr__(self, "G", g)

    @classmethod
    def identity(cls, dim: int) -> "Metric":
        return cls(linalg.identity(dim))

    @classmethod
    def from_tangent(cls, g_vec: np.ndarray) -> "Metric":
        """Metric given by its gram matrix on the dual frame of vectors."""
        return cls(linalg.inverse(np.asarray(g_vec, dtype=object)))

    @property
    def dim(self) -> int:
        return self.G.shape[0]

    def gram(self, k: int) -> np.ndarray:
        return gram(self, k)


@dataclass(frozen=True)
class VolumeForm:
    form: KForm

    def __post_init__(self):
        if self.form.degree != self.form.dim:
            raise MetricError("volume form must have top degree")
        if not self.form.top_coefficient() > 0:
            raise MetricError("volume coefficient must be positive")

    @property
    def coefficient(self) -> Fraction:
        return self.form.top_coefficient()

    @classmethod
    def standard(cls, dim: int, coefficient=1) -> "VolumeForm":
        return cls(KForm(dim, dim, {tuple(range(1, dim + 1)): Fraction(coefficient)}))


@lru_cache(maxsize=512)
def _gram_cached(key: tuple, dim: int, k: int) -> np.ndarray:
    g = np.array(key, dtype=object).reshape(dim, dim)
    if not 0 <= k <= dim:
        return linalg.zeros(0, 0)
    return linalg.compound(g, k)


def gram(metric: Metric, k: int) -> np.ndarray:
    """⟨e^I, e^J⟩ = det G[I, J] on Λ^k."""
    return _gram_cached(tuple(metric.G.flat), metric.dim, k).copy()


def inner(metric: Metric, a: KForm, b: KForm):
    """Hermitian inner product ⟨a, b⟩ (conjugate-linear in a)."""
    return linalg.conj_matrix(a.to_vector()) @ gram(metric, a.degree) @ b.to_vector()


def _top_pairing(dim: int, k: int) -> np.ndarray:
    """W[I, K] = coefficient of e_I ∧ e_K on e1...e2n."""
    w = linalg.zeros(nforms(dim, k), nforms(dim, dim - k))
    for i, I in enumerate(basis(dim, k)):
        for j, K in enumerate(basis(dim, dim - k)):
            if not set(I) & set(K):
                w[i, j] = Fraction(merge_sign(I, K))
    return w


def hodge_star(metric: Metric, vol: VolumeForm, k: int) -> GradedOperator:
    """The operator with α ∧ ⋆β = ⟨α, β⟩ vol on Λ^k."""
    dim = metric.dim
    if vol.form.dim != dim:
        raise MetricError("volume form and metric have different dimensions")
    if not 0 <= k <= dim:
        raise ModelError(f"degree {k} outside [0, {dim}]")
    v = vol.coefficient
    if v * v * linalg.det(metric.G) != 1:
        raise MetricError("volume coefficient v must satisfy v^2 = 1/det(G)")
    w = _top_pairing(dim, k)
    return GradedOperator(dim, k, dim - k, v * (linalg.inverse(w) @ gram(metric, k)))


def adjoint(op: GradedOperator, gram_p: np.ndarray, gram_q: np.ndarray) -> GradedOperator:
    """Adjoint Λ^q → Λ^p of op: Λ^p → Λ^q."""
    if gram_p.shape[0] == 0 or gram_q.shape[0] == 0:
        return GradedOperator(op.dim, op.target, op.source, linalg.zeros(gram_p.shape[0], gram_q.shape[0]))
    try:
        gp_inv = linalg.inverse(gram_p)
    except ZeroDivisionError:
        raise MetricError("singular gram matrix") from None
    return GradedOperator(op.dim, op.target, op.source, gp_inv @ linalg.hermitian(op.matrix) @ gram_q)


def metric_adjoint(op: GradedOperator, metric: Metric) -> GradedOperator:
    return adjoint(op, gram(metric, op.source), gram(metric, op.target))


def laplacian(delta: OperatorFamily, metric: Metric, k: int) -> GradedOperator:
    """Δ = δ*δ + δδ* on Λ^k, for a family δ_k: Λ^k → Λ^{k+1}."""
    up = delta(k)
    down = delta(k - 1)
    return metric_adjoint(up, metric) @ up + down @ metric_adjoint(down, metric)


@dataclass(frozen=True, eq=False)
class HarmonicSpace:
    operator: str
    degree: int
    space: Subspace
    dim_total: int

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> tuple[KForm, ...]:
        return tuple(KForm.from_vector(self.dim_total, self.degree, v) for v in self.space.vectors())


def harmonics(delta: OperatorFamily, metric: Metric, k: int, tag: str = "d") -> HarmonicSpace:
    lap = laplacian(delta, metric, k)
    return HarmonicSpace(tag, k, linalg.kernel(lap.matrix), metric.dim)


def d_family(model: LieAlgebraModel) -> OperatorFamily:
    return lambda k: d_operator(model, k)


def projection(space: Subspace, metric_gram: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto ``space`` for the (hermitian) gram."""
    n = space.ambient
    if not space.dim:
        return linalg.zeros(n, n)
    s = space.basis.T
    sh = linalg.hermitian(s)
    return s @ linalg.inverse(sh @ metric_gram @ s) @ sh @ metric_gram


@dataclass(frozen=True, eq=False)
class HodgeDecomposition:
    degree: int
    harmonic: Subspace
    exact: Subspace
    coexact: Subspace

    def dims(self) -> tuple[int, int, int]:
        return self.harmonic.dim, self.exact.dim, self.coexact.dim


def hodge_decomposition(model: LieAlgebraModel, metric: Metric, k: int) -> HodgeDecomposition:
    """Λ^k = ℋ^k_d ⊕ im d_{k-1} ⊕ im d*_k."""
    h = harmonics(d_family(model), metric, k).space
    exact = linalg.image(d_operator(model, k - 1).matrix) if k > 0 else Subspace(nforms(model.dim, k))
    dstar = metric_adjoint(d_operator(model, k), metric)
    coexact = linalg.image(dstar.matrix) if dstar.matrix.shape[1] else Subspace(nforms(model.dim, k))
    return HodgeDecomposition(k, h, exact, coexact)


def orthogonal(a: Subspace, b: Subspace, g: np.ndarray) -> bool:
    if not a.dim or not b.dim:
        return True
    return linalg.is_zero(linalg.conj_matrix(a.basis) @ g @ b.basis.T)
