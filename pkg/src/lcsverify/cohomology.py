"""Chevalley–Eilenberg cohomology, Lefschetz maps and hard Lefschetz."""

from __future__ import annotations

from dataclasses import dataclass
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
    d,
    d_operator,
    nforms,
    wedge,
    wedge_operator,
)
from .linalg import Subspace


def kernel(op: GradedOperator) -> Subspace:
    return linalg.kernel(op.matrix)


def image(op: GradedOperator) -> Subspace:
    return linalg.image(op.matrix)


@dataclass(frozen=True, eq=False)
class CohomologySpace:
    degree: int
    representatives: tuple[KForm, ...]
    kernel: Subspace
    image: Subspace

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, form: KForm) -> np.ndarray:
        """Coordinates of [form] in the representative basis."""
        v = form.to_vector()
        if not self.kernel.contains(v):
            raise ModelError(f"{form} is not closed")
        cols = [r.to_vector() for r in self.representatives] + self.image.vectors()
        if not cols:
            return linalg.zero_vector(0)
        x = linalg.solve(np.stack(cols, axis=1), v)
        return x[: self.dim]

    def is_zero_class(self, form: KForm) -> bool:
        return self.image.contains(form.to_vector())

    def form(self, coords) -> KForm:
        """The cocycle sum_i coords[i] * representative_i."""
        out = KForm.zero(self.representatives[0].dim, self.degree) if self.representatives else None
        for c, r in zip(coords, self.representatives):
            out = out + c * r
        return out


@lru_cache(maxsize=256)
def cohomology(model: LieAlgebraModel, k: int) -> CohomologySpace:
    """H^k with representatives completing im d_{k-1} inside ker d_k.

    Kernel basis vectors (in canonical echelon order) are taken greedily when
    independent of the image plus those already taken.
    """
    ker = kernel(d_operator(model, k))
    img = image(d_operator(model, k - 1)) if k > 0 else Subspace(nforms(model.dim, k))
    chosen: list[np.ndarray] = []
    span = img
    for v in ker.vectors():
        if not span.contains(v):
            chosen.append(v)
            span = span + Subspace(ker.ambient, [v])
    reps = tuple(KForm.from_vector(model.dim, k, v) for v in chosen)
    return CohomologySpace(k, reps, ker, img)


def betti_numbers(model: LieAlgebraModel) -> tuple[int, ...]:
    return tuple(cohomology(model, k).dim for k in range(model.dim + 1))


def _require_closed_2form(model: LieAlgebraModel, omega: KForm):
    if omega.degree != 2:
        raise ModelError("ω must be a 2-form")
    if d(model, omega):
        raise ModelError("ω is not closed")


def lefschetz_map(model: LieAlgebraModel, omega: KForm, k: int) -> np.ndarray:
    """Matrix of [L^{n-k}]: H^k → H^{2n-k} (columns are images of representatives)."""
    _require_closed_2form(model, omega)
    n = model.n
    if not 0 <= k <= n:
        raise ModelError(f"Lefschetz degree must lie in [0, {n}]")
    src = cohomology(model, k)
    dst = cohomology(model, model.dim - k)
    power = omega.power(n - k)
    cols = [dst.coordinates(wedge(power, r)) for r in src.representatives]
    if not cols:
        return linalg.zeros(dst.dim, 0)
    return np.stack(cols, axis=1)


@dataclass(frozen=True, eq=False)
class HardLefschetzResult:
    degree: int
    isomorphism: bool
    rank: int
    matrix: np.ndarray
    betti_source: int
    betti_target: int
    kernel_classes: tuple[KForm, ...]


def hard_lefschetz(model: LieAlgebraModel, omega: KForm, k: int = 1) -> HardLefschetzResult:
    m = lefschetz_map(model, omega, k)
    src = cohomology(model, k)
    b_src, b_dst = src.dim, cohomology(model, model.dim - k).dim
    r = linalg.rank(m) if m.size else 0
    iso = b_src == b_dst and r == b_src
    witnesses = tuple(src.form(v) for v in linalg.nullspace(m)) if src.dim else ()
    return HardLefschetzResult(k, iso, r, m, b_src, b_dst, witnesses)


def lefschetz_power_operator(omega: KForm, k: int, power: int) -> GradedOperator:
    """α ↦ ω^power ∧ α on Λ^k, not divided by any factorial."""
    return wedge_operator(omega.power(power), k)


def euler_characteristic(model: LieAlgebraModel) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti_numbers(model)))


def volume_coefficient_of_power(omega: KForm) -> Fraction:
    """Coefficient of ω^n / n! on e1...e2n."""
    n = omega.dim // 2
    return omega.power(n).top_coefficient() / factorial(n)
