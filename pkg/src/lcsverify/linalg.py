"""Exact linear algebra over Q and Q(i).

Matrices are numpy ``object`` arrays whose entries are ints, Fractions or
GaussianRationals; numpy only supplies shapes and matmul. Every elimination
here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .scalars import conj, imag_part, real_part, to_gaussian


def matrix(rows, ncols: int | None = None) -> np.ndarray:
    rows = [list(r) for r in rows]
    if not rows:
        return np.zeros((0, ncols or 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != out.shape[1]:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = Fraction(x) if isinstance(x, int) else x
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def vector(entries) -> np.ndarray:
    entries = list(entries)
    out = np.empty(len(entries), dtype=object)
    for i, x in enumerate(entries):
        out[i] = Fraction(x) if isinstance(x, int) else x
    return out


def zero_vector(n: int) -> np.ndarray:
    out = np.empty(n, dtype=object)
    out.fill(Fraction(0))
    return out


def is_zero(a: np.ndarray) -> bool:
    return all(not x for x in a.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and is_zero(a - b)


def conj_matrix(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = conj(x)
    return out


def hermitian(a: np.ndarray) -> np.ndarray:
    return conj_matrix(a).T.copy()


def complexify(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = to_gaussian(x)
    return out


def real_matrix(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = real_part(x)
    return out


def imag_matrix(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = imag_part(x)
    return out


def is_real(a: np.ndarray) -> bool:
    return all(imag_part(x) == 0 for x in a.flat)


def to_float(a: np.ndarray) -> np.ndarray:
    return np.array([[float(real_part(x)) for x in row] for row in a], dtype=float).reshape(a.shape)


# --- elimination -----------------------------------------------------------


def bareiss(a: np.ndarray) -> tuple[np.ndarray, int, int]:
    """Fraction-free forward elimination.

    Returns (echelon matrix, rank, sign of the row permutation). For integral
    input every intermediate entry stays integral; the last pivot of a square
    full-rank matrix is its determinant up to that sign.
    """
    m = a.copy()
    nrows, ncols = m.shape
    prev = Fraction(1)
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i, c]), None)
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
            sign = -sign
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i, j] = (m[r, c] * m[i, j] - m[i, c] * m[r, j]) / prev
            m[i, c] = Fraction(0)
        prev = m[r, c]
        r += 1
    return m, r, sign


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return bareiss(a)[1]


def det(a: np.ndarray):
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    m, r, sign = bareiss(a)
    if r < n:
        return Fraction(0)
    # with row swaps only, the final pivot is the determinant itself
    return sign * m[n - 1, n - 1]


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (canonical) and pivot columns."""
    m = a.copy()
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i, c]), None)
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        p = m[r, c]
        m[r] = [x / p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i, c]:
                f = m[i, c]
                m[i] = m[i] - f * m[r]
        pivots.append(c)
        r += 1
    return m[:r].copy(), pivots


def inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, identity(n)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return r[:, n:].copy()


def nullspace(a: np.ndarray) -> list[np.ndarray]:
    """Basis of {x : a x = 0}, one vector per free column."""
    ncols = a.shape[1]
    if a.shape[0] == 0:
        r, pivots = np.zeros((0, ncols), dtype=object), []
    else:
        r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = zero_vector(ncols)
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row, f]
        basis.append(v)
    return basis


def solve(a: np.ndarray, b: np.ndarray):
    """One solution of a x = b, or None when inconsistent."""
    ncols = a.shape[1]
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(aug) if aug.shape[0] else (aug, [])
    if ncols in pivots:
        return None
    x = zero_vector(ncols)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, ncols]
    return x


def compound(a: np.ndarray, k: int) -> np.ndarray:
    """k-th compound matrix: entry (I, J) is the minor det a[I, J].

    Rows/columns are indexed by increasing k-subsets in lexicographic order.
    """
    nr, nc = a.shape
    rows = list(combinations(range(nr), k))
    cols = list(combinations(range(nc), k))
    out = zeros(len(rows), len(cols))
    for i, ri in enumerate(rows):
        for j, cj in enumerate(cols):
            out[i, j] = det(a[np.ix_(ri, cj)]) if k else Fraction(1)
    return out


def leading_minors_positive(a: np.ndarray) -> bool:
    return all(real_part(det(a[:k, :k])) > 0 for k in range(1, a.shape[0] + 1))


# --- subspaces -------------------------------------------------------------


class Subspace:
    """A linear subspace of F^n held by its canonical RREF basis (rows)."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, vectors=()):
        self.ambient = ambient
        vecs = [np.asarray(v, dtype=object).reshape(-1) for v in vectors]
        for v in vecs:
            if v.shape[0] != ambient:
                raise ValueError("vector length does not match ambient dimension")
        if vecs:
            r, _ = rref(np.stack(vecs))
            self.basis = r
        else:
            self.basis = np.zeros((0, ambient), dtype=object)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, list(identity(n)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> list[np.ndarray]:
        return [row.copy() for row in self.basis]

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=object).reshape(-1)
        if not self.dim:
            return is_zero(v)
        return rank(np.vstack([self.basis, v])) == self.dim

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.dim == other.dim
            and equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.ambient, tuple(self.basis.flat)))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, self.vectors() + other.vectors())

    def __and__(self, other: "Subspace") -> "Subspace":
        if not self.dim or not other.dim:
            return Subspace(self.ambient)
        # a.U = b.W  <=>  [U^T | -W^T] (a, b) = 0
        m = np.concatenate([self.basis.T, -other.basis.T], axis=1)
        out = [self.basis.T @ v[: self.dim] for v in nullspace(m)]
        return Subspace(self.ambient, out)

    def complexified(self) -> "Subspace":
        return Subspace(self.ambient, [complexify(v) for v in self.basis])

    def conjugate(self) -> "Subspace":
        return Subspace(self.ambient, [conj_matrix(v) for v in self.basis])

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def kernel(a: np.ndarray) -> Subspace:
    return Subspace(a.shape[1], nullspace(a))


def image(a: np.ndarray) -> Subspace:
    return Subspace(a.shape[0], list(a.T))
