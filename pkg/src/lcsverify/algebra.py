"""Lie-algebra models and the exterior algebra of invariant forms.

A model is given by the differentials of its basis covectors,
``de^k = sum_{i<j} c^k_ij e^i ^ e^j``. Everything here is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .scalars import GaussianRational, conj, format_rational, format_scalar, parse_rational


class ModelError(ValueError):
    """A model (or form) file is well-formed but describes an invalid object."""


class ModelSyntaxError(ModelError):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"syntax error{where}: {msg}")
        self.line = line
        self.column = column


class JacobiError(ModelError):
    def __init__(self, degree: int, basis_form: tuple[int, ...]):
        label = "e" + "".join(map(str, basis_form)) if basis_form else "1"
        super().__init__(f"d∘d != 0 in degree {degree}, on basis form {label}")
        self.degree = degree
        self.basis_form = basis_form


def nforms(dim: int, k: int) -> int:
    return comb(dim, k) if 0 <= k <= dim else 0


@lru_cache(maxsize=None)
def basis(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Strictly increasing 1-based multi-indices of length k, lexicographic."""
    if not 0 <= k <= dim:
        return ()
    return tuple(combinations(range(1, dim + 1), k))


@lru_cache(maxsize=None)
def basis_position(dim: int, k: int) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(basis(dim, k))}


def merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of the shuffle sorting a+b (both sorted, disjoint)."""
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


def _label(idx: tuple[int, ...]) -> str:
    if not idx:
        return "1"
    if all(i < 10 for i in idx):
        return "e" + "".join(map(str, idx))
    return "e(" + ",".join(map(str, idx)) + ")"


@dataclass(frozen=True)
class KForm:
    """A constant-coefficient k-form on a 2n-dimensional model."""

    dim: int
    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= self.dim:
            raise ModelError(f"degree {self.degree} outside [0, {self.dim}]")
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise ModelError(f"multi-index {idx} has wrong length for degree {self.degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ModelError(f"multi-index {idx} is not strictly increasing")
            if idx and (idx[0] < 1 or idx[-1] > self.dim):
                raise ModelError(f"multi-index {idx} out of range 1..{self.dim}")
            if isinstance(c, int):
                c = Fraction(c)
            if c:
                clean[idx] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(dim, degree, {})

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec) -> "KForm":
        return cls(dim, degree, {idx: c for idx, c in zip(basis(dim, degree), vec) if c})

    def to_vector(self) -> np.ndarray:
        pos = basis_position(self.dim, self.degree)
        v = linalg.zero_vector(nforms(self.dim, self.degree))
        for idx, c in self.terms.items():
            v[pos[idx]] = c
        return v

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "KForm"):
        if not isinstance(other, KForm):
            raise TypeError(f"expected KForm, got {type(other).__name__}")
        if other.dim != self.dim or other.degree != self.degree:
            raise ModelError("forms of different dimension or degree")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, 0) + c
        return KForm(self.dim, self.degree, out)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, scalar) -> "KForm":
        if isinstance(scalar, KForm):
            return NotImplemented
        return KForm(self.dim, self.degree, {i: scalar * c for i, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self.dim == other.dim and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def conjugate(self) -> "KForm":
        return KForm(self.dim, self.degree, {i: conj(c) for i, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(not isinstance(c, GaussianRational) or c.im == 0 for c in self.terms.values())

    def wedge(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def power(self, m: int) -> "KForm":
        out = KForm(self.dim, 0, {(): Fraction(1)})
        for _ in range(m):
            out = wedge(out, self)
        return out

    def top_coefficient(self):
        """Coefficient on e1...e2n (the form must be of top degree)."""
        if self.degree != self.dim:
            raise ModelError("top_coefficient needs a top-degree form")
        return self.terms.get(tuple(range(1, self.dim + 1)), Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            s = format_scalar(c)
            if s == "1":
                parts.append(_label(idx))
            elif s == "-1":
                parts.append("-" + _label(idx))
            else:
                if isinstance(c, GaussianRational) and c.re and c.im:
                    s = f"({s})"
                parts.append(f"{s}*{_label(idx)}" if idx else s)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"KForm(dim={self.dim}, degree={self.degree}, {self})"


def basis_form(dim: int, *indices: int, coeff=1) -> KForm:
    """The form coeff * e^{i1} ^ ... ^ e^{ik}, indices in any order."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return KForm.zero(dim, len(idx))
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return KForm(dim, len(idx), {tuple(sorted(idx)): sign * Fraction(coeff) if isinstance(coeff, int) else sign * coeff})


def wedge(a: KForm, b: KForm) -> KForm:
    if a.dim != b.dim:
        raise ModelError("wedge of forms on different models")
    deg = a.degree + b.degree
    if deg > a.dim:
        raise ModelError(f"wedge degree {deg} exceeds dimension {a.dim}")
    out: dict = {}
    for ia, ca in a.terms.items():
        sa = set(ia)
        for ib, cb in b.terms.items():
            if sa.intersection(ib):
                continue
            idx = tuple(sorted(ia + ib))
            out[idx] = out.get(idx, 0) + merge_sign(ia, ib) * ca * cb
    return KForm(a.dim, deg, out)


@dataclass(frozen=True, eq=False)
class GradedOperator:
    """Linear map Λ^source → Λ^target in the lexicographic multi-index bases."""

    dim: int
    source: int
    target: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=object)
        shape = (nforms(self.dim, self.target), nforms(self.dim, self.source))
        if m.shape != shape:
            if m.size == 0 and 0 in shape:
                m = np.zeros(shape, dtype=object)
            else:
                raise ModelError(f"operator matrix has shape {m.shape}, expected {shape}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        if not isinstance(other, GradedOperator):
            return NotImplemented
        if other.target != self.source or other.dim != self.dim:
            raise ModelError(
                f"cannot compose Λ^{other.source}→Λ^{other.target} with Λ^{self.source}→Λ^{self.target}"
            )
        return GradedOperator(self.dim, other.source, self.target, self.matrix @ other.matrix)

    def _same_shape(self, other: "GradedOperator"):
        if (self.dim, self.source, self.target) != (other.dim, other.source, other.target):
            raise ModelError("operators have different degrees")

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._same_shape(other)
        return GradedOperator(self.dim, self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        self._same_shape(other)
        return GradedOperator(self.dim, self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "GradedOperator":
        return GradedOperator(self.dim, self.source, self.target, -self.matrix)

    def __mul__(self, scalar) -> "GradedOperator":
        if isinstance(scalar, GradedOperator):
            return NotImplemented
        return GradedOperator(self.dim, self.source, self.target, self.matrix * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return (self.dim, self.source, self.target) == (
            other.dim,
            other.source,
            other.target,
        ) and linalg.equal(self.matrix, other.matrix)

    __hash__ = None

    def __call__(self, form: KForm) -> KForm:
        if form.degree != self.source or form.dim != self.dim:
            raise ModelError(f"operator on Λ^{self.source} applied to a {form.degree}-form")
        return KForm.from_vector(self.dim, self.target, self.matrix @ form.to_vector())

    def is_zero(self) -> bool:
        return linalg.is_zero(self.matrix)

    def conjugate(self) -> "GradedOperator":
        return GradedOperator(self.dim, self.source, self.target, linalg.conj_matrix(self.matrix))

    def complexified(self) -> "GradedOperator":
        return GradedOperator(self.dim, self.source, self.target, linalg.complexify(self.matrix))

    def is_real(self) -> bool:
        return linalg.is_real(self.matrix)

    def real(self) -> "GradedOperator":
        return GradedOperator(self.dim, self.source, self.target, linalg.real_matrix(self.matrix))

    def rows(self) -> list[list]:
        return [list(r) for r in self.matrix]


def identity_operator(dim: int, k: int) -> GradedOperator:
    return GradedOperator(dim, k, k, linalg.identity(nforms(dim, k)))


def zero_operator(dim: int, source: int, target: int) -> GradedOperator:
    return GradedOperator(dim, source, target, linalg.zeros(nforms(dim, target), nforms(dim, source)))


def operator_from_images(dim: int, source: int, target: int, images) -> GradedOperator:
    """Build the matrix whose columns are the given target-degree forms."""
    cols = [f.to_vector() for f in images]
    m = np.stack(cols, axis=1) if cols else linalg.zeros(nforms(dim, target), 0)
    return GradedOperator(dim, source, target, m)


def wedge_operator(form: KForm, k: int) -> GradedOperator:
    """The map α ↦ form ∧ α on Λ^k."""
    dim = form.dim
    return operator_from_images(
        dim,
        k,
        k + form.degree,
        [wedge(form, KForm(dim, k, {idx: Fraction(1)})) for idx in basis(dim, k)],
    )


@dataclass(frozen=True)
class LieAlgebraModel:
    """Invariant model of Γ\\G: the differentials of a basis of g*."""

    name: str
    dim: int
    basis: tuple[str, ...]
    differential: tuple[KForm, ...]
    note: str = ""

    @property
    def n(self) -> int:
        return self.dim // 2

    def d_of_basis(self, i: int) -> KForm:
        """de^i for 1-based i."""
        return self.differential[i - 1]


def _d_form(model: LieAlgebraModel, idx: tuple[int, ...]) -> KForm:
    dim = model.dim
    k = len(idx)
    out = KForm.zero(dim, k + 1)
    for a, i in enumerate(idx):
        left = KForm(dim, a, {idx[:a]: Fraction(1)})
        right = KForm(dim, k - a - 1, {idx[a + 1 :]: Fraction(1)})
        term = wedge(wedge(left, model.d_of_basis(i)), right)
        out = out + term if a % 2 == 0 else out - term
    return out


@lru_cache(maxsize=256)
def d_operator(model: LieAlgebraModel, k: int) -> GradedOperator:
    """Matrix of d: Λ^k → Λ^{k+1}, extended from de^i as an antiderivation."""
    dim = model.dim
    if k >= dim or k < 0:
        return zero_operator(dim, k, k + 1)
    return operator_from_images(dim, k, k + 1, [_d_form(model, idx) for idx in basis(dim, k)])


def d(model: LieAlgebraModel, form: KForm) -> KForm:
    if form.degree >= model.dim:
        raise ModelError("d of a top-degree form has no target; it is zero as an operator")
    return d_operator(model, form.degree)(form)


def automorphism_extension(map1, k: int) -> GradedOperator:
    """Extend an invertible map on Λ^1 multiplicatively to Λ^k."""
    m = map1.matrix if isinstance(map1, GradedOperator) else np.asarray(map1, dtype=object)
    dim = m.shape[0]
    if m.shape != (dim, dim):
        raise ModelError("automorphism_extension needs a square map on Λ^1")
    if isinstance(map1, GradedOperator) and (map1.source, map1.target) != (1, 1):
        raise ModelError("automorphism_extension needs a map Λ^1 → Λ^1")
    if not linalg.det(m):
        raise ModelError("automorphism_extension of a non-invertible map")
    return GradedOperator(dim, k, k, linalg.compound(m, k))


def is_unimodular(model: LieAlgebraModel) -> bool:
    return d_operator(model, model.dim - 1).is_zero()


def check_jacobi(model: LieAlgebraModel) -> None:
    for k in range(model.dim - 1):
        dd = d_operator(model, k + 1) @ d_operator(model, k)
        if not dd.is_zero():
            col = next(j for j in range(dd.matrix.shape[1]) if not linalg.is_zero(dd.matrix[:, j]))
            raise JacobiError(k, basis(model.dim, k)[col])


# --- file formats ----------------------------------------------------------


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, exc.lineno, exc.colno) from None


def _parse_terms(raw, dim: int, degree: int | None, what: str) -> dict:
    if not isinstance(raw, list):
        raise ModelError(f"{what}: expected a list of [coefficient, indices] pairs")
    terms: dict = {}
    for entry in raw:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[1], list)):
            raise ModelError(f"{what}: malformed term {entry!r}")
        coeff_raw, idx_raw = entry
        try:
            coeff = parse_rational(coeff_raw)
        except ValueError as exc:
            raise ModelError(f"{what}: {exc}") from None
        if not all(isinstance(i, int) and not isinstance(i, bool) for i in idx_raw):
            raise ModelError(f"{what}: indices must be integers: {idx_raw!r}")
        idx = tuple(idx_raw)
        if degree is not None and len(idx) != degree:
            raise ModelError(f"{what}: index list {list(idx)} must have length {degree}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ModelError(f"{what}: indices {list(idx)} must be strictly increasing")
        if idx and (idx[0] < 1 or idx[-1] > dim):
            raise ModelError(f"{what}: index out of range 1..{dim} in {list(idx)}")
        if idx in terms:
            raise ModelError(f"{what}: duplicate index {list(idx)}")
        terms[idx] = coeff
    return terms


def model_from_data(data) -> LieAlgebraModel:
    if not isinstance(data, dict):
        raise ModelError("model file must be an object with name, dim, basis, d")
    for key in ("name", "dim", "d"):
        if key not in data:
            raise ModelError(f"model file is missing field {key!r}")
    name = data["name"]
    dim = data["dim"]
    if not isinstance(name, str):
        raise ModelError("name must be a string")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
        raise ModelError("dim must be a positive integer")
    if dim % 2:
        raise ModelError(f"dimension {dim} is odd")
    labels = data.get("basis", [f"e{i}" for i in range(1, dim + 1)])
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ModelError("basis must be a list of strings")
    if len(labels) != dim:
        raise ModelError(f"basis has {len(labels)} labels, dim is {dim}")
    if len(set(labels)) != dim:
        raise ModelError("duplicate basis labels")
    raw_d = data["d"]
    if not isinstance(raw_d, dict):
        raise ModelError("d must map basis labels to term lists")
    unknown = set(raw_d) - set(labels)
    if unknown:
        raise ModelError(f"d refers to unknown basis labels {sorted(unknown)}")
    diffs = tuple(
        KForm(dim, 2, _parse_terms(raw_d.get(lab, []), dim, 2, f"d[{lab}]")) for lab in labels
    )
    model = LieAlgebraModel(name, dim, tuple(labels), diffs, note=data.get("note", ""))
    check_jacobi(model)
    return model


def parse_model(text: str) -> LieAlgebraModel:
    """Parse and validate a model file; d∘d = 0 is checked on every degree."""
    return model_from_data(_load_json(text))


def model_to_data(model: LieAlgebraModel) -> dict:
    data = {
        "name": model.name,
        "dim": model.dim,
        "basis": list(model.basis),
        "d": {lab: form_terms_data(f) for lab, f in zip(model.basis, model.differential)},
    }
    if model.note:
        data["note"] = model.note
    return data


def serialize_model(model: LieAlgebraModel) -> str:
    return json.dumps(model_to_data(model), indent=2) + "\n"


def form_terms_data(form: KForm) -> list:
    return [[format_scalar(form.terms[idx]), list(idx)] for idx in sorted(form.terms)]


def form_to_data(form: KForm) -> dict:
    return {"degree": form.degree, "terms": form_terms_data(form)}


def form_from_data(data, dim: int) -> KForm:
    if not isinstance(data, dict) or "degree" not in data or "terms" not in data:
        raise ModelError("form file must be an object with degree and terms")
    degree = data["degree"]
    if not isinstance(degree, int) or not 0 <= degree <= dim:
        raise ModelError(f"form degree must be an integer in [0, {dim}]")
    return KForm(dim, degree, _parse_terms(data["terms"], dim, degree, "terms"))


def parse_form(text: str, dim: int) -> KForm:
    return form_from_data(_load_json(text), dim)


def serialize_form(form: KForm) -> str:
    return json.dumps(form_to_data(form), indent=2) + "\n"


def rational_rows(m: np.ndarray) -> list[list[str]]:
    return [[format_scalar(x) for x in row] for row in m]


__all__ = [
    "GradedOperator",
    "JacobiError",
    "KForm",
    "LieAlgebraModel",
    "ModelError",
    "ModelSyntaxError",
    "automorphism_extension",
    "basis",
    "basis_form",
    "d",
    "d_operator",
    "format_rational",
    "is_unimodular",
    "parse_form",
    "parse_model",
    "serialize_model",
    "wedge",
    "wedge_operator",
]
