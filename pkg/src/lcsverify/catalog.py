"""Built-in models, named forms and almost complex structures.

Names here are public: CLI references look like ``catalog:paper_example``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .acs import AlmostComplexStructure, is_compatible, skew_matrix, standard_j
from .algebra import KForm, LieAlgebraModel, model_from_data

MODELS = {
    "torus4": {"name": "torus4", "dim": 4, "basis": ["e1", "e2", "e3", "e4"], "d": {}},
    "kodaira_thurston": {
        "name": "kodaira_thurston",
        "dim": 4,
        "basis": ["e1", "e2", "e3", "e4"],
        "d": {"e4": [["1", [1, 2]]]},
    },
    "paper_example": {
        "name": "paper_example",
        "dim": 4,
        "basis": ["e1", "e2", "e3", "e4"],
        "d": {"e1": [["1", [1, 3]]], "e2": [["-1", [2, 3]]]},
        "note": (
            "dx1 = x1 x3, dx2 = -x2 x3. Solvable, not nilpotent; "
            "a lattice is assumed."
        ),
    },
}

# name -> (model, degree, terms)
FORMS = {
    "torus_omega": ("torus4", 2, {(1, 2): 1, (3, 4): 1}),
    "omega": ("paper_example", 2, {(1, 2): 1, (3, 4): 1}),
    "eta": ("paper_example", 2, {(1, 4): 1, (2, 3): 1}),
    "theta": ("paper_example", 1, {(3,): -1}),
    "kt_omega": ("kodaira_thurston", 2, {(1, 4): 1, (2, 3): 1}),
    "kt_eta": ("kodaira_thurston", 2, {(1, 2): 1, (3, 4): 1}),
    "kt_theta": ("kodaira_thurston", 1, {(3,): -1}),
    # LCS with theta = -e3, sharing a compatible J (cx_j) with omega
    "cx_eta": ("paper_example", 2, {(1, 4): 2, (2, 3): 1, (3, 4): 3}),
}

# J(E_j) = sum_i c E_i, written {j: {i: c}}
_J_ETA = {1: {4: 1}, 4: {1: -1}, 2: {3: 1}, 3: {2: -1}}

# symplectic form attached to each model for lemma-report and survey runs
SYMPLECTIC = {"torus4": "torus_omega", "paper_example": "omega", "kodaira_thurston": "kt_omega"}


def model(name: str) -> LieAlgebraModel:
    if name not in MODELS:
        raise KeyError(f"unknown catalog model {name!r}")
    return _model(name)


@lru_cache(maxsize=None)
def _model(name: str) -> LieAlgebraModel:
    return model_from_data(MODELS[name])


def form(name: str) -> KForm:
    if name not in FORMS:
        raise KeyError(f"unknown catalog form {name!r}")
    mname, degree, terms = FORMS[name]
    return KForm(MODELS[mname]["dim"], degree, {k: Fraction(v) for k, v in terms.items()})


def form_model(name: str) -> str:
    return FORMS[name][0]


def transvection(tau: KForm, v, t) -> np.ndarray:
    """X ↦ X + t τ(v, X) v, a rational symplectic map of τ."""
    e = skew_matrix(tau)
    vv = linalg.vector(v)
    return linalg.identity(tau.dim) + Fraction(t) * np.outer(vv, vv @ e)


def conjugate(J: AlmostComplexStructure, p: np.ndarray) -> AlmostComplexStructure:
    return AlmostComplexStructure(p @ J.J @ linalg.inverse(p))


_BASE_J = {
    "torus_omega": lambda: standard_j(4),
    "omega": lambda: standard_j(4),
    "kt_omega": lambda: AlmostComplexStructure.from_images(4, _J_ETA),
}

_CX_J = linalg.matrix(
    [
        [0, Fraction(-5, 4), 0, Fraction(3, 2)],
        [8, 0, 6, 0],
        [0, Fraction(3, 2), 0, -2],
        [6, 0, 5, 0],
    ]
)

_SHEARS = (((1, 0, 1, 0), 1), ((0, 1, 1, 1), 2), ((1, 1, 0, 1), Fraction(-1, 2)))


@lru_cache(maxsize=None)
def compatible_structures(form_name: str) -> tuple[AlmostComplexStructure, ...]:
    """Several exactly verified J compatible with a catalog symplectic form."""
    tau = form(form_name)
    base = _BASE_J[form_name]()
    out = [base]
    for v, t in _SHEARS:
        out.append(conjugate(base, transvection(tau, v, t)))
    for J in out:
        assert is_compatible(J, tau), "catalog J failed its compatibility check"
    return tuple(out)


def structures() -> dict[str, AlmostComplexStructure]:
    out = {
        "torus_j0": standard_j(4),
        "paper_j_omega": standard_j(4),
        "paper_j_eta": AlmostComplexStructure.from_images(4, _J_ETA),
        "kt_j": AlmostComplexStructure.from_images(4, _J_ETA),
        "cx_j": AlmostComplexStructure(_CX_J),
    }
    for fname in _BASE_J:
        for i, J in enumerate(compatible_structures(fname)[1:], start=1):
            out[f"{fname}_j{i}"] = J
    return out


def structure(name: str) -> AlmostComplexStructure:
    table = structures()
    if name not in table:
        raise KeyError(f"unknown catalog almost complex structure {name!r}")
    return table[name]


def listing() -> dict:
    return {
        "models": sorted(MODELS),
        "forms": {k: v[0] for k, v in FORMS.items()},
        "structures": sorted(structures()),
    }
