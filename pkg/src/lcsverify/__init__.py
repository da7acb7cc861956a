"""Exact verification of hard Lefschetz and locally conformally symplectic
structures on Lie algebra models of solvmanifolds."""

from .algebra import KForm, LieAlgebraModel, ModelError, d, parse_model, wedge
from .cohomology import betti_numbers, cohomology, hard_lefschetz
from .confsym import LCSPair, hl_survey, is_gcs, is_lcs, lemma_report, theorem1_check

__version__ = "0.1.0"

__all__ = [
    "KForm",
    "LCSPair",
    "LieAlgebraModel",
    "ModelError",
    "betti_numbers",
    "cohomology",
    "d",
    "hard_lefschetz",
    "hl_survey",
    "is_gcs",
    "is_lcs",
    "lemma_report",
    "parse_model",
    "theorem1_check",
    "wedge",
]
