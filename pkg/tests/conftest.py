import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lcsverify import catalog
from lcsverify.algebra import KForm, basis, model_from_data

SIX_DIM = {
    "name": "nil6",
    "dim": 6,
    "basis": ["e1", "e2", "e3", "e4", "e5", "e6"],
    "d": {"e5": [["1", [1, 2]]], "e6": [["1", [1, 3]], ["-2", [2, 4]]]},
}


@pytest.fixture(scope="session")
def paper():
    return catalog.model("paper_example")


@pytest.fixture(scope="session")
def kt():
    return catalog.model("kodaira_thurston")


@pytest.fixture(scope="session")
def torus():
    return catalog.model("torus4")


@pytest.fixture(scope="session")
def nil6():
    return model_from_data(SIX_DIM)


small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def forms(draw, dim: int, degree: int):
    coeffs = draw(st.lists(small_rationals, min_size=len(basis(dim, degree)), max_size=len(basis(dim, degree))))
    return KForm(dim, degree, {idx: Fraction(c) for idx, c in zip(basis(dim, degree), coeffs)})


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    summary = getattr(module, "SUMMARY", None)
    if summary:
        terminalreporter.section("acceptance criteria")
        for number in sorted(summary):
            terminalreporter.write_line(summary[number])
