"""Symplectic, LCS and GCS predicates and the reports built on them.

lemma_report and theorem1_check evaluate the degree-1 harmonic conditions and
the LCS ⇒ GCS argument step by step; hl_survey samples random symplectic forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .acs import (
    ACSError,
    AlmostComplexStructure,
    almost_kahler_identity,
    apply_j,
    complex_harmonics,
    dc_from_components,
    dc_operator,
    decompose_d,
    is_compatible,
    is_nondegenerate,
    j_is_orthogonal,
    projectors_are_complete,
    weil_identity,
)
from .algebra import (
    KForm,
    LieAlgebraModel,
    ModelError,
    d,
    d_operator,
    is_unimodular,
    wedge,
    wedge_operator,
)
from .cohomology import cohomology, hard_lefschetz
from .hodge import Metric, d_family, gram, harmonics, projection

HYPOTHESES = ("unimodular", "symplectic", "HL1", "J-compat-omega", "J-compat-eta", "LCS")


class NoLeeFormError(ValueError):
    """dη = θ ∧ η has no closed solution θ."""

    def __init__(self, reason: str, residual: KForm | None = None):
        super().__init__(reason)
        self.residual = residual


class NoSymplecticFormError(ValueError):
    pass


def is_symplectic(model: LieAlgebraModel, omega: KForm) -> bool:
    return omega.degree == 2 and not d(model, omega) and is_nondegenerate(omega)


@dataclass(frozen=True)
class LCSPair:
    eta: KForm
    theta: KForm


def is_lcs(model: LieAlgebraModel, pair: LCSPair) -> bool:
    eta, theta = pair.eta, pair.theta
    if eta.degree != 2 or theta.degree != 1:
        return False
    return (
        not d(model, theta)
        and is_nondegenerate(eta)
        and d(model, eta) == wedge(theta, eta)
    )


def lee_class(model: LieAlgebraModel, theta: KForm) -> np.ndarray:
    """Coordinates of [θ] in the H^1 representative basis."""
    if theta.degree != 1:
        raise ModelError("the Lee form is a 1-form")
    if d(model, theta):
        raise ModelError("θ is not closed")
    return cohomology(model, 1).coordinates(theta)


def is_gcs(model: LieAlgebraModel, pair: LCSPair) -> bool:
    return is_lcs(model, pair) and linalg.is_zero(lee_class(model, pair.theta))


def lee_form_from_eta(model: LieAlgebraModel, eta: KForm) -> KForm:
    """The unique θ with θ ∧ η = dη (raises NoLeeFormError if none is closed)."""
    if eta.degree != 2 or not is_nondegenerate(eta):
        raise ModelError("η must be a nondegenerate 2-form")
    w = wedge_operator(eta, 1)
    target = d(model, eta)
    x = linalg.solve(w.matrix, target.to_vector())
    if x is None:
        raise NoLeeFormError("dη is not of the form θ ∧ η", target)
    theta = KForm.from_vector(model.dim, 1, x)
    if d(model, theta):
        raise NoLeeFormError("the solution θ is not closed", d(model, theta))
    return theta


@dataclass(frozen=True)
class HodgeSplit:
    h: KForm
    exact_part: KForm
    coexact_part: KForm


def hodge_split(model: LieAlgebraModel, theta: KForm, metric: Metric) -> HodgeSplit:
    """θ = h + exact + coexact, orthogonal for the metric's gram."""
    k = theta.degree
    g = gram(metric, k)
    v = theta.to_vector()
    h_space = harmonics(d_family(model), metric, k).space
    h = projection(h_space, g) @ v
    if k > 0:
        exact_space = linalg.image(d_operator(model, k - 1).matrix)
        exact = projection(exact_space, g) @ v
    else:
        exact = linalg.zero_vector(len(v))
    coexact = v - h - exact
    dim = model.dim
    return HodgeSplit(
        KForm.from_vector(dim, k, h),
        KForm.from_vector(dim, k, exact),
        KForm.from_vector(dim, k, coexact),
    )


# --- degree-1 harmonic conditions ----------------------------------------


@dataclass
class LemmaReport:
    model: str
    conditions: dict  # "1".."4" -> bool
    equivalent: bool
    dims: dict
    identities: dict

    @property
    def all_true(self) -> bool:
        return all(self.conditions.values())

    @property
    def clean(self) -> bool:
        return self.all_true and self.equivalent and all(self.identities.values())


def lemma_report(model: LieAlgebraModel, omega: KForm, J: AlmostComplexStructure) -> LemmaReport:
    """Evaluate the four degree-1 conditions for one almost-Kähler structure."""
    if not is_symplectic(model, omega):
        raise ACSError("not almost-Kähler: ω is not symplectic")
    compat = is_compatible(J, omega)
    if not compat:
        raise ACSError("not almost-Kähler: J is not compatible with ω")
    metric = compat.metric
    n = model.n
    dim = model.dim
    decomp = decompose_d(model, J)

    hd = harmonics(d_family(model), metric, 1).space
    hdc = harmonics(lambda k: dc_operator(model, J, k), metric, 1, tag="dc").space
    hc = hd.complexified()
    h10 = hc & decomp.type_subspace(1, 0)
    h01 = hc & decomp.type_subspace(0, 1)
    pure = h10 + h01
    h_dbar = complex_harmonics(decomp, "dbar", metric, 1).space
    h_mu = complex_harmonics(decomp, "mu", metric, 1).space
    inter = h_dbar & h_mu

    hl = hard_lefschetz(model, omega, 1)
    conditions = {
        "1": hl.isomorphism,
        "2": hd == hdc,
        "3": pure == hc,
        "4": inter == hc,
    }
    lpow = wedge_operator(omega.power(n - 1), 1).matrix
    sl2 = inter.dim == 0 or linalg.rank(lpow @ inter.basis.T) == inter.dim
    identities = {
        "intersection": (hc & hdc.complexified()) == pure,
        "containment_pure_in_dbar_mu": pure <= inter,
        "containment_dbar_mu_in_d": inter <= hc,
        "sl2_injective": sl2,
        "weil": weil_identity(omega, J),
        "almost_kahler": all(almost_kahler_identity(decomp, metric, k) for k in range(dim + 1)),
        "dc_dual_path": all(dc_from_components(decomp, k) == dc_operator(model, J, k) for k in range(dim)),
        "projectors": all(projectors_are_complete(decomp, k) for k in range(dim + 1)),
        "j_orthogonal": all(j_is_orthogonal(J, metric, k) for k in range(dim + 1)),
    }
    dims = {
        "H1_d": hd.dim,
        "H1_dc": hdc.dim,
        "H10_d": h10.dim,
        "H01_d": h01.dim,
        "H1_dbar": h_dbar.dim,
        "H1_mu": h_mu.dim,
        "H1_dbar_cap_mu": inter.dim,
        "b1": cohomology(model, 1).dim,
        "lefschetz_rank": hl.rank,
    }
    vals = list(conditions.values())
    return LemmaReport(model.name, conditions, all(v == vals[0] for v in vals), dims, identities)


# --- LCS ⇒ GCS pipeline ----------------------------------------------------


@dataclass
class TheoremReport:
    hypotheses: dict
    identities: dict
    positivity_coefficient: Fraction
    theta_is_zero: bool
    verdict: str  # ThetaZero | HypothesisFailed | ContradictionCertificate
    failed: str | None = None
    lee_class: list = field(default_factory=list)
    split_metric: str = ""

    @property
    def clean(self) -> bool:
        return self.verdict == "ThetaZero"


def _compat(J: AlmostComplexStructure, tau: KForm):
    try:
        return is_compatible(J, tau)
    except ACSError:
        return None


def theorem1_check(
    model: LieAlgebraModel, omega: KForm, pair: LCSPair, J: AlmostComplexStructure
) -> TheoremReport:
    """Run every step of the LCS ⇒ GCS argument on the given data.

    Failures are verdicts, never exceptions.
    """
    J.require_exact()
    eta, theta = pair.eta, pair.theta
    n = model.n
    dim = model.dim

    hyp: dict = {}
    hyp["unimodular"] = is_unimodular(model)
    hyp["symplectic"] = is_symplectic(model, omega)
    hyp["HL1"] = hyp["symplectic"] and hard_lefschetz(model, omega, 1).isomorphism
    c_omega = _compat(J, omega)
    c_eta = _compat(J, eta) if eta.degree == 2 else None
    hyp["J-compat-omega"] = bool(c_omega)
    hyp["J-compat-eta"] = bool(c_eta)
    hyp["LCS"] = is_lcs(model, pair)

    if c_omega:
        metric, split_metric = c_omega.metric, "omega"
    elif c_eta:
        metric, split_metric = c_eta.metric, "eta"
    else:
        metric, split_metric = Metric.identity(dim), "identity"

    ident: dict = {}
    closed = theta.degree == 1 and not d(model, theta)
    if closed:
        split = hodge_split(model, theta, metric)
        ident["hodge_split_exact_part_zero"] = split.exact_part.is_zero()
        ident["hodge_split_h_equals_theta"] = split.h == theta
        lee = [c for c in lee_class(model, theta)]
    else:
        ident["hodge_split_exact_part_zero"] = False
        ident["hodge_split_h_equals_theta"] = False
        lee = []

    j_theta = apply_j(J, theta)
    eta_pow = eta.power(n - 1)
    ident["dc_theta_zero"] = dc_operator(model, J, 1)(theta).is_zero()
    ident["dc_eta"] = dc_operator(model, J, 2)(eta) == -wedge(j_theta, eta)
    ddc = d(model, dc_operator(model, J, eta_pow.degree)(eta_pow))
    twist = wedge(wedge(theta, j_theta), eta_pow)
    ident["ddc_eta_power"] = ddc == (-((n - 1) ** 2)) * twist
    ident["ddc_integral_vanishes"] = ddc.is_zero()
    c = twist.top_coefficient()
    theta_zero = theta.is_zero()

    failed = next((h for h in HYPOTHESES if not hyp[h]), None)
    if failed is not None:
        verdict = "HypothesisFailed"
    elif theta_zero and c == 0 and all(ident.values()):
        verdict = "ThetaZero"
    else:
        verdict = "ContradictionCertificate"
    return TheoremReport(hyp, ident, c, theta_zero, verdict, failed, lee, split_metric)


# --- survey ----------------------------------------------------------------


@dataclass
class SurveyReport:
    model: str
    samples: int
    seed: int
    hl_true: int
    rejected: int
    fraction: Fraction
    hl_false_examples: list
    hl_true_examples: list


def hl_survey(model: LieAlgebraModel, samples: int, seed: int, box: int = 5, max_rejections: int = 2000) -> SurveyReport:
    """Sample symplectic forms inside ker d² and count those with HL in degree 1.

    Coefficients on the canonical basis of closed 2-forms are uniform integers
    in [-box, box]; degenerate draws are rejected.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    closed = linalg.kernel(d_operator(model, 2).matrix).vectors()
    rng = random.Random(seed)
    accepted = hl_true = rejected = streak = 0
    true_ex: list = []
    false_ex: list = []
    while accepted < samples:
        coeffs = [rng.randint(-box, box) for _ in closed]
        v = sum((c * b for c, b in zip(coeffs, closed)), linalg.zero_vector(len(closed[0]) if closed else 0))
        omega = KForm.from_vector(model.dim, 2, v) if closed else KForm.zero(model.dim, 2)
        if not is_nondegenerate(omega):
            rejected += 1
            streak += 1
            if streak > max_rejections:
                raise NoSymplecticFormError(
                    f"{max_rejections} consecutive degenerate samples in ker d² "
                    f"(dim {len(closed)}); the model likely has no symplectic form"
                )
            continue
        streak = 0
        accepted += 1
        if hard_lefschetz(model, omega, 1).isomorphism:
            hl_true += 1
            if len(true_ex) < 5:
                true_ex.append(omega)
        elif len(false_ex) < 5:
            false_ex.append(omega)
    return SurveyReport(model.name, samples, seed, hl_true, rejected, Fraction(hl_true, samples), false_ex, true_ex)
