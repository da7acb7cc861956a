"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line for its criterion plus its
sub-checks; pytest lists the headlines at the end of the run. Run
``python3 tests/test_acceptance.py`` for just the headlines, or
``pytest tests/test_acceptance.py -s -v`` to see every sub-check.
"""

from __future__ import annotations

import io
import random
import sys
from fractions import Fraction

import pytest

from lcsverify import catalog, linalg
from lcsverify.acs import (
    almost_kahler_identity,
    dc_from_components,
    dc_operator,
    decompose_d,
    induced_metric,
    is_compatible,
    volume_of,
    weil_identity,
)
from lcsverify.algebra import KForm, basis, d, d_operator, wedge
from lcsverify.cli import run
from lcsverify.cohomology import betti_numbers, hard_lefschetz
from lcsverify.confsym import LCSPair, hl_survey, is_gcs, is_lcs, is_symplectic, lee_class, lemma_report, theorem1_check
from lcsverify.hodge import Metric, VolumeForm, d_family, harmonics, hodge_star
from lcsverify.jsearch import SearchConfig, find_shared_j

SEED = 20240101


class Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.checks: list[tuple[str, bool, str]] = []

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((label, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _l, ok, _d in self.checks)

    def lines(self) -> list[str]:
        head = f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title}"
        body = [
            f"    {'ok  ' if ok else 'FAIL'} {label}" + (f" ({detail})" if detail else "")
            for label, ok, detail in self.checks
        ]
        return [head, *body]


SUMMARY: dict[int, str] = {}  # criterion number -> headline, read by conftest


def _emit(c: Criterion):
    SUMMARY[c.number] = c.lines()[0]
    print("\n".join(c.lines()))


def compatible_structures(form: KForm):
    return [(name, J) for name, J in sorted(catalog.structures().items()) if J.dim == form.dim and is_compatible(J, form)]


# --- criteria ------------------------------------------------------------------


def criterion_1() -> Criterion:
    c = Criterion(1, "paper_example: Betti, HL1, LCS pair, non-GCS, no shared J found")
    m = catalog.model("paper_example")
    omega, eta, theta = catalog.form("omega"), catalog.form("eta"), catalog.form("theta")
    b = betti_numbers(m)
    c.check("Betti vector (1,2,2,2,1)", b == (1, 2, 2, 2, 1), str(b))
    hl = hard_lefschetz(m, omega, 1)
    c.check("hard Lefschetz in degree 1 with rank 2", hl.isomorphism and hl.rank == 2, f"rank {hl.rank}")
    c.check("d(eta) == theta ^ eta exactly", d(m, eta) == wedge(theta, eta), f"d eta = {d(m, eta)}")
    pair = LCSPair(eta, theta)
    c.check("(eta, theta) is LCS", is_lcs(m, pair))
    cls = lee_class(m, theta)
    c.check("Lee class nonzero, not GCS", not linalg.is_zero(cls) and not is_gcs(m, pair), f"class {[str(x) for x in cls]}")
    out = find_shared_j(m, omega, eta, SearchConfig(restarts=100, seed=SEED))
    c.check(
        "find_shared_j, 100 restarts: NotFound, no exact-verified Found",
        not out.found and not out.exact_verified,
        f"{out.status}, best residual {out.best_residual:.3g}",
    )
    return c


def criterion_2() -> Criterion:
    c = Criterion(2, "Kodaira-Thurston: Betti, HL1 fails with kernel class, degree-1 conditions all false")
    m = catalog.model("kodaira_thurston")
    omega = catalog.form("kt_omega")
    b = betti_numbers(m)
    c.check("Betti vector (1,3,4,3,1)", b == (1, 3, 4, 3, 1), str(b))
    hl = hard_lefschetz(m, omega, 1)
    c.check(
        "hard Lefschetz in degree 1 false with explicit kernel class",
        not hl.isomorphism and len(hl.kernel_classes) > 0,
        "kernel " + ", ".join(str(k) for k in hl.kernel_classes),
    )
    for name, J in compatible_structures(omega):
        r = lemma_report(m, omega, J)
        c.check(f"lemma_report with {name}: four conditions false and equal", not any(r.conditions.values()) and r.equivalent)
    return c


def criterion_3() -> Criterion:
    c = Criterion(3, "degree-1 conditions (1)-(4) agree for every catalog (model, J), >= 3 J per model")
    for model_name, form_name in sorted(catalog.SYMPLECTIC.items()):
        m = catalog.model(model_name)
        omega = catalog.form(form_name)
        js = compatible_structures(omega)
        c.check(f"{model_name}: at least 3 exactly verified compatible J", len(js) >= 3, f"{len(js)} structures")
        for name, J in js:
            r = lemma_report(m, omega, J)
            flags = "".join("T" if r.conditions[k] else "F" for k in "1234")
            c.check(f"{model_name} with {name}: conditions agree", r.equivalent, f"(1)-(4) = {flags}")
    return c


def _random_form(rng: random.Random, dim: int, k: int) -> KForm:
    return KForm(dim, k, {idx: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for idx in basis(dim, k)})


def criterion_4() -> Criterion:
    c = Criterion(4, "identity suite, exact")
    models = [catalog.model(n) for n in sorted(catalog.MODELS)]
    c.check(
        "d^2 = 0 on every catalog model",
        all((d_operator(m, k + 1) @ d_operator(m, k)).is_zero() for m in models for k in range(m.dim)),
    )
    rng = random.Random(SEED)
    leibniz_ok = True
    for i in range(1000):
        m = models[i % len(models)]
        p = rng.randint(0, 3)
        q = rng.randint(0, 3 - p)
        a, b = _random_form(rng, 4, p), _random_form(rng, 4, q)
        if d(m, wedge(a, b)) != wedge(d(m, a), b) + (-1) ** p * wedge(a, d(m, b)):
            leibniz_ok = False
    c.check("Leibniz rule on 1000 random form pairs", leibniz_ok)

    split_ok = dual_ok = True
    for m in models:
        for J in catalog.structures().values():
            dec = decompose_d(m, J)
            for k in range(m.dim):
                total = dec.family("mubar")(k) + dec.family("dbar")(k) + dec.family("del")(k) + dec.family("mu")(k)
                split_ok &= total == d_operator(m, k).complexified()
                dual_ok &= dc_from_components(dec, k) == dc_operator(m, J, k)
    c.check("d = mubar + dbar + del + mu on every catalog (model, J)", split_ok)
    c.check("d^c dual-path equality on every catalog (model, J)", dual_ok)

    weil_ok = ak_ok = True
    triples = 0
    for model_name, form_name in catalog.SYMPLECTIC.items():
        m, omega = catalog.model(model_name), catalog.form(form_name)
        for _name, J in compatible_structures(omega):
            triples += 1
            weil_ok &= weil_identity(omega, J)
            dec = decompose_d(m, J)
            metric = induced_metric(J, omega)
            ak_ok &= all(almost_kahler_identity(dec, metric, k) for k in range(m.dim + 1))
    c.check("Weil identity on every almost-Kahler catalog triple", weil_ok, f"{triples} triples")
    c.check("almost-Kahler Laplacian identity on every triple, all degrees", ak_ok)

    star_ok = True
    metrics = [(Metric.identity(4), None)]
    for form_name in catalog.SYMPLECTIC.values():
        omega = catalog.form(form_name)
        for _name, J in compatible_structures(omega):
            metrics.append((induced_metric(J, omega), volume_of(omega)))
    for metric, vol in metrics:
        vol = vol or VolumeForm.standard(4)
        for k in range(5):
            s = hodge_star(metric, vol, k)
            back = hodge_star(metric, vol, 4 - k)
            star_ok &= linalg.equal((back @ s).matrix, (-1) ** (k * (4 - k)) * linalg.identity(s.matrix.shape[0]))
    c.check("star star = (-1)^(k(2n-k)) for every catalog metric", star_ok, f"{len(metrics)} metrics")

    hodge_ok = True
    for m in models:
        for metric, _vol in metrics:
            dims = tuple(harmonics(d_family(m), metric, k).dim for k in range(m.dim + 1))
            hodge_ok &= dims == betti_numbers(m)
    c.check("dim of d-harmonic k-forms equals b_k on every catalog model and metric", hodge_ok)
    return c


def _catalog_combinations():
    """(model, omega, eta, theta, J, label) over the catalog forms of each model."""
    structures = sorted(catalog.structures().items())
    for model_name in sorted(catalog.MODELS):
        m = catalog.model(model_name)
        names = [n for n in catalog.FORMS if catalog.form_model(n) == model_name]
        two = [n for n in names if catalog.form(n).degree == 2]
        one = [n for n in names if catalog.form(n).degree == 1]
        omegas = [n for n in two if is_symplectic(m, catalog.form(n))]
        thetas = [(n, catalog.form(n)) for n in one] + [("0", KForm.zero(m.dim, 1))]
        for w in omegas:
            for h in two:
                for tn, theta in thetas:
                    for jn, J in structures:
                        yield m, catalog.form(w), catalog.form(h), theta, J, f"{model_name}/{w}/{h}/{tn}/{jn}"


def criterion_5() -> Criterion:
    c = Criterion(5, "LCS-to-GCS soundness sweep and targeted verdicts")
    runs = 0
    offending = []
    for m, omega, eta, theta, J, label in _catalog_combinations():
        runs += 1
        r = theorem1_check(m, omega, LCSPair(eta, theta), J)
        if all(r.hypotheses.values()) and not theta.is_zero():
            failing = [k for k, v in r.identities.items() if not v]
            offending.append(f"{label} [failing: {', '.join(failing)}]")
    c.check(
        "no catalog run has every hypothesis true and theta != 0",
        not offending,
        f"{runs} runs; " + ("; ".join(offending) if offending else "none"),
    )
    t4 = catalog.model("torus4")
    w = catalog.form("torus_omega")
    r = theorem1_check(t4, w, LCSPair(w, KForm.zero(4, 1)), catalog.structure("torus_j0"))
    c.check("torus4 with theta = 0 gives ThetaZero", r.verdict == "ThetaZero", r.verdict)
    p = catalog.model("paper_example")
    pair = LCSPair(catalog.form("eta"), catalog.form("theta"))
    r = theorem1_check(p, catalog.form("omega"), pair, catalog.structure("paper_j_eta"))
    c.check(
        "paper_example with J_eta gives HypothesisFailed(J-compat-omega)",
        r.verdict == "HypothesisFailed" and r.failed == "J-compat-omega",
        f"{r.verdict}({r.failed})",
    )
    coeff = r.positivity_coefficient
    c.check("coefficient of theta ^ J theta ^ eta^(n-1) is > 0 (theta = -e3, eta-compatible J)", coeff > 0, f"value {coeff}")
    return c


def criterion_6() -> Criterion:
    c = Criterion(6, "hard Lefschetz survey, seed 1, 200 samples")
    for name, expected in (("paper_example", 1), ("torus4", 1), ("kodaira_thurston", 0)):
        r = hl_survey(catalog.model(name), 200, seed=1)
        dump = ""
        if r.fraction != expected:
            bad = r.hl_false_examples if expected == 1 else r.hl_true_examples
            dump = "; counterexamples " + ", ".join(str(f) for f in bad)
        c.check(f"{name}: fraction {expected}", r.fraction == expected, f"{r.hl_true}/{r.samples}{dump}")
    return c


ACCEPTANCE_COMMANDS = [
    ["betti", "--model", "catalog:paper_example"],
    ["betti", "--model", "catalog:kodaira_thurston"],
    ["hl", "--model", "catalog:paper_example", "--omega", "catalog:omega", "--degree", "1"],
    ["hl", "--model", "catalog:kodaira_thurston", "--omega", "catalog:kt_omega", "--degree", "1"],
    ["check-lcs", "--model", "catalog:paper_example", "--eta", "catalog:eta", "--theta", "catalog:theta"],
    ["lee-class", "--model", "catalog:paper_example", "--theta", "catalog:theta"],
    ["lemma-report", "--model", "catalog:paper_example", "--omega", "catalog:omega", "--j", "catalog:omega_j1"],
    ["lemma-report", "--model", "catalog:kodaira_thurston", "--omega", "catalog:kt_omega", "--j", "catalog:kt_j"],
    ["theorem1", "--model", "catalog:paper_example", "--omega", "catalog:omega", "--eta", "catalog:eta",
     "--theta", "catalog:theta", "--j", "catalog:paper_j_eta"],
    ["theorem1", "--model", "catalog:torus4", "--omega", "catalog:torus_omega", "--eta", "catalog:torus_omega",
     "--j", "catalog:torus_j0"],
    ["find-shared-j", "--model", "catalog:paper_example", "--omega", "catalog:omega", "--eta", "catalog:eta",
     "--restarts", "100", "--seed", str(SEED)],
    ["survey-hl", "--model", "catalog:paper_example", "--seed", "1", "--samples", "200"],
    ["survey-hl", "--model", "catalog:kodaira_thurston", "--seed", "1", "--samples", "200"],
]


def _machine_run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([*argv, "--format", "machine"], stdout=out, stderr=err)
    return code, out.getvalue().encode()


def criterion_7() -> Criterion:
    c = Criterion(7, "machine reports byte-identical across two runs")
    for argv in ACCEPTANCE_COMMANDS:
        first, second = _machine_run(argv), _machine_run(argv)
        c.check(" ".join(argv[:3]) + (" ..." if len(argv) > 3 else ""), first == second and bool(first[1]), f"exit {first[0]}")
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("build", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 8)])
def test_acceptance(build):
    c = build()
    _emit(c)
    assert c.passed, "\n".join(c.lines())


if __name__ == "__main__":
    results = []
    for build in CRITERIA:
        c = build()
        results.append(c.passed)
        print(c.lines()[0])
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
