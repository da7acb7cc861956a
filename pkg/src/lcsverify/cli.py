"""Command-line front end.

Exit codes: 0 predicate true or report clean, 1 predicate false or a failed
check, 2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from math import factorial
from pathlib import Path

from . import catalog, linalg
from .acs import (
    ACSError,
    AlmostComplexStructure,
    canonical_compatible_J,
    dc_operator,
    decompose_d,
    is_compatible,
    volume_of,
)
from .algebra import (
    KForm,
    LieAlgebraModel,
    ModelError,
    ModelSyntaxError,
    d,
    is_unimodular,
    model_to_data,
    parse_form,
    parse_model,
    wedge,
)
from .cohomology import betti_numbers, cohomology, hard_lefschetz
from .confsym import (
    LCSPair,
    NoLeeFormError,
    NoSymplecticFormError,
    hl_survey,
    is_gcs,
    is_lcs,
    is_symplectic,
    lee_class,
    lee_form_from_eta,
    lemma_report,
    theorem1_check,
)
from .hodge import Metric, MetricError, VolumeForm, d_family, harmonics, hodge_star
from .jsearch import SearchConfig, compatibility_residual, find_shared_j
from .reports import parse_j, render_machine, render_text

CATALOG = "catalog:"


class UsageError(Exception):
    pass


# --- input loading -----------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_model(ref: str | None) -> LieAlgebraModel:
    if ref is None:
        raise UsageError("--model is required")
    if ref.startswith(CATALOG):
        try:
            return catalog.model(ref[len(CATALOG):])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    return parse_model(_read(ref))


def load_form(ref: str | None, model: LieAlgebraModel, flag: str, degree: int | None = None) -> KForm:
    if ref is None:
        raise UsageError(f"{flag} is required")
    if ref.startswith(CATALOG):
        name = ref[len(CATALOG):]
        try:
            form = catalog.form(name)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        if form.dim != model.dim:
            raise UsageError(f"{flag}: catalog form {name!r} has dimension {form.dim}, model has {model.dim}")
    else:
        form = parse_form(_read(ref), model.dim)
    if degree is not None and form.degree != degree:
        raise UsageError(f"{flag} must be a {degree}-form")
    return form


def load_j(ref: str | None, dim: int) -> AlmostComplexStructure:
    if ref is None:
        raise UsageError("--j is required")
    if ref.startswith(CATALOG):
        try:
            J = catalog.structure(ref[len(CATALOG):])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    else:
        J = parse_j(_read(ref))
    if J.dim != dim:
        raise UsageError(f"--j has dimension {J.dim}, model has {dim}")
    return J


def _metric_and_volume(args, model: LieAlgebraModel):
    """Induced metric and ω^n/n! when --omega and --j are given, else the flat pair."""
    if args.omega is None and args.j is None:
        return Metric.identity(model.dim), VolumeForm.standard(model.dim), "identity"
    if args.omega is None or args.j is None:
        raise UsageError("--omega and --j must be given together")
    omega = load_form(args.omega, model, "--omega", 2)
    J = load_j(args.j, model.dim)
    compat = is_compatible(J, omega)
    if not compat:
        raise UsageError("--j is not compatible with --omega")
    return compat.metric, volume_of(omega), "induced"


def _check_degree(args, model: LieAlgebraModel, upper: int | None = None):
    hi = model.dim if upper is None else upper
    if not 0 <= args.degree <= hi:
        raise UsageError(f"--degree must lie in [0, {hi}]")


# --- commands ----------------------------------------------------------------
# each returns (document, exit code, optional text summary line)


def cmd_validate(args):
    if args.model is None:
        raise UsageError("--model is required")
    if args.model.startswith(CATALOG):
        model = load_model(args.model)
    else:
        text = _read(args.model)
        try:
            model = parse_model(text)
        except ModelSyntaxError:
            raise
        except ModelError as exc:
            return {"valid": False, "error": str(exc)}, 1, None
    doc = {
        "valid": True,
        "name": model.name,
        "dim": model.dim,
        "basis": list(model.basis),
        "differential": {lab: f for lab, f in zip(model.basis, model.differential)},
        "unimodular": is_unimodular(model),
    }
    return doc, 0, None


def cmd_betti(args):
    model = load_model(args.model)
    b = betti_numbers(model)
    doc = {
        "model": model.name,
        "betti": list(b),
        "euler_characteristic": sum((-1) ** k * x for k, x in enumerate(b)),
        "representatives": {str(k): list(cohomology(model, k).representatives) for k in range(model.dim + 1)},
    }
    return doc, 0, None


def cmd_hl(args):
    model = load_model(args.model)
    omega = load_form(args.omega, model, "--omega", 2)
    _check_degree(args, model, model.n)
    if not is_symplectic(model, omega):
        raise UsageError("--omega is not a symplectic form on this model")
    r = hard_lefschetz(model, omega, args.degree)
    doc = {
        "model": model.name,
        "omega": omega,
        "degree": r.degree,
        "isomorphism": r.isomorphism,
        "rank": r.rank,
        "betti_source": r.betti_source,
        "betti_target": r.betti_target,
        "matrix": r.matrix,
        "kernel_classes": list(r.kernel_classes),
    }
    summary = f"isomorphism: {'true' if r.isomorphism else 'false'}, rank {r.rank}"
    return doc, 0 if r.isomorphism else 1, summary


def cmd_star(args):
    model = load_model(args.model)
    _check_degree(args, model)
    metric, vol, source = _metric_and_volume(args, model)
    k = args.degree
    star = hodge_star(metric, vol, k)
    back = hodge_star(metric, vol, model.dim - k)
    sign = (-1) ** (k * (model.dim - k))
    involution = linalg.equal((back @ star).matrix, sign * linalg.identity(star.matrix.shape[0]))
    doc = {
        "model": model.name,
        "degree": k,
        "metric": source,
        "metric_matrix": metric.G,
        "volume": vol.form,
        "matrix": star.matrix,
        "star_star_sign": sign,
        "star_star_identity": involution,
    }
    return doc, 0 if involution else 1, None


def _delta_family(name: str, model: LieAlgebraModel, J: AlmostComplexStructure | None):
    if name == "d":
        return d_family(model)
    if J is None:
        raise UsageError(f"--delta {name} needs --omega and --j")
    if name == "dc":
        return lambda k: dc_operator(model, J, k)
    return decompose_d(model, J).family(name)


def cmd_harmonics(args):
    model = load_model(args.model)
    _check_degree(args, model)
    metric, _vol, source = _metric_and_volume(args, model)
    J = load_j(args.j, model.dim) if args.j else None
    h = harmonics(_delta_family(args.delta, model, J), metric, args.degree, tag=args.delta)
    b = cohomology(model, args.degree).dim
    doc = {
        "model": model.name,
        "operator": args.delta,
        "degree": args.degree,
        "metric": source,
        "dimension": h.dim,
        "betti": b,
        "basis": list(h.basis),
    }
    ok = h.dim == b if args.delta == "d" else True
    return doc, 0 if ok else 1, None


def cmd_check_symplectic(args):
    model = load_model(args.model)
    omega = load_form(args.omega, model, "--omega")
    doc = {
        "model": model.name,
        "omega": omega,
        "degree_two": omega.degree == 2,
        "closed": not d(model, omega),
        "symplectic": is_symplectic(model, omega),
    }
    if omega.degree == 2:
        doc["top_power_coefficient"] = omega.power(model.n).top_coefficient() / factorial(model.n)
    return doc, 0 if doc["symplectic"] else 1, None


def _theta_for(args, model: LieAlgebraModel, eta: KForm) -> tuple[KForm | None, str | None]:
    if args.theta is not None:
        return load_form(args.theta, model, "--theta", 1), None
    try:
        return lee_form_from_eta(model, eta), None
    except NoLeeFormError as exc:
        return None, str(exc)


def cmd_check_lcs(args):
    model = load_model(args.model)
    eta = load_form(args.eta, model, "--eta", 2)
    theta, why = _theta_for(args, model, eta)
    if theta is None:
        return {"model": model.name, "eta": eta, "lcs": False, "reason": why}, 1, None
    pair = LCSPair(eta, theta)
    lcs = is_lcs(model, pair)
    doc = {
        "model": model.name,
        "eta": eta,
        "theta": theta,
        "theta_closed": not d(model, theta),
        "d_eta": d(model, eta),
        "theta_wedge_eta": wedge(theta, eta),
        "lcs": lcs,
        "gcs": lcs and is_gcs(model, pair),
    }
    return doc, 0 if lcs else 1, None


def cmd_lee_class(args):
    model = load_model(args.model)
    if args.theta is None and args.eta is None:
        raise UsageError("--theta or --eta is required")
    if args.theta is not None:
        theta = load_form(args.theta, model, "--theta", 1)
    else:
        eta = load_form(args.eta, model, "--eta", 2)
        try:
            theta = lee_form_from_eta(model, eta)
        except NoLeeFormError as exc:
            return {"model": model.name, "eta": eta, "reason": str(exc)}, 1, None
    coords = lee_class(model, theta)
    zero = linalg.is_zero(coords)
    doc = {
        "model": model.name,
        "theta": theta,
        "h1_basis": list(cohomology(model, 1).representatives),
        "class": coords,
        "zero_class": zero,
        "exact": zero,
    }
    return doc, 0 if zero else 1, None


def cmd_lemma_report(args):
    model = load_model(args.model)
    omega = load_form(args.omega, model, "--omega", 2)
    J = load_j(args.j, model.dim)
    r = lemma_report(model, omega, J)
    doc = {
        "model": r.model,
        "conditions": r.conditions,
        "equivalent": r.equivalent,
        "all_true": r.all_true,
        "dimensions": r.dims,
        "identities": r.identities,
    }
    return doc, 0 if r.clean else 1, None


def cmd_theorem1(args):
    model = load_model(args.model)
    omega = load_form(args.omega, model, "--omega", 2)
    eta = load_form(args.eta, model, "--eta", 2)
    theta, why = _theta_for(args, model, eta)
    if theta is None:
        raise UsageError(f"no Lee form: {why}; pass --theta")
    J = load_j(args.j, model.dim)
    r = theorem1_check(model, omega, LCSPair(eta, theta), J)
    doc = {
        "model": model.name,
        "verdict": r.verdict,
        "failed_hypothesis": r.failed,
        "hypotheses": r.hypotheses,
        "identities": r.identities,
        "positivity_coefficient": r.positivity_coefficient,
        "theta_is_zero": r.theta_is_zero,
        "lee_class": r.lee_class,
        "split_metric": r.split_metric,
    }
    summary = f"verdict: {r.verdict}" + (f"({r.failed})" if r.failed else "")
    return doc, 0 if r.clean else 1, summary


def cmd_canonical_j(args):
    model = load_model(args.model)
    omega = load_form(args.omega, model, "--omega", 2)
    J = canonical_compatible_J(omega)
    doc = {"model": model.name, "omega": omega, "exact": J.exact, "matrix": J.J}
    if J.exact:
        doc["compatible"] = bool(is_compatible(J, omega))
    else:
        equiv, lam = compatibility_residual(J.J, omega)
        doc["equivariance_residual"] = equiv
        doc["min_eigenvalue"] = lam
    return doc, 0, None


def cmd_find_shared_j(args):
    model = load_model(args.model)
    omega = load_form(args.omega, model, "--omega", 2)
    eta = load_form(args.eta, model, "--eta", 2)
    try:
        cfg = SearchConfig(
            restarts=args.restarts,
            max_iters=args.max_iters,
            tol_residual=args.tol,
            seed=args.seed if args.seed is not None else 0,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = find_shared_j(model, omega, eta, cfg)
    doc = {
        "model": model.name,
        "status": out.status,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
        "best_restart": out.restart,
        "best_residual": out.best_residual,
        "square_residual": out.residuals.square,
        "invariance_residuals": list(out.residuals.invariance),
        "min_eigenvalues": list(out.residuals.min_eigenvalue),
        "rationalized": out.rationalized,
        "exact_verified": out.exact_verified,
        "matrix": out.J,
    }
    if out.exact_J is not None:
        doc["exact_matrix"] = out.exact_J.J
    if not out.found:
        doc["note"] = "numerical evidence only; nonexistence is not certified"
    return doc, 0 if out.found else 1, f"status: {out.status}"


def cmd_survey_hl(args):
    model = load_model(args.model)
    if args.seed is None:
        raise UsageError("--seed is required for survey-hl")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    try:
        r = hl_survey(model, args.samples, args.seed)
    except NoSymplecticFormError as exc:
        raise UsageError(str(exc)) from None
    doc = {
        "model": r.model,
        "samples": r.samples,
        "seed": r.seed,
        "hl_true": r.hl_true,
        "rejected": r.rejected,
        "fraction": r.fraction,
        "hl_false_examples": r.hl_false_examples,
        "hl_true_examples": r.hl_true_examples,
    }
    return doc, 0 if r.fraction == 1 else 1, None


def cmd_catalog(args):
    if args.model is not None:
        model = load_model(args.model)
        return {"model": model_to_data(model)}, 0, None
    listing = catalog.listing()
    doc = {"models": listing["models"], "forms": listing["forms"], "structures": listing["structures"]}
    return doc, 0, None


COMMANDS = {
    "validate": (cmd_validate, "check a model file"),
    "betti": (cmd_betti, "Betti numbers and cohomology representatives"),
    "hl": (cmd_hl, "hard Lefschetz in one degree"),
    "star": (cmd_star, "Hodge star matrix"),
    "harmonics": (cmd_harmonics, "harmonic forms of d, dc or a bidegree component"),
    "check-symplectic": (cmd_check_symplectic, "is ω closed and nondegenerate"),
    "check-lcs": (cmd_check_lcs, "is (η, θ) locally conformally symplectic"),
    "lee-class": (cmd_lee_class, "class of θ in H^1"),
    "lemma-report": (cmd_lemma_report, "the four degree-1 conditions for (ω, J)"),
    "theorem1": (cmd_theorem1, "run the LCS to GCS argument on given data"),
    "canonical-j": (cmd_canonical_j, "polar-decomposition J compatible with ω"),
    "find-shared-j": (cmd_find_shared_j, "numerical search for J compatible with ω and η"),
    "survey-hl": (cmd_survey_hl, "hard Lefschetz over random symplectic forms"),
    "catalog": (cmd_catalog, "list built-in models, forms and structures"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model file or catalog:<name>")
    common.add_argument("--omega", help="2-form file or catalog:<name>")
    common.add_argument("--eta", help="2-form file or catalog:<name>")
    common.add_argument("--theta", help="1-form file or catalog:<name>")
    common.add_argument("--j", help="J file or catalog:<name>")
    common.add_argument("--degree", type=int, default=1)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--restarts", type=int, default=100)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--max-iters", type=int, default=500)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--delta", choices=("d", "dc", "dbar", "del", "mu", "mubar"), default="d")

    parser = _Parser(prog="lcsverify", description="Exact checks for LCS and hard Lefschetz on Lie algebra models.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    for name, (_fn, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    fn = COMMANDS[args.command][0]
    try:
        doc, code, summary = fn(args)
    except (UsageError, ModelError, ACSError, MetricError, NoLeeFormError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    if args.format == "machine":
        stdout.write(render_machine({"command": args.command, "exit_code": code, **doc}))
    else:
        stdout.write(render_text(doc, summary))
    return code


def main() -> None:
    sys.exit(run())
