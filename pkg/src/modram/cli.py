"""Command-line driver: run verifier suites on a case and emit a JSON report.

Exit status: 0 all checks pass, 1 some check fails, 2 some check is
indeterminate (and none fails), 3 the input could not be parsed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import dimone, invariants, local, ringa, skewgroup, tateoort
from .errors import ModramError, ParseError
from .gfp import check_prime
from .poly import PolyRing, SeriesTrunc
from .report import Check, Report, Truth, Verdict

SUITES = ("normal-form", "invariants", "tate-oort", "dim-one", "skew", "admissibility")
EXIT_CODES = {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INDETERMINATE: 2}
EXIT_PARSE = 3

BUILTIN_CASES: dict[str, dict[str, Any]] = {
    "artin-p2": {"name": "artin-p2", "p": 2, "n": 2, "a": ["x1", "x2"], "mu": "1"},
    "n3-p2": {"name": "n3-p2", "p": 2, "n": 3, "a": ["x1", "x2", "x3"], "mu": "1"},
}


@dataclass
class CaseSpec:
    name: str
    p: int
    n: int
    a: list[str]
    mu: str = "1"
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    precision: int | None = None
    length_cap: int = local.DEFAULT_LENGTH_CAP
    degree_cap: int = invariants.DEFAULT_DEGREE_CAP
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CaseSpec:
        if not isinstance(data, dict):
            raise ParseError("case must be a JSON object")
        try:
            p = int(data["p"])
            a = [str(t) for t in data["a"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"missing or invalid field: {exc}") from None
        n = int(data.get("n", len(a)))
        if n != len(a):
            raise ParseError(f"n={n} but {len(a)} entries in a")
        try:
            check_prime(p)
        except ModramError as exc:
            raise ParseError(str(exc)) from None
        suites = data.get("suites") or list(SUITES)
        for s in suites:
            if s not in SUITES:
                raise ParseError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
        case = cls(
            name=str(data.get("name", "case")),
            p=p,
            n=n,
            a=a,
            mu=str(data.get("mu", "1")),
            suites=list(suites),
            precision=data.get("precision"),
            length_cap=int(data.get("length_cap", local.DEFAULT_LENGTH_CAP)),
            degree_cap=int(data.get("degree_cap", invariants.DEFAULT_DEGREE_CAP)),
            seed=int(data.get("seed", 0)),
        )
        case.validate()
        return case

    def validate(self) -> None:
        ring = PolyRing(self.p, ringa.x_names(self.n))
        for text in [*self.a, self.mu]:
            ring.parse(text)

    def spec(self) -> ringa.ActionSpec:
        return ringa.ActionSpec(self.p, self.a, self.mu)


def _timed(fn: Callable[[], Report], timing: bool) -> Report:
    start = time.perf_counter()
    rep = fn()
    if timing:
        elapsed = time.perf_counter() - start
        for c in rep.checks:
            c.seconds = elapsed / max(1, len(rep.checks))
    return rep


def _prefixed(rep: Report, prefix: str) -> Report:
    for c in rep.checks:
        c.check_id = f"{prefix}/{c.check_id}"
    return rep


# ---------------------------------------------------------------- suites


def suite_normal_form(case: CaseSpec) -> Report:
    spec = case.spec()
    rep = Report("normal-form")
    p, n = spec.p, spec.n
    for i in range(1, n + 1):
        res = ringa.norm(spec.u(i), spec.diagonal(), spec) - spec.x(i)
        rep.add(Check(f"norm-u{i}", "norm of u_i is x_i", Verdict.of(res.is_zero()), None if res.is_zero() else str(res)))
    for i in range(1, n + 1):
        for h in (spec.diagonal(), spec.unit_vector(i)):
            img = ringa.act(h, spec.u(i), spec)
            ok = all(ringa.act(h, img, spec) == ringa.act(tuple(2 * v for v in h), spec.u(i), spec) for _ in [0])
            back = spec.u(i)
            for _ in range(p):
                back = ringa.act(h, back, spec)
            ok = ok and back == spec.u(i)
            rep.add(Check(f"act-u{i}-{''.join(map(str, h))}", "action is a homomorphism of order p on u_i",
                          Verdict.of(ok)))
    params = spec.certify_parameters(case.length_cap)
    rep.add(Check("parameters", "(a_1..a_n) is a system of parameters", Verdict.of(
        {Truth.TRUE: True, Truth.FALSE: False}.get(params))))
    length = ringa.norm_length(spec, case.length_cap, case.precision)
    ok = length.length == p**n if length.is_finite else None
    rep.add(Check("norm-length", "length of k[[u]]/(x_1..x_n) equals p^n", Verdict.of(ok),
                  None if ok else str(length), {"length": str(length), "expected": p**n}))
    if spec.certify_sop(case.length_cap) is Truth.TRUE:
        fixed = ringa.fixed_ideal_report(spec, case.precision, case.length_cap)
        verdict = Verdict.of(fixed.passed) if fixed.length.is_finite else Verdict.INDETERMINATE
        rep.add(Check("fixed-ideal", "I is in m_A^p and length(A/I) is a multiple of p^n", verdict, None,
                      {"orders": fixed.orders, "length": str(fixed.length), "base_length": str(fixed.base_length),
                       "precision": fixed.precision}))
    return rep


def suite_invariants(case: CaseSpec) -> Report:
    spec = case.spec()
    p, n = spec.p, spec.n
    rep = Report("invariants")
    rep.extend(_prefixed(invariants.verify_minor_relations(spec), "minors"))
    zs_bad = []
    for s in itertools.product(range(p), repeat=n):
        if any(s):
            res = invariants.z_s(s, spec)
            if not res.passed:
                zs_bad.append(s)
    rep.add(Check("z_s", "f_s(z_s) = 0 and the stabilizer of z_s is {h : h.s = 0}", Verdict.of(not zs_bad),
                  [list(s) for s in zs_bad] or None))
    rep.add(Check("relevant-count", "relevant tuple count matches the closed form",
                  Verdict.of(invariants.count_check(p, n)), None,
                  {"count": len(invariants.relevant_tuples(p, n))}))
    if n == 2:
        rep.extend(_prefixed(invariants.hypersurface_check(spec.a[0], spec.a[1], spec.mu, p), "hypersurface"))
    if n >= 2:
        rep.extend(_prefixed(invariants.nonfactorial_product_check(None, None, spec=spec), "nonfactorial"))
        rep.extend(_prefixed(invariants.rational_factorization_check(p), "nonfactorial"))
    rep.extend(_prefixed(invariants.reflection_deltas(spec), "reflection"))
    table = invariants.graded_invariant_table(p, n, case.degree_cap, degree_cap=case.degree_cap)
    rep.add(Check("graded-generation", "declared generators span (B^G)_d for every d up to the cap",
                  Verdict.of(table.generates and table.minimal), table.first_defect,
                  {"degrees": case.degree_cap, "invariant_dims": table.invariant_dims,
                   "generated_dims": table.generated_dims, "redundant": table.redundant}))
    ed = invariants.edim_formulas(p, n)
    count = len(table.generator_names)
    rep.add(Check("edim", "a minimal generating set of B^G has edim_B elements",
                  Verdict.of(table.generates and table.minimal and count == ed.edim_B), None,
                  {"edim_B": ed.edim_B, "edim_AG": ed.edim_AG, "generators": count}))
    return rep


def suite_tate_oort(case: CaseSpec) -> Report:
    spec = case.spec()
    p = spec.p
    rep = Report("tate-oort")
    group = tateoort.TateOortGroup.symbolic(p)
    rep.extend(_prefixed(tateoort.verify_group_axioms(group), "axioms"))
    for eps in range(1, p):
        rep.extend(_prefixed(tateoort.scaling_iso(eps, group).report, f"scaling-{eps}"))
    torsor = tateoort.TorsorScheme(spec.R, spec.a[0], spec.R.var(spec.n - 1))
    rep.extend(_prefixed(tateoort.torsor_action(torsor, torsor.natural_group()), "torsor"))
    det = tateoort.torsor_determinant(torsor)
    rep.add(Check("torsor/determinant", "determinant of the torsor map is a unit",
                  Verdict.of(det.is_constant() and bool(det)), str(det)))
    return rep


def suite_dim_one(case: CaseSpec) -> Report:
    p = case.p
    prec = case.precision or dimone.DEFAULT_PRECISION
    rep = Report("dim-one")
    for r in (1, 2):
        sigma = dimone.build_moderate_presentation(r, "1", p, prec)
        m = dimone.ramification_break(sigma)
        ok = m == p * r - 1 if isinstance(m, int) else None
        rep.add(Check(f"break-r{r}", "break of the moderate presentation equals p*r - 1", Verdict.of(ok), None,
                      {"break": str(m), "precision": sigma.precision}))
        model = dimone.effective_model_exponent(m, p) if isinstance(m, int) else None
        rep.add(Check(f"model-r{r}", "effective model exponent recovers r with i = 0",
                      Verdict.of(model is not None and model == (r, 0))))
    for r in (1, 2):
        for i in range(1, p):
            mu = dimone.break_via_valuation(i, r, "1", p)
            rep.add(Check(f"valuation-i{i}-r{r}", "valuation break equals p*r - i", Verdict.of(mu == p * r - i)))
    return rep


def suite_skew(case: CaseSpec) -> Report:
    spec = case.spec()
    rep = Report("skew")
    rep.extend(skewgroup.check_trace_symmetry(spec, 2, 20, case.seed))
    rep.extend(skewgroup.check_pairing_nondegenerate_mod_m(spec))
    return rep


def normal_form_action(spec: ringa.ActionSpec, precision: int) -> local.SubstitutionAction:
    """``u_i -> u_i + mu a_i(x(u))`` as a substitution action on k[[u]]."""
    xs = ringa.express_x_in_u(spec, precision)
    images = []
    for i in range(spec.n):
        shift = ringa.r_to_u(spec.mua[i], spec, xs)
        images.append(SeriesTrunc(spec.U.var(i), precision) + shift)
    return local.SubstitutionAction(spec.p, spec.U, images)


def suite_admissibility(case: CaseSpec) -> Report:
    spec = case.spec()
    prec = case.precision or (spec.n * (spec.p - 1) + 4)
    prec = max(prec, spec.p + 2)
    rep = Report("admissibility")
    action = normal_form_action(spec, prec)
    rep.add(Check("admissible", "every tuple sigma^j(u_i) is a regular system of parameters",
                  Verdict.of(local.is_admissible(action)), None, {"precision": prec}))
    weak = local.is_weakly_admissible(action, case.length_cap)
    rep.add(Check("weakly-admissible", "every tuple sigma^j(u_i) is a system of parameters",
                  Verdict.of({Truth.TRUE: True, Truth.FALSE: False}.get(weak.truth)), None,
                  {"precision": weak.precision}))
    return rep


SUITE_RUNNERS: dict[str, Callable[[CaseSpec], Report]] = {
    "normal-form": suite_normal_form,
    "invariants": suite_invariants,
    "tate-oort": suite_tate_oort,
    "dim-one": suite_dim_one,
    "skew": suite_skew,
    "admissibility": suite_admissibility,
}


def run(case: CaseSpec, timing: bool = False) -> dict[str, Any]:
    """Execute the selected suites in a fixed order and assemble the report."""
    suites = []
    verdicts = []
    for name in SUITES:
        if name not in case.suites:
            continue
        try:
            rep = _timed(lambda: SUITE_RUNNERS[name](case), timing)
        except ModramError as exc:
            rep = Report(name, [Check("error", "suite raised an error", Verdict.FAIL, f"{type(exc).__name__}: {exc}")])
        verdicts.append(rep.verdict)
        suites.append({"suite": name, **rep.to_json(timing)})
    overall = Verdict.FAIL if Verdict.FAIL in verdicts else Verdict.INDETERMINATE if Verdict.INDETERMINATE in verdicts else Verdict.PASS
    return {
        "case": case.name,
        "p": case.p,
        "n": case.n,
        "a": case.a,
        "mu": case.mu,
        "seed": case.seed,
        "verdict": overall.value,
        "suites": suites,
    }


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- argument handling


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load_case(source: str) -> dict[str, Any]:
    if source in BUILTIN_CASES:
        return dict(BUILTIN_CASES[source])
    path = Path(source)
    if not path.exists():
        raise ParseError(f"no such case file or built-in case: {source}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def cmd_verify(args: argparse.Namespace) -> int:
    data = load_case(args.case)
    for key in ("precision", "length_cap", "degree_cap", "seed"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.suite:
        data["suites"] = args.suite
    case = CaseSpec.from_dict(data)
    report = run(case, args.timing)
    _emit(dumps(report), args.out)
    return EXIT_CODES[Verdict(report["verdict"])]


def cmd_edim(args: argparse.Namespace) -> int:
    ed = invariants.edim_formulas(args.p, args.n)
    out = {"p": args.p, "n": args.n, "relevant_tuples": invariants.relevant_count_formula(args.p, args.n),
           "edim_B": ed.edim_B, "edim_AG": ed.edim_AG,
           "enumeration_matches": invariants.count_check(args.p, args.n)}
    _emit(dumps(out), args.out)
    return 0 if out["enumeration_matches"] else 1


def cmd_break(args: argparse.Namespace) -> int:
    p = args.p
    out: dict[str, Any] = {"p": p}
    ok = True
    if args.mu is not None:
        data = dimone.ASData(args.mu, dimone.x_ring(p).parse(args.f))
        norm = dimone.normalize_artin_schreier(data, p)
        out["normalized"] = {"mu": norm.mu, "f": str(norm.f), "shifts": [list(s) for s in norm.shift]}
    if args.r is not None:
        if args.i:
            out["valuation_break"] = dimone.break_via_valuation(args.i, args.r, args.f, p)
            ok = ok and out["valuation_break"] == p * args.r - args.i
        else:
            sigma = dimone.build_moderate_presentation(args.r, args.f, p, args.precision)
            m = dimone.ramification_break(sigma)
            out["break"] = m if isinstance(m, int) else str(m)
            out["precision"] = sigma.precision
            if isinstance(m, int):
                model = dimone.effective_model_exponent(m, p)
                out["effective_model"] = {"r": model.r, "i": model.i, "torsor": model.torsor}
                ok = ok and m == p * args.r - 1
    _emit(dumps(out), args.out)
    return 0 if ok else 1


def cmd_tate_oort(args: argparse.Namespace) -> int:
    group = tateoort.TateOortGroup.symbolic(args.p)
    rep = tateoort.verify_group_axioms(group)
    for eps in range(1, args.p):
        rep.extend(_prefixed(tateoort.scaling_iso(eps, group).report, f"scaling-{eps}"))
    out = {"p": args.p, "law": str(group.star_polynomial()), **rep.to_json()}
    _emit(dumps(out), args.out)
    return EXIT_CODES[rep.verdict]


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the parse-error status instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modram", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verifier suites on a JSON case file or a built-in case")
    v.add_argument("case", help=f"path to a case file, or one of: {', '.join(BUILTIN_CASES)}")
    v.add_argument("--precision", type=int)
    v.add_argument("--length-cap", dest="length_cap", type=int)
    v.add_argument("--degree-cap", dest="degree_cap", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--suite", action="append", choices=SUITES)
    v.add_argument("--timing", action="store_true", help="include per-check timings (breaks byte stability)")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("edim", help="closed-form embedding dimensions")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_edim)

    b = sub.add_parser("break", help="dimension-one ramification computations")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--r", type=int)
    b.add_argument("--i", type=int, default=0, help="use the valuation route with this i (0 < i < p)")
    b.add_argument("--f", default="1", help="polynomial in x with nonzero constant term")
    b.add_argument("--mu", type=int, help="normalize z^p - z = x^(-mu) f(x)")
    b.add_argument("--precision", type=int, default=dimone.DEFAULT_PRECISION)
    b.add_argument("--out")
    b.set_defaults(func=cmd_break)

    t = sub.add_parser("tate-oort", help="symbolic group-law axiom sweep")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_tate_oort)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except ModramError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_CODES[Verdict.FAIL]


if __name__ == "__main__":
    raise SystemExit(main())
