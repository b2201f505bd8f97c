"""Command-line front end.

Every command prints one JSON document (or CSV for tabular commands) to
stdout.  Exit codes: 0 success, 1 usage error, 2 search exhausted or
infeasible, 3 internal invariant violation or failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import cone as cone_mod
from .chow import GradedClass, beta_map
from .errors import InvariantViolation, SearchExhausted
from .exactalg import BivariateChowClass, fmt_q, q
from .hkcount import hk_table, maximal_ideal, parse_preset, poly_fit_check
from .planner import (
    ChernFunctional,
    HKCertificate,
    SignPattern,
    hk_eval,
    hk_eval_via_psi,
    plan,
    recover_coefficients,
)
from .segre import (
    DEFAULT_ELL_MAX,
    SegreDescriptor,
    coverage_report,
    mcm_windows,
    min_ell,
    nq_class,
    nq_is_mcm_by_windows,
    test_module_search,
)
from .todd import (
    coeff_av_via_h,
    h_poly,
    profile_has_both_signs,
    todd_series,
    todd_twist,
    top_pattern,
    twist_sign_profile,
)
from .verify import run_all

EXIT_OK, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; we reserve 2 for searches."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandResult:
    command: str
    parameters: dict
    payload: dict | None = None
    exit_status: int = EXIT_OK
    csv_rows: list[list] | None = field(default=None, repr=False)

    def render(self, as_csv: bool = False) -> str:
        if as_csv:
            if self.csv_rows is None:
                raise UsageError(f"{self.command}: CSV output is not available")
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(self.csv_rows)
            return buf.getvalue()
        doc = {"command": self.command, "parameters": self.parameters, **(self.payload or {})}
        return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def _cmd_todd(a) -> CommandResult:
    f = todd_series(a.order)
    rows = [["k", "coefficient"]] + [[k, fmt_q(c)] for k, c in enumerate(f.coeffs)]
    return CommandResult("todd", {"order": a.order}, {"coefficients": f.to_json()}, csv_rows=rows)


def _cmd_twist(a) -> CommandResult:
    c = todd_twist(a.m, a.n, a.s, a.t)
    terms = {f"{s},{t}": fmt_q(x) for (s, t), x in c.terms()}
    rows = [["s", "t", "coefficient"]] + [[s, t, fmt_q(x)] for (s, t), x in c.terms()]
    params = {"m": a.m, "n": a.n, "s": a.s, "t": a.t}
    return CommandResult("twist", params, {"terms": terms}, csv_rows=rows)


def _cmd_hpoly(a) -> CommandResult:
    h = h_poly(a.m, a.q)
    av = [fmt_q(coeff_av_via_h(a.m, a.q, v)) for v in range(a.m + 1)]
    rows = [["power", "coefficient"]] + [[k, fmt_q(c)] for k, c in enumerate(h.coeffs)]
    payload = {"h_coefficients": h.to_json(), "a_coefficients": av}
    return CommandResult("hpoly", {"m": a.m, "q": a.q}, payload, csv_rows=rows)


def _cmd_signs(a) -> CommandResult:
    prof = twist_sign_profile(a.m, a.n, a.v)
    payload = {
        "profile": [{"q": e.q, "sign": e.sign, "value": fmt_q(e.value)} for e in prof],
        "both_signs": profile_has_both_signs(prof),
    }
    if a.v == a.m == a.n:
        tp = top_pattern(a.m)
        payload["top_pattern"] = {
            "top_at_0": fmt_q(tp.top_at_0),
            "top_at_minus1": fmt_q(tp.top_at_minus1),
            "mixed_at_minus1": fmt_q(tp.mixed_at_minus1),
            "holds": tp.holds,
        }
    rows = [["q", "sign", "value"]] + [[e.q, e.sign, fmt_q(e.value)] for e in prof]
    return CommandResult("signs", {"m": a.m, "n": a.n, "v": a.v}, payload, csv_rows=rows)


def _parse_monomials(m: int, n: int, text: str) -> BivariateChowClass:
    try:
        data = json.loads(text)
        terms = {}
        for key, val in data.items():
            s, t = (int(x) for x in key.split(","))
            terms[(s, t)] = q(val)
    except (ValueError, AttributeError) as exc:
        raise UsageError(f'--class must be a JSON map like {{"1,0": "1/2"}}: {exc}') from exc
    return BivariateChowClass.from_terms(m, n, terms)


def _cmd_beta(a) -> CommandResult:
    if a.cls is not None:
        c = _parse_monomials(a.m, a.n, a.cls)
        source = "class"
    else:
        c = todd_twist(a.m, a.n, a.q, 0)
        source = f"todd_twist(m, n, {a.q}, 0)"
    d = a.m + a.n + 1
    img = beta_map(c, a.ell, d)
    params = {"m": a.m, "n": a.n, "ell": a.ell, "source": source}
    rows = [["dimension", "value"]] + [[i, fmt_q(img[i])] for i in range(d, -1, -1)]
    return CommandResult("beta", params, {"d": d, "image": img.to_json()}, csv_rows=rows)


def _cmd_segre_check(a) -> CommandResult:
    desc = SegreDescriptor(a.m, a.n, a.ell)
    c = nq_class(desc, a.q)
    windows_ok = nq_is_mcm_by_windows(desc, a.q)
    if windows_ok != c.mcm:
        raise InvariantViolation("MCM inequality disagrees with the degree scan")
    payload = {
        "descriptor": desc.to_json(),
        "mcm": c.mcm,
        "windows": mcm_windows(desc, a.q),
        "todd": c.todd.to_json(),
    }
    return CommandResult("segre check", {"m": a.m, "n": a.n, "ell": a.ell, "q": a.q}, payload)


def _cmd_segre_coverage(a) -> CommandResult:
    rep = coverage_report(SegreDescriptor(a.m, a.n, a.ell))
    rows = [["v", "q", "value", "sign"]] + [
        [r.v, q_, fmt_q(x), (x > 0) - (x < 0)] for r in rep.rows for q_, x in r.values
    ]
    return CommandResult("segre coverage", {"m": a.m, "n": a.n, "ell": a.ell}, rep.to_json(), csv_rows=rows)


def _cmd_segre_min_ell(a) -> CommandResult:
    res = min_ell(a.m, a.n, a.max)
    return CommandResult("segre min-ell", {"m": a.m, "n": a.n, "max": a.max}, res.to_json())


def _cmd_segre_test_module(a) -> CommandResult:
    res = test_module_search(a.m, a.n)
    status = EXIT_OK if res.feasible else EXIT_EXHAUSTED
    if not res.verified:
        status = EXIT_INVARIANT
    return CommandResult("segre test-module", {"m": a.m, "n": a.n}, res.to_json(), status)


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"{what} must be comma-separated integers") from exc


def _cmd_plan(a) -> CommandResult:
    if a.action == "eval":
        return _cmd_plan_eval(a)
    if a.pattern is not None:
        pattern = SignPattern.parse(a.pattern)
        if a.d is not None and a.d != pattern.d:
            raise UsageError(f"--pattern has d = {pattern.d} but --d is {a.d}")
    elif a.d is not None:
        pattern = SignPattern(tuple([0] * a.d + [1]))
    else:
        raise UsageError("plan needs --d or --pattern")
    d = pattern.d
    lam = ChernFunctional(tuple(q(x) for x in a.lam.split(","))) if a.lam else None
    if lam is not None and lam.d != d:
        raise UsageError(f"--lambda needs {d + 1} entries")
    seed = None
    if a.seed_class:
        seed = GradedClass.from_json(d, json.loads(a.seed_class))
    colengths = _parse_ints(a.colengths, "--colengths") if a.colengths else None
    cert = plan(pattern, a.p, lam, seed, colengths, a.seed)
    params = {
        "d": d,
        "pattern": str(pattern),
        "p": a.p,
        "lambda": a.lam,
        "colengths": a.colengths,
        "seed": a.seed,
    }
    return CommandResult("plan", params, {"certificate": cert.to_json()})


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _cmd_plan_eval(a) -> CommandResult:
    if not a.cert:
        raise UsageError("plan eval needs --cert")
    data = _read_json(a.cert)
    data = data.get("certificate", data)
    cert = HKCertificate.from_json(data)
    d = cert.d
    n_max = max(a.n, d + 1)
    values = [hk_eval(cert, n) for n in range(1, n_max + 1)]
    via_psi = None
    if cert.functional is not None and cert.final is not None:
        via_psi = [hk_eval_via_psi(cert, n) for n in range(1, n_max + 1)]
        if via_psi != values:
            raise InvariantViolation("psi evaluation disagrees with the coefficient form")
    recovered = recover_coefficients(values[: d + 1], cert.p, d)
    recorded = data.get("coefficients")
    matches = recovered == cert.coefficients() and (
        recorded is None or [q(x) for x in recorded] == recovered
    )
    payload = {
        "values": {str(n): fmt_q(v) for n, v in zip(range(1, a.n + 1), values)},
        "recovered_coefficients": [fmt_q(x) for x in recovered],
        "psi_consistent": via_psi is not None,
        "round_trip": matches,
    }
    status = EXIT_OK if matches else EXIT_INVARIANT
    return CommandResult("plan eval", {"cert": a.cert, "n": a.n}, payload, status)


def _cmd_hk_count(a) -> CommandResult:
    preset = parse_preset(a.preset)
    table = hk_table(preset, maximal_ideal(preset), a.p, a.nmax)
    rows = [["q", "length"]] + [[x, y] for x, y in table]
    payload = {"dimension": preset.dimension, "table": [{"q": x, "length": y} for x, y in table]}
    return CommandResult("hk count", {"preset": preset.name, "p": a.p, "nmax": a.nmax}, payload, csv_rows=rows)


def _cmd_hk_fit(a) -> CommandResult:
    preset = parse_preset(a.preset)
    degree = a.degree if a.degree is not None else preset.dimension
    table = hk_table(preset, maximal_ideal(preset), a.p, a.nmax)
    fit = poly_fit_check(table, degree)
    payload = {
        "dimension": preset.dimension,
        "degree": degree,
        "table": [{"q": x, "length": y} for x, y in table],
        **fit.to_json(),
    }
    params = {"preset": preset.name, "p": a.p, "nmax": a.nmax, "degree": degree}
    return CommandResult("hk fit", params, payload)


def _parse_functionals(text: str | None):
    if not text:
        return list(cone_mod.QUADRIC_FUNCTIONALS)
    return [cone_mod.parse_vector(part) for part in text.split(";") if part.strip()]


def _cmd_cone_quadric(a) -> CommandResult:
    model = cone_mod.quadric_model()
    payload = {"model": model.to_json()}
    status = EXIT_OK
    if a.cert:
        data = _read_json(a.cert)
        old = cone_mod.ConeVerdict.from_json(data.get("verdict", data))
        new = cone_mod.cone_contains(model, old.query, old.strict)
        same = new.contains == old.contains and cone_mod.verify_verdict(model, old)
        payload["verdict"] = new.to_json()
        payload["certificate_verified"] = cone_mod.verify_verdict(model, new)
        payload["reproduces_input"] = same
        if not same:
            status = EXIT_INVARIANT
    if a.query:
        verdict = cone_mod.cone_contains(model, cone_mod.parse_vector(a.query), a.strict)
        ok = cone_mod.verify_verdict(model, verdict)
        if not ok:
            raise InvariantViolation("cone certificate failed to verify")
        payload["verdict"] = verdict.to_json()
        payload["certificate_verified"] = ok
    fns = _parse_functionals(a.functionals)
    payload["nef"] = cone_mod.nef_check(model, fns).to_json(model)
    payload["nef_lineality_trivial"] = cone_mod.nef_lineality_trivial(model, fns)
    params = {"query": a.query, "strict": a.strict, "functionals": a.functionals, "cert": a.cert}
    return CommandResult("cone quadric", params, payload, status)


def _cmd_cone_psi(a) -> CommandResult:
    model = cone_mod.quadric_model()
    rep = cone_mod.psi_stability(model, a.p)
    return CommandResult("cone psi", {"p": a.p}, rep.to_json(model))


def _cmd_verify_all(a) -> CommandResult:
    results = run_all()
    ok = all(r.passed for r in results)
    rows = [["number", "name", "passed", "elapsed_s", "budget_s"]] + [
        [r.number, r.name, r.passed, f"{r.elapsed:.4f}", r.budget] for r in results
    ]
    payload = {"all_passed": ok, "checks": [r.to_json() for r in results]}
    return CommandResult("verify-all", {}, payload, EXIT_OK if ok else EXIT_INVARIANT, csv_rows=rows)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--csv", action="store_true", help="emit CSV where the output is a table")
    group.add_argument("--json", action="store_true", help="emit JSON (the default)")

    parser = _Parser(prog="hkcert", description="Exact Todd-class, Segre and Hilbert-Kunz computations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("todd", parents=[fmt], help="Todd series x/(1-e^{-x})")
    p.add_argument("--order", type=int, default=8)
    p.set_defaults(func=_cmd_todd)

    p = sub.add_parser("twist", parents=[fmt], help="Todd class of O(s,t) on P^m x P^n")
    for flag in ("--m", "--n"):
        p.add_argument(flag, type=_positive, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int, default=0)
    p.set_defaults(func=_cmd_twist)

    p = sub.add_parser("hpoly", parents=[fmt], help="h_{m,q}(x) = (x+q+1)...(x+q+m)")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=_cmd_hpoly)

    p = sub.add_parser("signs", parents=[fmt], help="sign profile of a^v over q = -m..0")
    for flag in ("--m", "--n", "--v"):
        p.add_argument(flag, type=_positive, required=True)
    p.set_defaults(func=_cmd_signs)

    p = sub.add_parser("beta", parents=[fmt], help="project a bivariate class to Q[b]/(b^{n+1})")
    for flag in ("--m", "--n"):
        p.add_argument(flag, type=_positive, required=True)
    p.add_argument("--ell", type=_positive, default=1)
    p.add_argument("--q", type=int, default=0, help="use the Todd class of O(q,0) (default)")
    p.add_argument("--class", dest="cls", help='JSON monomial map, e.g. {"1,0": "1/2"}')
    p.set_defaults(func=_cmd_beta)

    seg = sub.add_parser("segre", help="Segre product computations")
    ssub = seg.add_subparsers(dest="segre_command", required=True, parser_class=_Parser)
    p = ssub.add_parser("check", parents=[fmt], help="MCM test and Todd class of N_q")
    for flag in ("--m", "--n"):
        p.add_argument(flag, type=_positive, required=True)
    p.add_argument("--ell", type=_positive, default=1)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=_cmd_segre_check)
    p = ssub.add_parser("coverage", parents=[fmt], help="sign coverage report at one ell")
    for flag in ("--m", "--n"):
        p.add_argument(flag, type=_positive, required=True)
    p.add_argument("--ell", type=_positive, default=1)
    p.set_defaults(func=_cmd_segre_coverage)
    p = ssub.add_parser("min-ell", parents=[fmt], help="smallest ell with full coverage")
    for flag in ("--m", "--n"):
        p.add_argument(flag, type=_positive, required=True)
    p.add_argument("--max", type=_positive, default=DEFAULT_ELL_MAX)
    p.set_defaults(func=_cmd_segre_min_ell)
    p = ssub.add_parser("test-module", parents=[fmt], help="test module from rank-one summands")
    for flag in ("--m", "--n"):
        p.add_argument(flag, type=_positive, required=True)
    p.set_defaults(func=_cmd_segre_test_module)

    p = sub.add_parser("plan", parents=[fmt], help="build a Hilbert-Kunz certificate, or evaluate one")
    p.add_argument("action", nargs="?", choices=["eval"], help="evaluate a certificate given by --cert")
    p.add_argument("--d", type=_positive)
    p.add_argument("--pattern", help="eps_0,...,eps_d (eps_d = 1)")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--lambda", dest="lam", help="functional values lambda_0,...,lambda_d")
    p.add_argument("--colengths", help="positive integers, comma-separated")
    p.add_argument(
        "--seed", "--seed-random-lower", dest="seed", type=int,
        help="random seed; enables random lower terms",
    )
    p.add_argument("--seed-class", help="JSON {dimension: value} starting class")
    p.add_argument("--cert", help="certificate JSON file ('-' for stdin), for eval")
    p.add_argument("--n", type=_positive, default=1, help="evaluate at n = 1..N (eval)")
    p.set_defaults(func=_cmd_plan)

    hk = sub.add_parser("hk", help="brute-force Hilbert-Kunz functions")
    hsub = hk.add_subparsers(dest="hk_command", required=True, parser_class=_Parser)
    for name, func in (("count", _cmd_hk_count), ("fit", _cmd_hk_fit)):
        p = hsub.add_parser(name, parents=[fmt])
        p.add_argument("--preset", default="quadric", help='quadric, polynomial(k), segre(m,n[,ell])')
        p.add_argument("--p", type=int, default=2)
        p.add_argument("--nmax", type=_positive, default=3)
        if name == "fit":
            p.add_argument(
                "--degree", "--d", dest="degree", type=int,
                help="polynomial degree (default: Krull dimension)",
            )
        p.set_defaults(func=func)

    cn = sub.add_parser("cone", help="cone model of the quadric")
    csub = cn.add_subparsers(dest="cone_command", required=True, parser_class=_Parser)
    p = csub.add_parser("quadric", parents=[fmt], help="membership and nef checks")
    p.add_argument("--query", help="class coordinates, e.g. 1,0")
    p.add_argument("--strict", action="store_true", help="test the interior")
    p.add_argument("--functionals", help='semicolon-separated vectors, e.g. "1,0;2,1"')
    p.add_argument("--cert", help="verdict JSON to re-check")
    p.set_defaults(func=_cmd_cone_quadric)
    p = csub.add_parser("psi", parents=[fmt], help="psi^p stability of the cone")
    p.add_argument("--p", type=_positive, required=True)
    p.set_defaults(func=_cmd_cone_psi)

    p = sub.add_parser("verify-all", parents=[fmt], help="run every acceptance check")
    p.set_defaults(func=_cmd_verify_all)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run one command; return (exit status, stdout text, stderr text)."""
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
        return result.exit_status, result.render(getattr(args, "csv", False)), ""
    except UsageError as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    except SearchExhausted as exc:
        return EXIT_EXHAUSTED, "", f"search exhausted: {exc}\n"
    except (InvariantViolation, AssertionError) as exc:
        return EXIT_INVARIANT, "", f"invariant violation: {exc}\n"
    except (ValueError, IndexError, KeyError, TypeError, ZeroDivisionError) as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"


def main(argv: Sequence[str] | None = None) -> int:
    try:
        status, out, err = run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
