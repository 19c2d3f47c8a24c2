"""Batch command-line front end with machine-readable JSON/CSV output.

Exit codes: 0 for success or a convergent verdict, 1 for a mathematically
meaningful negative verdict (divergence, violated bound, mismatched
duality), 2 for usage errors, regime violations and numerical failures.
Output is deterministic: fixed field order and floats rendered with 12
significant digits, so identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import exponents as xa
from .catalog import DescriptorError, MapDomainError, NewtonConvergenceError, make_pair
from .functionals import (
    InconclusiveProbeError,
    RegimeError,
    ThresholdNotFoundError,
    brennan_integral,
    critical_exponent,
    inverse_brennan_integral,
    threshold_oracle,
)
from .operators import (
    InadmissibleFunctionError,
    duality_check,
    equivalence_table,
    isometry_check,
    isometry_family,
    norm_ratio_report,
    parse_test_function,
)
from .quadrature import Classification, GradingSpec, QuadratureError

OUT_DIR_ENV = "BRENNANLAB_OUT_DIR"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _fmt(x):
    """Normalize floats to 12 significant digits for stable serialization."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12e}")
    if isinstance(x, complex):
        return {"re": _fmt(x.real), "im": _fmt(x.imag)}
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(out_path):
        out_path = os.path.join(base, out_path)
    with open(out_path, "w") as fh:
        fh.write(text)


def _emit_json(command: str, inputs: dict, result: dict, diagnostics: dict,
               out_path: str | None) -> None:
    payload = {
        "command": command,
        "inputs": _fmt(inputs),
        "result": _fmt(result),
        "diagnostics": _fmt(diagnostics),
    }
    _emit(json.dumps(payload, indent=2) + "\n", out_path)


def _csv_num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.12e}"


def _grading_args(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("grading")
    g.add_argument("--eps-min", type=float, default=GradingSpec.eps_min,
                   help="innermost boundary gap (default %(default)s)")
    g.add_argument("--annulus-ratio", type=float, default=GradingSpec.annulus_ratio,
                   help="geometric gap shrink factor (default %(default)s)")
    g.add_argument("--radial-order", type=int, default=GradingSpec.radial_order,
                   help="radial Gauss-Legendre points per annulus (default %(default)s)")
    g.add_argument("--angular-base", type=int, default=GradingSpec.angular_base,
                   help="angular nodes away from singular angles (default %(default)s)")
    g.add_argument("--angular-boost", type=int, default=GradingSpec.angular_boost,
                   help="nodes per graded angular panel (default %(default)s)")


def _spec_from(args) -> GradingSpec:
    spec = GradingSpec(
        eps_min=args.eps_min,
        annulus_ratio=args.annulus_ratio,
        radial_order=args.radial_order,
        angular_base=args.angular_base,
        angular_boost=args.angular_boost,
    )
    spec.validate()
    return spec


def _estimate_dict(est) -> dict:
    return {
        "value": est.value,
        "tail": est.tail_estimate,
        "classification": est.classification.value,
        "abs_error_estimate": est.abs_error_estimate,
        "truncation_eps": est.truncation_eps,
        "fitted_slope": est.fitted_slope,
    }


def cmd_exponents(args) -> int:
    p = args.p
    result: dict = {"p": p, "p_conjugate": xa.holder_conjugate(p)}
    if args.s is not None:
        q = xa.q_from_ps(p, args.s)
        result["s"] = args.s
        result["q"] = q
        result["r"] = 2.0 - args.s
        if q > 1.0:
            result["q_conjugate"] = xa.holder_conjugate(q)
        result["regime"] = xa.classify_regime(p, q).value
    lo, hi = xa.alpha_range(p)
    result["alpha_range"] = [lo, hi]
    result["inverse_range"] = list(xa.inverse_range())
    kb = xa.known_bounds()
    result["known_bounds"] = {
        "easy_upper": kb.easy_upper,
        "brennan_conjectured": list(kb.brennan_conjectured),
        "pommerenke": kb.pommerenke,
        "bertilsson": kb.bertilsson,
        "hedenmalm_shimorin": kb.hedenmalm_shimorin,
        "inverse_proved_lower": kb.inverse_proved_lower,
        "inverse_conjectured": list(kb.inverse_conjectured),
    }
    _emit_json("exponents", {"p": p, "s": args.s}, result, {}, args.out)
    return EXIT_OK


def cmd_integrate(args) -> int:
    if (args.s is None) == (args.r is None):
        raise RegimeError("exactly one of --s or --r must be given")
    pair = make_pair(args.map)
    spec = _spec_from(args)
    if args.s is not None:
        res = brennan_integral(pair, args.s, spec)
        inputs = {"map": args.map, "s": args.s}
    else:
        res = inverse_brennan_integral(pair, args.r, spec)
        inputs = {"map": args.map, "r": args.r}
    est = res.integral
    _emit_json("integrate", inputs,
               {"value": est.value, "tail": est.tail_estimate,
                "classification": est.classification.value},
               {"integrand_exponent": res.exponent,
                "abs_error_estimate": est.abs_error_estimate,
                "fitted_slope": est.fitted_slope,
                "truncation_eps": est.truncation_eps},
               args.out)
    if est.classification is Classification.CONVERGED:
        return EXIT_OK
    if est.classification is Classification.DIVERGING:
        return EXIT_NEGATIVE
    return EXIT_ERROR


def cmd_scan(args) -> int:
    if not (args.s_from < args.s_to and args.step > 0.0):
        raise RegimeError("scan needs s_from < s_to and step > 0")
    pair = make_pair(args.map)
    spec = _spec_from(args)
    lines = ["s,value,tail,classification"]
    k = 0
    while True:
        s = args.s_from + k * args.step
        if s > args.s_to + 1e-12:
            break
        est = brennan_integral(pair, s, spec).integral
        lines.append(",".join([
            _csv_num(s), _csv_num(est.value), _csv_num(est.tail_estimate),
            est.classification.value,
        ]))
        k += 1
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_critical(args) -> int:
    pair = make_pair(args.map)
    spec = _spec_from(args)
    report = critical_exponent(pair, args.side, args.tol, spec)
    lo, hi = threshold_oracle(pair)
    _emit_json("critical", {"map": args.map, "side": args.side, "tol": args.tol},
               {"s_star": report.s_star, "bracket": list(report.bracket)},
               {"probes": [{"s": s, "classification": v, "slope": m}
                           for s, v, m in report.probes],
                "oracle": {"lower": lo, "upper": hi}},
               args.out)
    return EXIT_OK


def cmd_verify_composition(args) -> int:
    pair = make_pair(args.map)
    regime = xa.classify_regime(args.p, args.q)
    if regime not in (xa.Regime.BOUNDED_CANDIDATE, xa.Regime.SUP_NORM):
        raise RegimeError(
            f"verify-composition requires q < p, got p={args.p}, q={args.q} "
            f"({regime.value}: "
            + ("the equal-exponent case carries no integral criterion"
               if regime in (xa.Regime.ISOMETRY, xa.Regime.DEGENERATE_EQUAL)
               else "no bounded composition operator exists for q > p") + ")"
        )
    spec = _spec_from(args)
    report = norm_ratio_report(pair, args.p, args.q, spec=spec, check=False)
    _emit_json("verify-composition", {"map": args.map, "p": args.p, "q": args.q},
               {"bound_kpq": report.bound_kpq,
                "max_ratio": report.max_ratio,
                "bound_satisfied": report.bound_satisfied},
               {"samples": [{"function": s.function, "seminorm_p": s.seminorm_p,
                             "pullback_seminorm_q": s.pullback_seminorm_q,
                             "ratio": s.ratio} for s in report.samples]},
               args.out)
    return EXIT_OK if report.bound_satisfied else EXIT_NEGATIVE


def cmd_isometry(args) -> int:
    pair = make_pair(args.map)
    family = [parse_test_function(args.function)] if args.function else list(isometry_family())
    r0, r1 = (float(t) for t in args.patch.split(","))
    ratios = []
    for f in family:
        ratio = isometry_check(pair, f, patch=(r0, r1))
        ratios.append({"function": f.name, "ratio": ratio,
                       "deviation": abs(ratio - 1.0)})
    worst = max(r["deviation"] for r in ratios)
    _emit_json("isometry", {"map": args.map, "patch": [r0, r1]},
               {"ratios": ratios, "max_deviation": worst,
                "within_tolerance": worst <= 1e-4},
               {}, args.out)
    return EXIT_OK if worst <= 1e-4 else EXIT_NEGATIVE


def cmd_duality(args) -> int:
    pair = make_pair(args.map)
    spec = _spec_from(args)
    res = duality_check(pair, args.p, args.q, spec)
    _emit_json("duality", {"map": args.map, "p": args.p, "q": args.q},
               {"lhs": res.lhs, "rhs": res.rhs, "rel_diff": res.rel_diff,
                "lhs_classification": res.lhs_classification.value,
                "rhs_classification": res.rhs_classification.value,
                "agree": res.agree},
               {"dual_pair": {"q_conjugate": res.q_conj, "p_conjugate": res.p_conj},
                "exponent_direct": res.exponent_direct,
                "exponent_dual": res.exponent_dual},
               args.out)
    return EXIT_OK if res.agree else EXIT_NEGATIVE


def cmd_equivalence(args) -> int:
    pair = make_pair(args.map)
    spec = _spec_from(args)
    p_grid = [float(t) for t in args.p_grid.split(",") if t.strip()]
    table = equivalence_table(pair, args.s, p_grid, spec)
    rows = [{"p": r.p, "q": r.q, "s_roundtrip": r.s_roundtrip,
             "integral_value": r.integral_value,
             "classification": r.classification.value,
             "kpq_value": r.kpq_value} for r in table.rows]
    if args.format == "csv":
        lines = ["p,q,s_roundtrip,integral_value,classification,kpq"]
        for r in table.rows:
            lines.append(",".join([
                _csv_num(r.p), _csv_num(r.q), _csv_num(r.s_roundtrip),
                _csv_num(r.integral_value), r.classification.value,
                _csv_num(r.kpq_value),
            ]))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json("equivalence", {"map": args.map, "s": args.s, "p_grid": p_grid},
                   {"rows": rows, "integral_spread": table.integral_spread,
                    "consistent": table.consistent},
                   {"all_converged": table.all_converged,
                    "all_diverged": table.all_diverged},
                   args.out)
    return EXIT_OK if table.consistent else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brennan-lab",
        description="Integrability exponents of conformal disc maps and "
                    "Sobolev composition-operator bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", default=None,
                       help=f"output file (relative paths resolve under ${OUT_DIR_ENV})")
        return p

    p = add("exponents", cmd_exponents, "exponent algebra for one p (and optional s)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--s", type=float, default=None)

    p = add("integrate", cmd_integrate, "Brennan or inverse integral of one map")
    p.add_argument("--map", required=True)
    p.add_argument("--s", type=float, default=None, help="Brennan exponent")
    p.add_argument("--r", type=float, default=None, help="inverse-map exponent")
    _grading_args(p)

    p = add("scan", cmd_scan, "CSV sweep of the Brennan integral over s")
    p.add_argument("--map", required=True)
    p.add_argument("--s-from", type=float, required=True)
    p.add_argument("--s-to", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    _grading_args(p)

    p = add("critical", cmd_critical, "bracket the critical integrability exponent")
    p.add_argument("--map", required=True)
    p.add_argument("--side", choices=("upper", "lower"), required=True)
    p.add_argument("--tol", type=float, default=0.05)
    _grading_args(p)

    p = add("verify-composition", cmd_verify_composition,
            "sampled seminorm ratios against the K_(p,q) bound")
    p.add_argument("--map", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    _grading_args(p)

    p = add("isometry", cmd_isometry, "forward-patch check of the p=2 isometry")
    p.add_argument("--map", required=True)
    p.add_argument("--function", default=None,
                   help="harmonic_poly:k | boundary_power:gamma | shifted_log "
                        "(default: the three-function family)")
    p.add_argument("--patch", default="0,0.8", help="annular patch r0,r1")

    p = add("duality", cmd_duality, "integral identity of the inverse operator")
    p.add_argument("--map", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    _grading_args(p)

    p = add("equivalence", cmd_equivalence, "K_(p,q(p,s)) across a grid of p")
    p.add_argument("--map", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p-grid", default="2.5,3,4,6,10")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _grading_args(p)

    return parser


_USAGE_ERRORS = (
    DescriptorError,
    InadmissibleFunctionError,
    InconclusiveProbeError,
    MapDomainError,
    NewtonConvergenceError,
    QuadratureError,
    RegimeError,
    ThresholdNotFoundError,
    xa.ExponentDomainError,
    ValueError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
