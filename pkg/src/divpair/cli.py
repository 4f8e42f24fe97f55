"""Command-line surface: every operation as a scriptable subcommand.

Each invocation prints exactly one report document.  The default format
is JSON with sorted keys and 17-significant-digit floats, so identical
invocations (including ``--seed``) are byte-identical; ``--format csv``
flattens the output rows for tabular sweeps.  Complex values are emitted
as the same literals the argument grammar accepts.

Exit codes: 0 pass, 1 property failure, 2 parse error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .curve import CurvePoint, Sphere, Torus, green_divisor
from .divisor import ComplexDivisor, MarkedCurve, class_invariant
from .errors import DivpairError, DomainError, ParseError
from .grammar import (
    format_complex,
    parse_complex,
    parse_divisor,
    parse_rational_function_spec,
)
from .mvf import is_principal
from .pairing import (
    FORMULAS,
    RationalFunctionData,
    check_weil_reciprocity,
    pairing_norm,
)
from .selftest import DEFAULT_CASES, DEFAULT_SEED, run_selftest, tolerance_scale
from .strings import MomentumConfig, string_pairing_factor

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3

RECIPROCITY_TOL = 1e-9
FORMULA_AGREEMENT_TOL = 1e-12


# --- deterministic serialization -------------------------------------------


def _canonical(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return json.dumps(format_complex(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in value) + "]"
    if isinstance(value, dict):
        parts = (
            json.dumps(str(k)) + ":" + _canonical(v)
            for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))
        )
        return "{" + ",".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _flatten(value, prefix: str = ""):
    if isinstance(value, dict):
        for k, v in sorted(value.items(), key=lambda kv: str(kv[0])):
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        if isinstance(value, float):
            rendered = format(value, ".17g")
        elif isinstance(value, complex):
            rendered = format_complex(value)
        elif value is None:
            rendered = ""
        else:
            rendered = str(value)
        yield prefix.rstrip("."), rendered


def _emit(report: dict, fmt: str) -> None:
    if fmt == "csv":
        lines = ["key,value"]
        for key, rendered in _flatten(report):
            if "," in rendered or '"' in rendered:
                rendered = '"' + rendered.replace('"', '""') + '"'
            lines.append(f"{key},{rendered}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(_canonical(report) + "\n")


def _report(command: str, inputs: dict, outputs: dict, metadata: dict, status: str) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "metadata": metadata,
        "status": status,
    }


# --- shared argument handling -----------------------------------------------


def _build_curve(args):
    if args.curve == "torus":
        if args.tau is None:
            raise ParseError("--tau is required for the torus")
        return Torus(parse_complex(args.tau))
    if args.tau is not None:
        raise ParseError("--tau only applies to the torus")
    return Sphere()


def _build_marked_curve(args) -> MarkedCurve:
    curve = _build_curve(args)
    marks = []
    if getattr(args, "marks", None):
        marks = [parse_complex(tok) for tok in args.marks.split(",") if tok.strip()]
    return MarkedCurve(curve, marks)


def _describe_divisor(d: ComplexDivisor) -> dict:
    return {
        "marked": {
            f"Q{i + 1}": str(c) for i, c in d.marked
        },
        "integral": {
            ("inf" if p.at_infinity else format_complex(p.z)): w
            for p, w in d.integral
        },
        "degree": d.degree(),
    }


def _curve_inputs(args) -> dict:
    inputs = {"curve": args.curve}
    if args.tau is not None:
        inputs["tau"] = parse_complex(args.tau)
    if getattr(args, "marks", None):
        inputs["marks"] = [
            parse_complex(tok) for tok in args.marks.split(",") if tok.strip()
        ]
    return inputs


# --- subcommands -------------------------------------------------------------


def _cmd_green(args) -> int:
    mc = _build_marked_curve(args)
    d = parse_divisor(args.divisor, mc)
    at = args.at.strip()
    point = CurvePoint.infinity() if at.lower() == "inf" else parse_complex(at)
    value = green_divisor(mc.curve, d, point)
    inputs = _curve_inputs(args)
    inputs["divisor"] = _describe_divisor(d)
    inputs["at"] = point if isinstance(point, complex) else "inf"
    _emit(
        _report(
            "green",
            inputs,
            {"value": value, "real": value.real, "imag": value.imag},
            {"kernel": "log-distance" if args.curve == "sphere" else "theta1"},
            "pass",
        ),
        args.format,
    )
    return EXIT_PASS


def _cmd_pairing(args) -> int:
    mc = _build_marked_curve(args)
    d1 = parse_divisor(args.d1, mc)
    d2 = parse_divisor(args.d2, mc)
    formulas = FORMULAS if args.formula == "all" else (args.formula,)
    results = {f: pairing_norm(mc, d1, d2, f) for f in formulas}
    exponents = [r.exponent for r in results.values()]
    discrepancy = max(exponents) - min(exponents) if len(exponents) > 1 else 0.0
    primary = results[formulas[-1]]
    status = "pass" if discrepancy <= FORMULA_AGREEMENT_TOL * tolerance_scale() else "fail"
    inputs = _curve_inputs(args)
    inputs["d1"] = _describe_divisor(d1)
    inputs["d2"] = _describe_divisor(d2)
    _emit(
        _report(
            "pairing",
            inputs,
            {
                "norm": primary.norm,
                "exponent": primary.exponent,
                "hermitian_value": primary.hermitian_value,
                "per_formula_exponent": {f: r.exponent for f, r in results.items()},
                "formula_discrepancy": discrepancy,
            },
            {
                "formula": args.formula,
                "formula_agreement_tol": FORMULA_AGREEMENT_TOL * tolerance_scale(),
            },
            status,
        ),
        args.format,
    )
    return EXIT_PASS if status == "pass" else EXIT_FAIL


def _cmd_reciprocity(args) -> int:
    mc = _build_marked_curve(args)
    curve = mc.curve
    fz, fp, fc = parse_rational_function_spec(args.f)
    gz, gp, gc = parse_rational_function_spec(args.g)
    f = RationalFunctionData.from_zeros_poles(curve, fz, fp, fc)
    g = RationalFunctionData.from_zeros_poles(curve, gz, gp, gc)
    residual = check_weil_reciprocity(f, g, mc)
    threshold = RECIPROCITY_TOL * tolerance_scale()
    status = "pass" if residual < threshold else "fail"
    inputs = _curve_inputs(args)
    inputs["f"] = args.f
    inputs["g"] = args.g
    _emit(
        _report(
            "reciprocity",
            inputs,
            {"residual": residual},
            {"threshold": threshold},
            status,
        ),
        args.format,
    )
    return EXIT_PASS if status == "pass" else EXIT_FAIL


def _cmd_class(args) -> int:
    mc = _build_marked_curve(args)
    d = parse_divisor(args.divisor, mc)
    descriptor = class_invariant(mc, d)
    certificate = is_principal(mc, d)
    outputs = {
        "degree": descriptor.degree,
        "principal": certificate.principal,
    }
    if descriptor.jacobian is not None:
        outputs["jacobian_mod_lattice"] = descriptor.jacobian
        outputs["jacobi_defect"] = certificate.jacobi_defect
        outputs["monodromy"] = {
            "a_period": certificate.a_period,
            "b_period": certificate.b_period,
            "period_defect": certificate.period_defect,
            "periods_in_2pi_i_Z": certificate.periods_integral,
        }
    inputs = _curve_inputs(args)
    inputs["divisor"] = _describe_divisor(d)
    _emit(
        _report(
            "class",
            inputs,
            outputs,
            {"lattice_tol": 1e-9, "period_tol": 1e-6},
            "pass",
        ),
        args.format,
    )
    return EXIT_PASS


def _load_momentum_config(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed config JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("config root must be an object")
    curve_name = raw.get("curve")
    if curve_name not in ("sphere", "torus"):
        raise ParseError("config field 'curve' must be 'sphere' or 'torus'")
    if curve_name == "torus":
        if "tau" not in raw:
            raise ParseError("torus config needs a 'tau' field")
        curve = Torus(parse_complex(str(raw["tau"])))
    else:
        curve = Sphere()
    marks_raw = raw.get("marks", [])
    if not isinstance(marks_raw, list):
        raise ParseError("config field 'marks' must be a list of complex literals")
    marks = [parse_complex(str(tok)) for tok in marks_raw]
    momenta_raw = raw.get("momenta")
    if not isinstance(momenta_raw, list) or not all(
        isinstance(row, list) for row in momenta_raw
    ):
        raise ParseError("config field 'momenta' must be a list of rows")
    momenta = [[parse_complex(str(c)) for c in row] for row in momenta_raw]
    return MarkedCurve(curve, marks), MomentumConfig(momenta), curve_name


def _cmd_string_factor(args) -> int:
    mc, cfg, curve_name = _load_momentum_config(args.config)
    result = string_pairing_factor(mc, cfg)
    _emit(
        _report(
            "string-factor",
            {
                "config": args.config,
                "curve": curve_name,
                "n_points": len(cfg),
            },
            {
                "factor": result.factor,
                "exponent": result.exponent,
                "per_component_factor": {
                    f"nu{nu + 1}": value
                    for nu, value in enumerate(result.per_component)
                },
            },
            {"diagonal_omitted": result.diagonal_omitted},
            "pass",
        ),
        args.format,
    )
    return EXIT_PASS


def _cmd_selftest(args) -> int:
    report = run_selftest(seed=args.seed, cases=args.cases)
    rows = [
        {
            "name": r.name,
            "cases": r.cases,
            "residual": r.residual,
            "threshold": r.threshold,
            "passed": r.passed,
        }
        for r in report.results
    ]
    status = "pass" if report.passed else "fail"
    # wall time goes to the diagnostic stream so the report stays byte-identical
    print(f"selftest runtime: {report.runtime_seconds:.2f}s", file=sys.stderr)
    _emit(
        _report(
            "selftest",
            {"seed": report.seed, "cases": report.cases},
            {"properties": rows, "all_passed": report.passed},
            {"tolerance_scale": tolerance_scale()},
            status,
        ),
        args.format,
    )
    if not report.passed:
        for r in report.results:
            if not r.passed:
                print(
                    f"property failure: {r.name} residual {r.residual:.3e} "
                    f"exceeds {r.threshold:.3e}",
                    file=sys.stderr,
                )
    return EXIT_PASS if report.passed else EXIT_FAIL


# --- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 without a traceback
        print(f"parse error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _add_curve_flags(sub, marks: bool = True):
    sub.add_argument("--curve", choices=("sphere", "torus"), required=True)
    sub.add_argument("--tau", help="torus modulus, complex literal with Im > 0")
    if marks:
        sub.add_argument(
            "--marks",
            help="comma-separated complex literals naming Q1, Q2, ... for the divisor grammar",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="divpair", description=__doc__)
    parser.add_argument("--version", action="version", version=f"divpair {__version__}")
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", help="report format"
    )
    commands = parser.add_subparsers(dest="subcommand", required=True)

    green = commands.add_parser("green", help="evaluate a degree-zero divisor's Green sum")
    _add_curve_flags(green)
    green.add_argument("--divisor", required=True, help="divisor literal")
    green.add_argument("--at", required=True, help="evaluation point")
    green.set_defaults(handler=_cmd_green)

    pairing = commands.add_parser("pairing", help="pairing norm of two divisors")
    _add_curve_flags(pairing)
    pairing.add_argument("--d1", required=True)
    pairing.add_argument("--d2", required=True)
    pairing.add_argument(
        "--formula", choices=FORMULAS + ("all",), default="all",
        help="formula variant; 'all' reports the max exponent discrepancy",
    )
    pairing.set_defaults(handler=_cmd_pairing)

    reciprocity = commands.add_parser("reciprocity", help="Weil reciprocity residual")
    _add_curve_flags(reciprocity, marks=False)
    reciprocity.add_argument("--f", required=True, help="zeros:...;poles:...[;const:...]")
    reciprocity.add_argument("--g", required=True, help="zeros:...;poles:...[;const:...]")
    reciprocity.set_defaults(handler=_cmd_reciprocity)

    cls = commands.add_parser("class", help="divisor class descriptor and principality")
    _add_curve_flags(cls)
    cls.add_argument("--divisor", required=True)
    cls.set_defaults(handler=_cmd_class)

    factor = commands.add_parser("string-factor", help="momentum pairing factor")
    factor.add_argument("--config", required=True, help="JSON config path")
    factor.set_defaults(handler=_cmd_string_factor)

    selftest = commands.add_parser("selftest", help="run the full property suite")
    selftest.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    selftest.add_argument("--cases", type=int, default=DEFAULT_CASES)
    selftest.set_defaults(handler=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DivpairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as exc:  # contract: no tracebacks on bad input
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
