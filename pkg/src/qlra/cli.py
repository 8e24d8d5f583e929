"""``qlra-kit`` command line.

Every subcommand reads a probability document from a file or ``-``
(stdin) and writes JSON (default) or rounded text to stdout or ``-o``.
Exit status: 0 success, 1 data failed a check, 2 usage, I/O or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import _jsonio
from .engine import run_qlra
from .errors import ParseError, QLRAError, SchemaError
from .forward import (
    AnsatzParams,
    QuantumInstance,
    ansatz_family,
    example1,
    generate,
    mub_instance,
    random_instance,
)
from .interference import (
    boundedness_check,
    interference_coefficients,
    lambda_normalization_residual,
    sorkin_residual,
)
from .phase_solver import solve_all
from .prob_model import DEFAULT_TOL, PAIR_LABELS, ProbabilityData, check_double_stochastic, loads_document, validate
from .slit_sim import SlitExperimentPlan, simulate

EXIT_OK, EXIT_INFEASIBLE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


# -- I/O helpers ------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_document(path: str) -> dict:
    return loads_document(_read_text(path))


def _read_data(path: str) -> ProbabilityData:
    return ProbabilityData.from_dict(_read_document(path))


def _format_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list, np.ndarray)) and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_format_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_format_text(v)}")
        return "\n".join(lines)
    if isinstance(obj, (list, tuple)):
        if _flat(obj):
            return "[" + ", ".join(_format_text(v) for v in obj) + "]"
        lines = []
        for v in obj:
            block = _format_text(v, indent + 1).splitlines() or [""]
            block[0] = pad + "- " + block[0].lstrip()
            lines.extend(block)
        return "\n".join(lines)
    if isinstance(obj, (float, np.floating)):
        return "nan" if not np.isfinite(obj) else f"{obj:.6g}"
    if obj is None:
        return "-"
    return str(obj)


def _flat(v) -> bool:
    if isinstance(v, np.ndarray):
        v = v.tolist()
    return isinstance(v, (list, tuple)) and all(not isinstance(x, (dict, list, tuple)) for x in v)


def _emit(args, doc: dict) -> None:
    text = _jsonio.dumps(doc) if args.format == "json" else _format_text(doc) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _floats(text: str, n: int, name: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{name}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{name}: expected {n} comma-separated numbers, got {text!r}")
    return vals


def _instance_from_document(doc: dict) -> QuantumInstance:
    try:
        inst = doc["instance"] if "instance" in doc else doc
        return QuantumInstance(_jsonio.complex_from_json(inst["psi"]), _jsonio.complex_from_json(inst["u"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("instance", f"cannot read quantum instance ({exc})") from exc


def _instance_to_dict(inst: QuantumInstance) -> dict:
    return {"psi": _jsonio.complex_to_json(inst.psi), "u": _jsonio.complex_to_json(inst.u)}


# -- subcommands ------------------------------------------------------------


def cmd_validate(args) -> int:
    data = _read_data(args.file)
    out = validate(data, args.tol)
    doc = {"validate": out.to_dict()}
    ok = out.passed
    if args.double_stochastic:
        ds = check_double_stochastic(data, args.tol)
        doc["double_stochastic"] = ds.to_dict()
        ok = ok and ds.passed
    _emit(args, doc)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_lambdas(args) -> int:
    table = interference_coefficients(_read_data(args.file))
    bounded = boundedness_check(table, args.tol)
    _emit(args, {"lambda": table.to_dict(), "bounded": bounded.to_dict()})
    return EXIT_OK if bounded.passed else EXIT_INFEASIBLE


def cmd_sorkin(args) -> int:
    data = _read_data(args.file)
    res = sorkin_residual(data)
    norm = lambda_normalization_residual(data, interference_coefficients(data))
    worst = float(np.max(np.abs(res)))
    _emit(
        args,
        {
            "sorkin_residual": res,
            "sorkin_abs_max": worst,
            "lambda_normalization_residual": {lab: float(x) for lab, x in zip(PAIR_LABELS, norm)},
            "tol": args.tol,
        },
    )
    return EXIT_OK if worst <= args.tol else EXIT_INFEASIBLE


def cmd_solve(args) -> int:
    table = interference_coefficients(_read_data(args.file))
    gauge = _floats(args.gauge, 3, "--gauge")
    solutions = solve_all(table, gauge, args.tol)
    if not args.all_branches:
        solutions = solutions[:1]
    _emit(args, {"solutions": [s.to_dict() for s in solutions]})
    return EXIT_OK


def cmd_qlra(args) -> int:
    data = _read_data(args.file)
    gauge = _floats(args.gauge, 3, "--gauge")
    report, models = run_qlra(data, args.tol, gauge, args.single_observable, args.lambda_tol)
    _emit(args, {"report": report.to_dict(), "models": [m.to_dict() for m in models]})
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_forward(args) -> int:
    table = None
    if args.mub is not None:
        inst = mub_instance(*_floats(args.mub, 2, "--mub"))
    elif args.ansatz is not None:
        parts = args.ansatz.split(",")
        signs = "+"
        if len(parts) == 4 and set(parts[3]) <= {"+", "-"}:
            signs = parts.pop()
        if len(signs) > 2:
            raise UsageError("--ansatz signs: at most two of '+'/'-'")
        x, y, v = _floats(",".join(parts), 3, "--ansatz")
        sign = [1 if c == "+" else -1 for c in signs]
        params = AnsatzParams(x, y, v, sign12=sign[0], sign23=sign[1] if len(sign) > 1 else None)
        table, data = ansatz_family(params, args.tol)
        inst = None
    else:
        inst = random_instance(args.seed)
    if inst is not None:
        data = generate(inst)
    doc = data.to_dict()
    if table is not None:
        doc["lambda"] = table.to_dict()
    if args.emit_instance:
        if inst is None:
            raise UsageError("--emit-instance needs --seed or --mub")
        doc["instance"] = _instance_to_dict(inst)
    _emit(args, doc)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    if args.mub is not None:
        inst = mub_instance(*_floats(args.mub, 2, "--mub"))
    elif args.instance is not None:
        inst = _instance_from_document(_read_document(args.instance))
    else:
        inst = random_instance(args.seed)
    freq = simulate(SlitExperimentPlan(inst, args.samples, args.seed))
    _emit(args, freq.to_dict())
    return EXIT_OK


def cmd_example1(args) -> int:
    doc = {}
    for name, mu in (("plus", 1 / np.sqrt(2)), ("minus", -1 / np.sqrt(2))):
        _, data = example1(mu)
        report, models = run_qlra(data, args.tol, single_observable=True)
        doc[name] = {
            "mu": mu,
            "data": data.to_dict(),
            "feasible_for_b": report.feasible,
            "models": [
                {
                    "branches": list(m.solution.branches),
                    "psi_times_3": _jsonio.complex_to_json(3 * m.psi),
                    "abs_psi_squared": np.abs(m.psi) ** 2,
                    "a_basis_unitarity_defect": m.unitarity_defect(),
                }
                for m in models
            ],
        }
        two, _ = run_qlra(data, args.tol)
        doc[name]["two_observable"] = {
            "feasible": two.feasible,
            "failed_gates": two.failed_gates(),
            "unitarity_defect_min": two.residuals.get("unitarity_defect_min"),
        }
    _emit(args, doc)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _lambda_tol(text: str):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance (default %(default)g)")
    common.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")

    parser = argparse.ArgumentParser(prog="qlra-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check normalization and ranges")
    p.add_argument("file")
    p.add_argument("--double-stochastic", action="store_true", help="also check row sums of cond")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lambdas", parents=[common], help="interference coefficients")
    p.add_argument("file")
    p.set_defaults(func=cmd_lambdas)

    p = sub.add_parser("sorkin", parents=[common], help="Sorkin and coefficient-normalization residuals")
    p.add_argument("file")
    p.set_defaults(func=cmd_sorkin)

    p = sub.add_parser("solve", parents=[common], help="phases from the coefficient table")
    p.add_argument("file")
    p.add_argument("--gauge", default="0,0,0", help="anchor phases of the three rows")
    p.add_argument("--all-branches", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("qlra", parents=[common], help="full reconstruction pipeline")
    p.add_argument("file")
    p.add_argument("--gauge", default="0,0,0")
    p.add_argument("--single-observable", action="store_true", help="match Born's rule for b only")
    p.add_argument(
        "--lambda-tol",
        type=_lambda_tol,
        default=None,
        help="coefficient tolerance: a number, or 'auto' to propagate --tol (for sampled data)",
    )
    p.set_defaults(func=cmd_qlra)

    p = sub.add_parser("forward", parents=[common], help="exact data from a quantum model")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--seed", type=int, help="random state and unitary")
    src.add_argument("--mub", metavar="G1,G2", help="unbiased basis with phases gamma1, gamma2")
    src.add_argument("--ansatz", metavar="X,Y,V[,SIGNS]", help="one-parameter family, signs like '+-'")
    p.add_argument("--emit-instance", action="store_true", help="include the state and unitary")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo triple-slit frequencies")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--mub", metavar="G1,G2")
    src.add_argument("--random", action="store_true", help="random instance drawn from --seed")
    src.add_argument("--instance", metavar="FILE", help="document holding an 'instance' object")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("example1", parents=[common], help="reproduce the cyclic-coefficient example")
    p.set_defaults(func=cmd_example1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qlra-kit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, SchemaError, OSError) as exc:
        print(f"qlra-kit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except QLRAError as exc:
        print(f"qlra-kit: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
