import argparse
import json
import os
import sys

from .log_config import get_logger

logger = get_logger(__name__)

THREADS_ENV = "KKLTYPE_THREADS"

EXIT_OK = 0
EXIT_INEQUALITY_FAILED = 1
EXIT_INPUT_ERROR = 2

EXIT_CODES_EPILOG = """exit status:
  0  every judged inequality passed (EMPIRICAL reports are never judged)
  1  some inequality with a specified constant failed
  2  bad input, or a suite finished FAILED or PARTIAL_SUCCESS; the
     status is 2 even when every report that was produced passed
"""


def _parse_value(raw: str):
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def _parse_evaluator(text: str):
    """'hypercontractivity:p=1.5,q=2' -> EvaluatorSpec('hypercontractivity', {'p': 1.5, 'q': 2})."""
    from .suite_runner import EvaluatorSpec
    from .zoo import parse_zoo_spec

    spec = parse_zoo_spec(text)
    return EvaluatorSpec(spec.name, {k: _parse_value(v) for k, v in spec.params.items()})


def _quadrature(args):
    from .quadrature import DEFAULT_QUADRATURE
    return DEFAULT_QUADRATURE.with_overrides(rel_tol=args.tol)


def _space(args, d=None):
    from .normed import NormedSpace
    if args.q is None and args.type2 is None:
        return None
    return NormedSpace(d=d or args.d or 1, q=args.q if args.q is not None else 2.0, type2_bound=args.type2)


def _emit(reports, args, fmt=None):
    from .report_writer import emit_report
    from .reports import exit_status
    emit_report(reports, fmt or args.format or "rows", path=args.out)
    return exit_status(reports)


# --- Command Handlers ---

def handle_verify(args):
    from .sources import FileSource, RandomSource, ZooSource
    from .suite_runner import SuiteStatus, load_suite_config, run_suite, single_suite

    if args.suite:
        config = load_suite_config(args.suite, seed=args.seed)
        if args.tol is not None:
            config.quad = _quadrature(args)
    else:
        sources = [ZooSource(spec, seed=args.seed) for spec in args.zoo]
        sources += [FileSource(path) for path in args.file]
        sources += [RandomSource(n, args.seed if args.seed is not None else 0) for n in args.random]
        if not sources or not args.evaluator:
            raise ValueError("verify needs --suite, or at least one function and one --evaluator.")
        config = single_suite(sources, [_parse_evaluator(e) for e in args.evaluator],
                              space=_space(args), quad=_quadrature(args), output_format=args.format or "rows")

    result = run_suite(config, threads=args.threads)
    for line in result.actions_log:
        logger.debug(line)
    code = _emit(result.reports, args, args.format or config.output_format)
    if result.status in (SuiteStatus.FAILED, SuiteStatus.PARTIAL_SUCCESS):
        logger.error(f"Suite finished with status {result.status.value}; see the log above.")
        return EXIT_INPUT_ERROR
    return code


def handle_scan(args):
    from .scan import exhaustive_scan

    spec = _parse_evaluator(args.evaluator)
    result = exhaustive_scan(args.n, spec.name, spec.params, threads=args.threads, quad=_quadrature(args))
    logger.info(f"Worst function: truth table {result.table} of {result.count} evaluated, "
                f"{result.failures} failure(s)")
    code = _emit([result.report], args)
    return EXIT_INEQUALITY_FAILED if result.failures else code


def handle_zoo(args):
    from .function_io import save_function
    from .zoo import CATALOGUE, ZOO_NAMES, build_zoo_function, function_summary

    if args.list:
        print(json.dumps({"functions": list(ZOO_NAMES), "catalogue": list(CATALOGUE)}, indent=2))
        return EXIT_OK
    if not args.spec:
        raise ValueError("zoo needs a function specification such as tribes:w=2,s=4 (or --list).")
    f = build_zoo_function(args.spec, seed=args.seed)
    if args.save:
        save_function(f, args.save, space=_space(args, d=f.d))
        logger.info(f"Saved {args.spec} to {args.save}")
    summary = {"spec": args.spec, **function_summary(f)}
    text = json.dumps(summary, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def handle_sharpness(args):
    from . import sharpness

    quad = _quadrature(args)
    if args.experiment == "counterexample":
        reports = sharpness.counterexample_sweep(args.levels or (1, 2, 4, 8, 16, 32), quad)
    elif args.experiment == "mixture":
        reports = sharpness.mixture_sweep(args.weights or ("one", "pow:0.25", "sqrt", "pow:0.45"),
                                          args.levels or (2, 4, 6, 8), quad)
    else:
        seed = args.seed if args.seed is not None else 0
        reports = []
        for label in args.weights or ("one", "pow:0.25", "pow:0.45"):
            for offset in range(args.count):
                X = sharpness.random_mixture(10, seed + offset)
                reports.append(sharpness.check_mixture_upper_bound(X, label, quad))
    return _emit(reports, args)


def handle_reconstruct(args):
    import numpy as np
    from .cube import chain_reconstruct
    from .function_io import load_function
    from .zoo import build_zoo_function

    f = load_function(args.file) if args.file else build_zoo_function(args.zoo, seed=args.seed)
    rebuilt = chain_reconstruct(f, _quadrature(args))
    error = float(np.max(np.abs(rebuilt.values - f.centered().values)))
    text = json.dumps({"n": f.n, "d": f.d, "max_abs_error": error}, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV}={os.environ[THREADS_ENV]!r}")
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=None, help="Write output to this path instead of stdout.")
    common.add_argument("--format", type=str, choices=["rows", "structured"], default=None, help="Report format (default rows).")
    common.add_argument("--tol", type=float, default=None, help="Relative quadrature tolerance (default 1e-9).")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized functions.")
    common.add_argument("--threads", type=int, default=_default_threads(), help=f"Worker count (default ${THREADS_ENV} or 1).")

    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--q", type=float, default=None, help="Target norm exponent q of l_q^d.")
    space.add_argument("--d", type=int, default=None, help="Target dimension d of l_q^d.")
    space.add_argument("--type2", type=float, default=None, help="Type-2 bound of the target.")

    parser = argparse.ArgumentParser(description="kkltype: numerical verification of KKL-type inequalities.",
                                     epilog=EXIT_CODES_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", help="Available commands", required=True)

    parser_verify = subparsers.add_parser("verify", parents=[common, space], help="Run evaluators on functions.",
                                          epilog=EXIT_CODES_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser_verify.add_argument("--suite", type=str, default=None, help="Suite file (JSON).")
    parser_verify.add_argument("--zoo", action="append", default=[], help="Zoo function, e.g. tribes:w=2,s=4.")
    parser_verify.add_argument("--file", action="append", default=[], help="Function file.")
    parser_verify.add_argument("--random", action="append", type=int, default=[], help="Random boolean function on n variables.")
    parser_verify.add_argument("--evaluator", action="append", default=[], help="Evaluator with parameters, e.g. type_p:p=1.5.")
    parser_verify.set_defaults(func=handle_verify)

    parser_scan = subparsers.add_parser("scan", parents=[common], help="Exhaustive scan over boolean functions (n <= 4).")
    parser_scan.add_argument("--n", type=int, required=True, help="Number of variables.")
    parser_scan.add_argument("--evaluator", type=str, required=True, help="Evaluator with parameters.")
    parser_scan.set_defaults(func=handle_scan)

    parser_zoo = subparsers.add_parser("zoo", parents=[common, space], help="Summarise or export a zoo function.")
    parser_zoo.add_argument("spec", nargs="?", default=None, help="Zoo function, e.g. majority:n=5.")
    parser_zoo.add_argument("--save", type=str, default=None, help="Also write the function file here.")
    parser_zoo.add_argument("--list", action="store_true", help="List the zoo.")
    parser_zoo.set_defaults(func=handle_zoo)

    parser_sharp = subparsers.add_parser("sharpness", parents=[common], help="Run the sharpness experiments.")
    parser_sharp.add_argument("experiment", choices=["counterexample", "mixture", "random-mixtures"])
    parser_sharp.add_argument("--levels", type=int, nargs="+", default=None, help="Level counts K.")
    parser_sharp.add_argument("--weights", type=str, nargs="+", default=None, help="Weight labels.")
    parser_sharp.add_argument("--count", type=int, default=100, help="Random variables per weight.")
    parser_sharp.set_defaults(func=handle_sharpness)

    parser_rec = subparsers.add_parser("reconstruct", parents=[common], help="Rebuild f - Ef from the heat chain.")
    source = parser_rec.add_mutually_exclusive_group(required=True)
    source.add_argument("--zoo", type=str, help="Zoo function.")
    source.add_argument("--file", type=str, help="Function file.")
    parser_rec.set_defaults(func=handle_reconstruct)
    return parser


def main(argv=None):
    # The log_config module is imported at the top, which sets up logging.
    from .errors import KKLTypeError

    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (KKLTypeError, ValueError) as e:
        logger.error(f"{args.command}: {e}")
        code = EXIT_INPUT_ERROR
    except OSError as e:
        logger.error(f"{args.command}: I/O error: {e}")
        code = EXIT_INPUT_ERROR
    sys.exit(code)


if __name__ == "__main__":
    main()
