"""
RootBound command line.

    rootbound [global flags] <command> [<subcommand>] [options]

The Report goes to stdout as JSON, logs and diagnostics go to stderr.

EXIT CODES:
    0  success
    1  input error (unreadable file, malformed matrix or partition, bad parameter)
    2  bound or certificate not established (hypotheses violated)
    3  internal numerical failure (cross-check disagreement, eigensolver)
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional, TextIO

import numpy as np

from src.cli.handlers import EXIT_INPUT, EXIT_INTERNAL, execute
from src.config.settings import get_settings
from src.core.errors import InputError, RootBoundError
from src.core.textio import read_matrix, read_partition, write_matrix
from src.observability import setup_logging

logger = logging.getLogger(__name__)

MATRIX_ARGS = ("matrix", "cprime", "m")
CONTROL_ARGS = ("command", "output", "tol", "max_iter", "seed", "log_level", "json_logs")


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; here that is an input error (1)."""

    def error(self, message: str) -> None:
        raise InputError(message)


def _global_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, help="Collatz-Wielandt stopping width")
    common.add_argument("--max-iter", dest="max_iter", type=int, help="power-iteration cap")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--budget", type=int, help="staircase candidate budget")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ERROR")
    common.add_argument("--json-logs", dest="json_logs", action="store_true", help="structured JSON logs")
    return common


def _real_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="rootbound", description="Certified spectral-radius bounds and extremal search",
                     parents=[common])
    commands = parser.add_subparsers(dest="group", metavar="COMMAND", parser_class=_Parser)
    commands.required = True

    def leaf(subparsers, name: str, command: str, help_text: str) -> argparse.ArgumentParser:
        p = subparsers.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(command=command)
        return p

    # spectral
    spectral = commands.add_parser("spectral", help="spectral radius and eigenvalues")
    spectral_sub = spectral.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    spectral_sub.required = True
    for name, text in (
        ("radius", "Perron root with Collatz-Wielandt bracket"),
        ("left", "left Perron vector"),
        ("rho-r", "largest real eigenvalue"),
        ("eigenvalues", "all eigenvalues as [re, im] pairs"),
    ):
        p = leaf(spectral_sub, name, f"spectral {name}", text)
        p.add_argument("--matrix", required=True)

    p = leaf(commands, "rooted-check", "rooted-check", "decide rootedness and report the shift")
    p.add_argument("--matrix", required=True)

    p = leaf(commands, "quotient", "quotient", "quotient matrix and equitability")
    p.add_argument("--matrix", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--transpose", action="store_true", help="reduce rho_r via the quotient of C'^T")

    # bound
    bound = commands.add_parser("bound", help="spectral-radius bounds")
    bound_sub = bound.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    bound_sub.required = True
    for name in ("upper", "lower"):
        p = leaf(bound_sub, name, f"bound {name}", f"{name} bound rho_r(M) for a partition")
        p.add_argument("--matrix", required=True)
        p.add_argument("--partition", required=True)
        p.add_argument("--m", help="matrix M (default: canonical M for the partition)")

    p = leaf(bound_sub, "duan-zhou", "bound duan-zhou", "row-sum bound with index l")
    p.add_argument("--matrix", required=True)
    p.add_argument("--ell", type=int, help="index l (default: best over all l)")
    p.add_argument("--refined", action="store_true")

    p = leaf(bound_sub, "entry-sum", "bound entry-sum", "bound from the entry sum")
    p.add_argument("--matrix", required=True)

    p = leaf(bound_sub, "stanley", "bound stanley", "bound for (0,1)-matrices with e ones")
    p.add_argument("--e", type=int, required=True)

    p = leaf(bound_sub, "mn", "bound mn", "M_n closed form against the eigensolver")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--f1", type=float, required=True)
    p.add_argument("--f2", type=float, required=True)
    p.add_argument("--r", type=_real_list, required=True, help="row sums r1,...,rn")

    p = leaf(bound_sub, "compare", "bound compare", "comparison certificate against a rooted C'")
    p.add_argument("--matrix", required=True)
    p.add_argument("--cprime", required=True)
    p.add_argument("--direction", choices=["upper", "lower"], default="upper")

    p = leaf(bound_sub, "sweep", "bound sweep", "seeded property suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--trials", type=int, default=1000)

    # construct
    construct = commands.add_parser("construct", help="extremal matrices and polynomials")
    construct_sub = construct.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    construct_sub.required = True
    for name in ("a0", "small-t"):
        p = leaf(construct_sub, name, f"construct {name}", f"construct {name}")
        p.add_argument("--c", type=int, required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--n", type=int)
        p.add_argument("--zero-trace", dest="zero_trace", action="store_true")
        p.add_argument("--output")

    p = leaf(construct_sub, "a0-prime", "construct a0-prime", "competitor for t = 2c - 3")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--output")

    p = leaf(construct_sub, "polynomials", "construct polynomials", "f, g, h and their largest roots")
    for name in ("c", "t", "s"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--zero-trace", dest="zero_trace", action="store_true")

    p = leaf(construct_sub, "proof-quotient", "construct proof-quotient", "2x2 / 3x3 quotient of the proof matrix")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--zero-trace", dest="zero_trace", action="store_true")
    p.add_argument("--output")

    p = leaf(construct_sub, "statistics", "construct statistics", "block statistics of a staircase matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--zero-trace", dest="zero_trace", action="store_true")

    # verify
    verify = commands.add_parser("verify", help="exhaustive search over the staircase class")
    verify_sub = verify.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    verify_sub.required = True
    for name in ("conjecture-c", "zero-trace"):
        p = leaf(verify_sub, name, f"verify {name}", f"search S*(n,e) ({name})")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--e", type=int, required=True)
        p.add_argument("--full", action="store_true", help="also search every (0,1)-matrix (n <= 3)")
        p.add_argument("--workers", type=int)
        p.add_argument("--progress", action="store_true")
        p.add_argument("--check-bound", dest="check_bound", action="store_true")
        p.add_argument("--output")

    return parser


def _collect_inputs(args: argparse.Namespace) -> Dict[str, Any]:
    inputs: Dict[str, Any] = {}
    for key, value in vars(args).items():
        if key in CONTROL_ARGS or key in ("group", "action") or value is None:
            continue
        if key in MATRIX_ARGS:
            value = read_matrix(value).tolist()
        elif key == "partition":
            value = read_partition(value).to_dict()
        inputs[key] = value
    return inputs


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        base = get_settings()
        settings = base.replace(
            tol=getattr(args, "tol", None),
            max_iter=getattr(args, "max_iter", None),
            seed=getattr(args, "seed", None),
            budget=getattr(args, "budget", None),
            log_level=getattr(args, "log_level", None),
            json_logs=getattr(args, "json_logs", None),
        )
        setup_logging(settings.log_level, json_format=settings.json_logs, stream=stderr)

        start = time.time()
        report, exit_code = execute(args.command, _collect_inputs(args), settings)
        stdout.write(report.to_json() + "\n")

        output = getattr(args, "output", None)
        matrix = report.result.get("matrix")
        if output and matrix is not None and exit_code == 0:
            write_matrix(output, np.array(matrix, dtype=float))
            logger.info(f"[CLI] Matrix written to {output}")

        logger.debug(f"[CLI] {args.command} done in {(time.time() - start) * 1000:.1f} ms")
        return exit_code

    except InputError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except OSError as e:
        stderr.write(f"error: cannot write {e.filename}: {e.strerror}\n")
        return EXIT_INPUT
    except RootBoundError as e:
        logger.error(f"[CLI] Internal check failed: {e}")
        stderr.write(f"error: internal check failed: {e}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
