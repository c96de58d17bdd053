"""
Command-line front end for polymeasure.

Every command prints one JSON document on standard output. Exit codes: 0 on
success, 1 on a validation error (with a one-line diagnostic on standard error),
2 on a usage error.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from polymeasure import __version__
from polymeasure.core.errors import PolyMeasureError
from polymeasure.core.sampler import DEFAULT_SEED, DEFAULT_SHOTS
from polymeasure.core.shift_bell import PURITY_METHODS
from polymeasure.core.state_gen import KINDS
from polymeasure.core.tensor_ops import DEFAULT_CAP
from polymeasure.services import EstimationService

# Get logger
logger = logging.getLogger("PolyMeasure")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

POLYNOMIAL_COMMANDS = ("exact", "estimate", "check", "observable")
STATE_COMMANDS = ("exact", "estimate", "purity", "check")


@dataclass
class RunConfig:
    command: str
    state_path: Optional[str] = None
    poly_path: Optional[str] = None
    poly_expr: Optional[str] = None
    shots: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    method: Optional[str] = None
    degree: Optional[int] = None
    symmetrize: bool = False
    cap: int = DEFAULT_CAP
    m: int = 2
    dim: Optional[int] = None
    include_exact: bool = True
    reduce: Optional[List[int]] = None
    kind: str = "ginibre"
    rank: Optional[int] = None
    index: int = 0
    out: Optional[str] = None
    record: bool = False
    db_url: str = "sqlite:///polymeasure.db"
    limit: int = 50
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = cls.__dataclass_fields__
        return cls(**{name: value for name, value in vars(args).items() if name in fields})


class UsageError(Exception):
    pass


def _read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise PolyMeasureError(f"cannot read {path}: {e.strerror}", "input-file") from None
    except json.JSONDecodeError as e:
        raise PolyMeasureError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})", "json") from None


def _write_json(path: str, document: Dict[str, Any]) -> None:
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2)
    except OSError as e:
        raise PolyMeasureError(f"cannot write {path}: {e.strerror}", "output-file") from None


def _polynomial_source(config: RunConfig) -> Any:
    if config.poly_expr is not None:
        return config.poly_expr
    if config.poly_path is not None:
        return _read_json(config.poly_path)
    raise UsageError(f"{config.command} needs a polynomial (--expr or --poly)")


def _state_source(config: RunConfig) -> Any:
    if config.state_path is None:
        raise UsageError(f"{config.command} needs a state (--state)")
    return _read_json(config.state_path)


def run(config: RunConfig) -> Tuple[int, Optional[Dict[str, Any]]]:
    """Execute one command; returns the exit code and the JSON document to print."""
    service = EstimationService(
        db_url=config.db_url,
        cap=config.cap,
        record=config.record,
    )

    if config.command == "gen-state":
        result = service.generate_state(
            config.kind, config.dim or 2, rank=config.rank, seed=config.seed, index=config.index,
        )
        if config.out and "error" not in result:
            _write_json(config.out, result)
        return _finish(result)

    if config.command == "history":
        return _finish(service.history(limit=config.limit))

    polynomial = _polynomial_source(config) if config.command in POLYNOMIAL_COMMANDS else None
    state = _state_source(config) if config.command in STATE_COMMANDS else None

    if config.command == "exact":
        result = service.evaluate(polynomial, state)
    elif config.command == "estimate":
        result = service.estimate(
            polynomial, state, shots=config.shots, seed=config.seed,
            method=config.method or "eigen", degree=config.degree,
            symmetrized=config.symmetrize, include_exact=config.include_exact,
        )
    elif config.command == "purity":
        result = service.purity(
            state, m=config.m, method=config.method or "swap-exact", shots=config.shots,
            seed=config.seed, include_exact=config.include_exact, reduce_dims=config.reduce,
        )
    elif config.command == "check":
        result = service.check(polynomial, state, degree=config.degree, symmetrized=config.symmetrize)
        if "error" not in result and not result["ok"]:
            failed = [name for name, entry in result["checks"].items() if not entry["ok"]]
            print(f"error: consistency: failed checks {', '.join(failed)}", file=sys.stderr)
            return EXIT_VALIDATION, result
    elif config.command == "observable":
        result = service.export_observable(
            polynomial, dim=config.dim, degree=config.degree, symmetrized=config.symmetrize,
        )
    else:
        raise UsageError(f"unknown command {config.command!r}")
    return _finish(result)


def _finish(result: Dict[str, Any]) -> Tuple[int, Optional[Dict[str, Any]]]:
    if "error" in result:
        print(f"error: {result['invariant']}: {result['error']}", file=sys.stderr)
        return EXIT_VALIDATION, None
    return EXIT_OK, result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymeasure",
        description="Estimate polynomial functions of a density matrix from simulated measurements on m copies.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest allowed d^m (default %(default)s)")
    common.add_argument("--db-url", default=os.environ.get("POLYMEASURE_DB_URL", "sqlite:///polymeasure.db"))
    common.add_argument("--record", action="store_true", help="store the report in the run ledger")
    common.add_argument("--verbose", action="store_true", help="log to standard error")

    polynomial = argparse.ArgumentParser(add_help=False)
    source = polynomial.add_mutually_exclusive_group()
    source.add_argument("--expr", dest="poly_expr", help="polynomial expression, e.g. 'r[0,1]*r[1,0]'")
    source.add_argument("--poly", dest="poly_path", help="JSON polynomial file")
    polynomial.add_argument("--degree", type=int, help="homogenize all terms to this degree")
    polynomial.add_argument("--symmetrize", action="store_true", help="average A_f over copy permutations")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", dest="state_path", help="JSON state file")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    sampling.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sampling.add_argument("--no-exact", dest="include_exact", action="store_false",
                          help="do not attach the exact oracle value")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("exact", parents=[common, polynomial, state], help="exact oracle value")
    estimate = commands.add_parser("estimate", parents=[common, polynomial, state, sampling],
                                   help="shot-based estimate")
    estimate.add_argument("--method", choices=("eigen", "hadamard"), default="eigen")

    purity = commands.add_parser("purity", parents=[common, state, sampling], help="Tr rho^m")
    purity.add_argument("--m", type=int, default=2)
    purity.add_argument("--method", choices=PURITY_METHODS, default="swap-exact")
    purity.add_argument("--reduce", type=int, nargs="+", metavar="DIM",
                        help="subsystem dimensions; also report Tr rho_A^2 of the first subsystem")

    gen = commands.add_parser("gen-state", parents=[common], help="generate a state file")
    gen.add_argument("--kind", choices=KINDS, default="ginibre")
    gen.add_argument("--dim", type=int, default=2)
    gen.add_argument("--rank", type=int)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--index", type=int, default=0)
    gen.add_argument("--out", help="also write the state to this file")

    commands.add_parser("check", parents=[common, polynomial, state], help="consistency suite")

    observable = commands.add_parser("observable", parents=[common, polynomial],
                                     help="export A_f, O_f and O'_f as JSON matrices")
    observable.add_argument("--dim", type=int, help="dimension for --expr")

    history = commands.add_parser("history", parents=[common], help="list recorded runs")
    history.add_argument("--limit", type=int, default=50)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig.from_args(args)
    logger.setLevel(logging.DEBUG if config.verbose else logging.CRITICAL)

    try:
        code, document = run(config)
    except UsageError as e:
        print(f"error: usage: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PolyMeasureError as e:
        print(f"error: {e.invariant}: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    if document is not None:
        print(json.dumps(document, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
