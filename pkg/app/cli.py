"""
Command line for reproducible experiments

    python -m app.cli <subcommand> [mode] --name value ... [--format json|csv]
                      [--seed N] [--config FILE] [--output PATH]

Exit codes: 0 success, 1 validation error, 2 numerical failure, 64 usage error.
JSON output has sorted keys and exact rationals as "p/q", so identical inputs
give byte-identical artifacts.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from .core.config import settings
from .core.constants import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, SUBCOMMANDS
from .core.exceptions import LagconfError, NumericalError, UsageError, ValidationError
from .services.experiments import POSITIONAL_FIELDS, accepts, run_pipeline, tabular_rows
from .utils.logging_utils import get_logger, setup_logging
from .utils.response_utils import dump_csv, dump_json

logger = get_logger(__name__)

GLOBAL_KEYS = ("format", "seed", "output")


class RunConfig(BaseModel):
    """One CLI invocation: subcommand, raw parameters and output options"""
    model_config = ConfigDict(extra="forbid")

    subcommand: str
    params: Dict[str, Any] = Field(default_factory=dict)
    format: Optional[Literal["json", "csv"]] = None
    output: Optional[str] = None
    seed: Optional[int] = None
    config_file: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lagconf",
        allow_abbrev=False,
        description="Lagrangian configuration toolkit experiments",
        epilog="subcommands: " + ", ".join(SUBCOMMANDS),
    )
    parser.add_argument("--format", dest="format", default=None, choices=("json", "csv"), help="json (default) or csv")
    parser.add_argument("--seed", dest="seed", type=int, default=None, help="seed for randomized property suites")
    parser.add_argument("--config", dest="config_file", default=None, help="key=value parameter file")
    parser.add_argument("--output", dest="output", default=None, help="artifact path (default: stdout)")
    return parser


def _key(name: str) -> str:
    return name.lstrip("-").replace("-", "_")


def parse_pairs(subcommand: str, tokens: Sequence[str]) -> Dict[str, str]:
    """
    `[mode] --name value ...` into a parameter map; a bare flag means "true"

    Raises:
        UsageError: stray positional words
    """
    params: Dict[str, str] = {}
    index = 0
    if tokens and not tokens[0].startswith("--"):
        if subcommand not in POSITIONAL_FIELDS:
            raise UsageError(f"{subcommand} takes no positional argument", {"argument": tokens[0]})
        params[POSITIONAL_FIELDS[subcommand]] = tokens[0]
        index = 1
    while index < len(tokens):
        token = tokens[index]
        if not token.startswith("--") or token == "--":
            raise UsageError("expected --name value", {"argument": token})
        following = tokens[index + 1] if index + 1 < len(tokens) else None
        if following is None or following.startswith("--"):
            params[_key(token)] = "true"
            index += 1
        else:
            params[_key(token)] = following
            index += 2
    return params


def read_config_file(path: str) -> Dict[str, str]:
    """
    key=value lines; blank lines and # comments are skipped

    Raises:
        ValidationError: unreadable file or a line without '='
    """
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValidationError("cannot read config file", {"path": path, "reason": str(exc)}) from exc
    values = {}
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValidationError("config lines must read key=value", {"path": path, "line": number})
        values[_key(key.strip())] = value.strip()
    return values


def _merged(cfg: RunConfig) -> RunConfig:
    """File values first, flags on top"""
    if cfg.config_file is None:
        return cfg
    values = read_config_file(cfg.config_file)
    file_globals = {key: values.pop(key) for key in GLOBAL_KEYS if key in values}
    params = {**values, **cfg.params}
    try:
        return RunConfig(
            subcommand=cfg.subcommand,
            params=params,
            format=cfg.format if cfg.format is not None else file_globals.get("format"),
            output=cfg.output if cfg.output is not None else file_globals.get("output"),
            seed=cfg.seed if cfg.seed is not None else file_globals.get("seed"),
        )
    except PydanticValidationError as exc:
        raise ValidationError("invalid config file options", {"errors": [e["msg"] for e in exc.errors()]}) from exc


def _render(cfg: RunConfig, report: Dict[str, Any]) -> str:
    if cfg.format == "csv":
        columns, rows = tabular_rows(cfg.subcommand, report)
        return dump_csv(rows, columns)
    return dump_json(report)


def _write(text: str, output: Optional[str]):
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(output)
    if not path.is_absolute():
        path = Path(settings.output_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info(f"Wrote {path}")


def run(cfg: RunConfig) -> int:
    """
    Execute one subcommand and write its artifact

    Returns:
        Exit code: 0 ok, 1 validation error, 2 numerical failure, 64 usage error
    """
    try:
        if cfg.subcommand not in SUBCOMMANDS:
            raise UsageError("unknown subcommand", {"subcommand": cfg.subcommand})
        cfg = _merged(cfg)
        params = dict(cfg.params)
        if cfg.seed is not None:
            if accepts(cfg.subcommand, "seed"):
                params["seed"] = cfg.seed
            else:
                logger.debug(f"--seed ignored by {cfg.subcommand}")
        report = run_pipeline(cfg.subcommand, params)
        _write(_render(cfg, report), cfg.output)
        return EXIT_OK
    except UsageError as e:
        sys.stderr.write(build_parser().format_usage())
        logger.error(f"Usage error: {e.message} {e.details}")
        return EXIT_USAGE
    except NumericalError as e:
        logger.error(f"Numerical failure: {e.message} {e.details}")
        return EXIT_NUMERICAL
    except LagconfError as e:
        logger.error(f"Validation error: {e.message} {e.details}")
        return EXIT_VALIDATION


def main(argv: Optional[List[str]] = None) -> int:
    """Parse argv into a RunConfig and run it"""
    setup_logging(settings.log_level)
    tokens = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if tokens and tokens[0] in ("-h", "--help"):
        parser.print_help()
        return EXIT_OK
    try:
        if not tokens or tokens[0].startswith("-"):
            raise UsageError("missing subcommand")
        subcommand = tokens[0]
        if subcommand not in SUBCOMMANDS:
            raise UsageError("unknown subcommand", {"subcommand": subcommand})
        options, rest = parser.parse_known_args(tokens[1:])
        cfg = RunConfig(
            subcommand=subcommand,
            params=parse_pairs(subcommand, rest),
            format=options.format,
            output=options.output,
            seed=options.seed,
            config_file=options.config_file,
        )
    except UsageError as e:
        sys.stderr.write(parser.format_usage())
        logger.error(f"Usage error: {e.message} {e.details}")
        return EXIT_USAGE
    except PydanticValidationError as e:
        logger.error(f"Validation error: {[error['msg'] for error in e.errors()]}")
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
