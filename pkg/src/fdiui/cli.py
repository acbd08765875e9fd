"""Command-line runner.

    fdiui list
    fdiui run <experiment> [--config FILE] [--param key=value]... --out PATH [--seed N]

Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

from .errors import DomainError, FdiuiError
from .experiments import EXPERIMENTS

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("fdiui")


class UsageError(Exception):
    pass


def _split_pair(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise UsageError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                key, value = _split_pair(line)
            except UsageError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from None
            out[key] = value
    return out


def _format(value) -> str:
    if hasattr(value, "item"):  # numpy scalar
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format(v) for v in row])
    return buf.getvalue()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdiui", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list experiments and their parameters")
    run = sub.add_parser("run", help="run one experiment and write CSV")
    run.add_argument("experiment")
    run.add_argument("--config", help="flat key=value parameter file")
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    run.add_argument("--out", required=True)
    run.add_argument("--seed", type=int, default=0)
    return parser


def _list(out) -> None:
    for exp in EXPERIMENTS.values():
        print(f"{exp.name}: {exp.summary}", file=out)
        for key, spec in exp.params.items():
            default = "REQUIRED" if spec.required else f"default {spec.default!r}"
            extra = f"  {spec.help}" if spec.help else ""
            print(f"    {key} ({spec.kind.__name__}, {default}){extra}", file=out)


def _run(args) -> int:
    exp = EXPERIMENTS.get(args.experiment)
    if exp is None:
        raise UsageError(f"unknown experiment {args.experiment!r}; try 'fdiui list'")
    raw = read_config(args.config) if args.config else {}
    raw.update(_split_pair(p) for p in args.param)
    try:
        params = exp.resolve(raw)
    except DomainError as exc:
        raise UsageError(str(exc)) from None

    log.info("running %s with %s (seed %d)", exp.name, params, args.seed)
    try:
        header, rows = exp.run(params, args.seed)
    except (FdiuiError, ArithmeticError) as exc:
        print(f"fdiui: numerical failure in {exp.name}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render_csv(header, rows)
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"fdiui: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if args.command == "list":
            _list(sys.stdout)
            return EXIT_OK
        return _run(args)
    except UsageError as exc:
        print(f"fdiui: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        # config file unreadable
        print(f"fdiui: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
