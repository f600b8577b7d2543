"""Command line front end for the mini-language operations.

Usage: strategem <command> [--name N] [--format text|structured] <file.ml0>

Transformation commands print the rewritten module; analysis commands
print their result, one item per line for name sets, sorted.  The
structured format prints one JSON document with the fields `command`,
`input` and `result`.  Exit status: 0 on success, 1 when an analysis or
guard fails (for example no focus), 2 on a syntax error, which is
reported with line and column on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analyses import (
    GuardFailed,
    NoFocus,
    NoSuchAlias,
    all_types,
    count_of_type,
    de_bruijn,
    free_vars,
    inc_ints,
    is_fresh_type,
    select_focus,
    to_alias,
    type_token,
)
from .minilang import DECL, MODULE, ParseError, parse, pretty, pretty_expr, to_term
from .terms import cast

__all__ = ["main", "entry"]


def _run_command(args, module):
    if args.command == "inc-ints":
        return pretty(cast(inc_ints(to_term(module)), MODULE).value)
    if args.command == "collect-types":
        return sorted(all_types(module))
    if args.command == "fresh-type":
        return is_fresh_type(args.name, module)
    if args.command == "free-vars":
        return sorted(free_vars(to_term(module)))
    if args.command == "count-decls":
        return count_of_type(type_token(DECL), to_term(module))
    if args.command == "debruijn":
        return pretty(cast(de_bruijn(to_term(module)), MODULE).value)
    if args.command == "to-alias":
        return pretty(to_alias(args.name, module))
    if args.command == "select-focus":
        return pretty_expr(select_focus(module))
    raise AssertionError(args.command)


def _print_text(result):
    if isinstance(result, bool):
        print("true" if result else "false")
    elif isinstance(result, int):
        print(result)
    elif isinstance(result, list):
        for item in result:
            print(item)
    elif result.endswith("\n"):
        sys.stdout.write(result)
    else:
        print(result)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="strategem", description="analyses and transformations for .ml0 modules"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    named = {"fresh-type", "to-alias"}
    helps = {
        "inc-ints": "add one to every integer literal",
        "collect-types": "list every declared or used type name",
        "fresh-type": "check that a type name is unused",
        "free-vars": "list the free variables of the module",
        "count-decls": "count the declarations",
        "debruijn": "replace every string atom with a fresh name",
        "to-alias": "fold the focused type into a synonym",
        "select-focus": "print the focused expression",
    }
    for command, text in helps.items():
        p = sub.add_parser(command, help=text)
        if command in named:
            p.add_argument("--name", required=True, help="type name to use")
        p.add_argument(
            "--format", choices=("text", "structured"), default="text", help="output format"
        )
        p.add_argument("file", help="module source (.ml0)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="ascii") as handle:
            source = handle.read()
    except OSError as exc:
        print(f"{args.file}: {exc.strerror}", file=sys.stderr)
        return 2
    try:
        module = parse(source)
        result = _run_command(args, module)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return 2
    except (NoFocus, NoSuchAlias, GuardFailed) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.format == "structured":
        doc = {"command": args.command, "input": args.file, "result": result}
        print(json.dumps(doc, indent=2))
    else:
        _print_text(result)
    return 0


def entry():
    sys.exit(main())
