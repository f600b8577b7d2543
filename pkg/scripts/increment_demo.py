#!/usr/bin/env python3
"""One generic transformation, many datatypes.

Builds the increment transformation once (add one to every integer atom,
keep everything else) and applies it to values of three unrelated shapes:
a list of pairs, a nested tuple and a whole parsed module.  Pass a path
to an .ml0 file to use your own module.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from strategem import (
    BOOL,
    IDENTITY,
    INT,
    adhoc_tp,
    apply,
    identity_tp,
    list_of,
    pair_of,
    term,
    topdown,
)
from strategem.minilang import MODULE, parse, pretty, to_term
from strategem.terms import cast

DEFAULT_MODULE = """\
module Demo where
answer = add 1 41
twice f x = f (f x)
"""


def increment():
    step = adhoc_tp(identity_tp(IDENTITY), INT, lambda n: IDENTITY.pure(n + 1))
    return topdown(step)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("module", nargs="?", help="optional .ml0 file to transform")
    args = parser.parse_args()

    bump = increment()

    scoreboard = term([(True, 1), (False, 2)], list_of(pair_of(BOOL, INT)))
    print("list of pairs :", scoreboard.value, "->", apply(bump, scoreboard).value)

    nested = term((1, ([2], 3)), pair_of(INT, pair_of(list_of(INT), INT)))
    print("nested tuple  :", nested.value, "->", apply(bump, nested).value)

    source = Path(args.module).read_text() if args.module else DEFAULT_MODULE
    module = parse(source)
    rewritten = cast(apply(bump, to_term(module)), MODULE).value
    print("module before :")
    print(pretty(module), end="")
    print("module after  :")
    print(pretty(rewritten), end="")


if __name__ == "__main__":
    main()
