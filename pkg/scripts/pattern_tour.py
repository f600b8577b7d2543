#!/usr/bin/env python3
"""A tour of the traversal schemes over one small module.

Each stop builds a strategy from the shared combinator vocabulary and
runs it on the same module, printing what came out.  Pass a path to an
.ml0 file to tour your own module instead.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from strategem import (
    IDENTITY,
    LIST_CONCAT,
    PARTIAL,
    adhoc_tu,
    apply,
    build_tu,
    crush,
    fail_tu,
    once_td,
    select,
)
from strategem.analyses import (
    NoFocus,
    all_types,
    de_bruijn,
    encode,
    free_vars,
    no_codes,
    select_focus,
    type_token,
    count_of_type,
)
from strategem.minilang import DECL, EXPR, MODULE, parse, pretty, to_term
from strategem.terms import INT, STR, cast

DEFAULT_MODULE = """\
module Tour where
data L = Nil | Cons Int L
type N = L
add x y = x
f x = << add x 1 >>
g = let h = f h in h 2
msg = "hello"
"""


def stop(title):
    print()
    print(f"== {title}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("module", nargs="?", help="optional .ml0 file to tour")
    args = parser.parse_args()

    source = Path(args.module).read_text() if args.module else DEFAULT_MODULE
    module = parse(source)
    t = to_term(module)

    print("the module under tour:")
    print(pretty(module), end="")

    stop("crush: every integer, in document order")
    grab = adhoc_tu(build_tu(IDENTITY, []), INT, lambda v: IDENTITY.pure([v]))
    print(apply(crush(grab, LIST_CONCAT), t))

    stop("once_td: the first string, and only it")
    probe = adhoc_tu(fail_tu(PARTIAL), STR, lambda v: PARTIAL.pure(v))
    print(apply(once_td(probe), t))

    stop("select: same search, written as selection")
    print(apply(select(probe), t))

    stop("type names, declared or used")
    print(sorted(all_types(module)))

    stop("free variables of the whole module")
    print(sorted(free_vars(t)) or "(closed)")

    stop("count declarations generically")
    print(count_of_type(type_token(DECL), t))

    stop("the focused expression, if any")
    try:
        print(select_focus(module))
    except NoFocus as exc:
        print(f"no focus: {exc}")

    stop("fresh names for every string atom")
    print(pretty(cast(de_bruijn(t), MODULE).value), end="")

    stop("stable codes for repeated subterms")
    coder = no_codes()
    lines = pretty(module).splitlines()[1:]
    for d, line in zip(module.decls, lines):
        code, coder = encode(coder, to_term(d, DECL))
        print(f"  code {code}: {line}")
    if module.decls:
        again, coder = encode(coder, to_term(module.decls[0], DECL))
        print(f"  encoding the first declaration again: code {again}")


if __name__ == "__main__":
    main()
