"""Worked analyses and transformations over the mini-language.

Each operation hides its strategy plumbing behind a plain signature, so
callers see ordinary functions on terms and modules:

  inc_ints           add one to every integer atom of any term
  any_types          one-node step collecting declared or used type names
  all_types          every type name declared or used in a module
  is_fresh_type      whether a name is unused as a type name
  free_vars          free variables of any syntax fragment
  to_alias           replace the focused type with a declared synonym
  de_bruijn          replace every string atom with a fresh name
  Coder              assign stable integer codes to terms
  count_of_type      count subterms of one datatype
  select_focus       contents of the expression focus
  select_type_focus  contents of the type focus

`to_alias` and the focus selectors raise NoFocus, NoSuchAlias or
GuardFailed; everything else is total.
"""

from __future__ import annotations

from dataclasses import dataclass

from .effects import (
    IDENTITY,
    INT_SUM,
    PARTIAL,
    SET_UNION,
    STATE,
    is_just,
    run_identity,
    run_partial,
)
from .minilang import (
    DECL,
    EXPR,
    MODULE,
    TYPE,
    DataDecl,
    Focus,
    FunBind,
    Lam,
    Let,
    Module,
    PVar,
    TyCon,
    TyFocus,
    TypeSyn,
    Var,
    to_term,
)
from .strategies import (
    TP,
    TU,
    adhoc_tp,
    adhoc_tu,
    apply,
    build_tu,
    choice_tu,
    fail_tp,
    fail_tu,
    identity_tp,
)
from .terms import INT, STR, Term, TypeTag, cast, same_term
from .themes import crush, free_names, local_state, once_td, select, topdown

__all__ = [
    "NameSet",
    "NoFocus",
    "NoSuchAlias",
    "GuardFailed",
    "inc_ints",
    "any_types",
    "all_types",
    "is_fresh_type",
    "free_vars",
    "to_alias",
    "de_bruijn",
    "de_bruijn_strategy",
    "Coder",
    "no_codes",
    "get_code",
    "set_code",
    "next_code",
    "encode",
    "TypeToken",
    "type_token",
    "count_of_type",
    "select_focus",
    "select_type_focus",
]

NameSet = frozenset


class NoFocus(Exception):
    """The module has no focus of the required kind."""


class NoSuchAlias(Exception):
    """No type synonym of the requested name is declared."""


class GuardFailed(Exception):
    """The focused type does not match the synonym's right-hand side."""


def inc_ints(t: Term) -> Term:
    """Add one to every integer atom, leaving everything else alone."""
    step = adhoc_tp(identity_tp(IDENTITY), INT, lambda n: IDENTITY.pure(n + 1))
    return run_identity(apply(topdown(step), t))


def _decl_type_names(d):
    if isinstance(d, (DataDecl, TypeSyn)):
        return IDENTITY.pure(frozenset({d.name}))
    return IDENTITY.pure(frozenset())


def _used_type_names(ty):
    if isinstance(ty, TyCon):
        return IDENTITY.pure(frozenset({ty.name}))
    return IDENTITY.pure(frozenset())


# One-node step: type names declared here (data and synonym heads) or used
# here (type constructor occurrences); empty anywhere else.
any_types: TU = adhoc_tu(
    adhoc_tu(build_tu(IDENTITY, frozenset()), DECL, _decl_type_names),
    TYPE,
    _used_type_names,
)


def all_types(module: Module) -> NameSet:
    """Every type name declared or used anywhere in the module."""
    return run_identity(apply(crush(any_types, SET_UNION), to_term(module)))


def is_fresh_type(name: str, module: Module) -> bool:
    """True when the name is unused as a type name in the module."""
    return name not in all_types(module)


def _pattern_vars(p) -> frozenset:
    if isinstance(p, PVar):
        return frozenset({p.name})
    out = frozenset()
    for arg in p.args:
        out |= _pattern_vars(arg)
    return out


def _refs(e):
    if isinstance(e, Var):
        return IDENTITY.pure(frozenset({e.name}))
    return IDENTITY.pure(frozenset())


def _expr_decs(e):
    if isinstance(e, Lam):
        return IDENTITY.pure(_pattern_vars(e.param))
    if isinstance(e, Let):
        # Recursive let: the binder scopes over its own right-hand side.
        return IDENTITY.pure(frozenset({e.name}))
    return IDENTITY.pure(frozenset())


def _decl_decs(d):
    if isinstance(d, FunBind):
        out = frozenset()
        for p in d.params:
            out |= _pattern_vars(p)
        return IDENTITY.pure(out)
    return IDENTITY.pure(frozenset())


def _module_decs(m):
    # Bindings are mutually recursive at module level, so every bound
    # function name scopes over every body.
    names = frozenset(d.name for d in m.decls if isinstance(d, FunBind))
    return IDENTITY.pure(names)


def free_vars(t: Term) -> NameSet:
    """Free variables of any syntax fragment, respecting all binders."""
    empty = build_tu(IDENTITY, frozenset())
    refs = adhoc_tu(empty, EXPR, _refs)
    decs = adhoc_tu(
        adhoc_tu(adhoc_tu(empty, EXPR, _expr_decs), DECL, _decl_decs),
        MODULE,
        _module_decs,
    )
    return run_identity(apply(free_names(refs, decs), t))


def _focused_type(ty):
    if isinstance(ty, TyFocus):
        return PARTIAL.pure(ty.inner)
    return PARTIAL.zero()


def _focused_expr(e):
    if isinstance(e, Focus):
        return PARTIAL.pure(e.inner)
    return PARTIAL.zero()


def select_type_focus(module: Module):
    """The type inside the module's type focus."""
    step = adhoc_tu(fail_tu(PARTIAL), TYPE, _focused_type)
    got = run_partial(apply(select(step), to_term(module)))
    if not is_just(got):
        raise NoFocus("module has no type focus")
    return got.value


def select_focus(module: Module):
    """The expression inside the module's expression focus."""
    step = adhoc_tu(fail_tu(PARTIAL), EXPR, _focused_expr)
    got = run_partial(apply(select(step), to_term(module)))
    if not is_just(got):
        raise NoFocus("module has no expression focus")
    return got.value


def to_alias(name: str, module: Module) -> Module:
    """Fold the focused type expression into a declared synonym.

    The focused type must be exactly the synonym's right-hand side; the
    focus marker is then replaced by the synonym's name.
    """
    focused = select_type_focus(module)

    def alias_rhs(d):
        if isinstance(d, TypeSyn) and d.name == name:
            return PARTIAL.pure(d.rhs)
        return PARTIAL.zero()

    lookup = select(adhoc_tu(fail_tu(PARTIAL), DECL, alias_rhs))
    rhs = run_partial(apply(lookup, to_term(module)))
    if not is_just(rhs):
        raise NoSuchAlias(f"no type synonym named {name}")
    if focused != rhs.value:
        raise GuardFailed(f"focused type is not the right-hand side of {name}")

    def fold(ty):
        if isinstance(ty, TyFocus):
            return PARTIAL.pure(TyCon(name))
        return PARTIAL.zero()

    replace = once_td(adhoc_tp(fail_tp(PARTIAL), TYPE, fold))
    rewritten = run_partial(apply(replace, to_term(module)))
    return cast(rewritten.value, MODULE).value


def _fresh_name(_old):
    # Issue the current name, leave a primed copy for the next string.
    return STATE.bind(
        STATE.get(),
        lambda n: STATE.bind(STATE.put(n + "'"), lambda _: STATE.pure(n)),
    )


def de_bruijn_strategy() -> TP:
    """The renaming transformation with its name state sealed inside.

    The returned strategy lives in the plain identity context; each
    application starts a fresh supply at "1".
    """
    step = adhoc_tp(identity_tp(STATE), STR, _fresh_name)
    return local_state("1", topdown(step))


def de_bruijn(t: Term) -> Term:
    """Replace every string atom, in preorder, with "1", "1'", "1''", ..."""
    return run_identity(apply(de_bruijn_strategy(), t))


@dataclass(frozen=True)
class Coder:
    """Issues stable integer codes for terms.

    `counter` is the highest code handed out; `lookup` is a unifying
    strategy over the partial context that knows the codes assigned so
    far.  Updating is pure: operations return a new Coder.
    """

    counter: int
    lookup: TU


def no_codes() -> Coder:
    """A coder with no codes assigned."""
    return Coder(0, fail_tu(PARTIAL))


def get_code(coder: Coder, t: Term):
    """Just the code of a term, or NOTHING if none was assigned."""
    return run_partial(apply(coder.lookup, t))


def next_code(coder: Coder):
    """Reserve the next code; returns it and the advanced coder."""
    code = coder.counter + 1
    return code, Coder(code, coder.lookup)


def set_code(coder: Coder, t: Term) -> Coder:
    """Assign the coder's current counter value as the code of a term.

    The lookup strategy is extended pointwise: a new branch answers for
    terms equal to this one, everything else falls through to the old
    lookup.
    """
    code = coder.counter

    def known(value):
        if same_term(Term(value, t.tag), t):
            return PARTIAL.pure(code)
        return PARTIAL.zero()

    branch = adhoc_tu(fail_tu(PARTIAL), t.tag, known)
    return Coder(coder.counter, choice_tu(branch, coder.lookup))


def encode(coder: Coder, t: Term):
    """The term's code, assigning the next free one on first sight.

    Encoding a term twice returns the same code and leaves the coder
    unchanged the second time.
    """
    known = get_code(coder, t)
    if is_just(known):
        return known.value, coder
    code, advanced = next_code(coder)
    return code, set_code(advanced, t)


@dataclass(frozen=True)
class TypeToken:
    """A value standing for a registered datatype, carrying nothing else."""

    tag: TypeTag


def type_token(tag: TypeTag) -> TypeToken:
    return TypeToken(tag)


def count_of_type(token: TypeToken, t: Term) -> int:
    """How many subterms of t, including t, have the token's datatype."""
    tick = adhoc_tu(build_tu(IDENTITY, 0), token.tag, lambda _v: IDENTITY.pure(1))
    return run_identity(apply(crush(tick, INT_SUM), t))
