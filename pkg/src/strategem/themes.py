"""Traversal schemes.

Recurring traversal shapes, captured once over the core combinators so
concrete traversals are one-liners.  Nothing in here mentions a concrete
datatype; type-specific behaviour always arrives through the argument
strategies.

The defining equations, with seq/choice/all/one from the core vocabulary:

  topdown(s)   = seq(s, all(topdown(s)))
  bottomup(s)  = seq(all(bottomup(s)), s)
  once_td(s)   = choice(s, one(once_td(s)))
  once_bu(s)   = choice(one(once_bu(s)), s)
  stop_td(s)   = choice(s, all(stop_td(s)))
  try_(s)      = choice(s, identity)
  repeat_(s)   = try_(seq(s, repeat_(s)))
  innermost(s) = seq(all(innermost(s)), try_(seq(s, innermost(s))))
  select(s)    = choice(s, one(select(s)))

`repeat_` and `innermost` terminate only for terminating rewrite systems.
"""

from __future__ import annotations

from typing import Any, Callable

from .effects import EffectMorphism, Monoid, SET_UNION, StateOver, unlift_state
from .strategies import (
    TP,
    TU,
    all_tp,
    all_tu,
    build_tu,
    choice_tp,
    choice_tu,
    identity_tp,
    let_tu,
    msubst_tp,
    msubst_tu,
    one_tp,
    one_tu,
    seq_tp,
)

__all__ = [
    "topdown",
    "bottomup",
    "once_td",
    "once_bu",
    "stop_td",
    "stop_td_tu",
    "try_",
    "repeat_",
    "innermost",
    "crush",
    "select",
    "selectenv",
    "free_names",
    "traverse_meta",
    "local_state",
]


def _recursive(kind, ctx, define):
    # Tie the knot: hand `define` a self-reference before the body exists.
    def run(t):
        return body.run(t)

    rec = kind(ctx, run)
    body = define(rec)
    return rec


def topdown(s: TP) -> TP:
    """Apply a transformation to every subterm, root first."""
    return _recursive(TP, s.context, lambda rec: seq_tp(s, all_tp(rec)))


def bottomup(s: TP) -> TP:
    """Apply a transformation to every subterm, leaves first."""
    return _recursive(TP, s.context, lambda rec: seq_tp(all_tp(rec), s))


def once_td(s):
    """Apply a strategy to the first subterm it succeeds on, in preorder."""
    if isinstance(s, TP):
        return _recursive(TP, s.context, lambda rec: choice_tp(s, one_tp(rec)))
    return _recursive(TU, s.context, lambda rec: choice_tu(s, one_tu(rec)))


def once_bu(s):
    """Apply a strategy to the first subterm it succeeds on, leaves first."""
    if isinstance(s, TP):
        return _recursive(TP, s.context, lambda rec: choice_tp(one_tp(rec), s))
    return _recursive(TU, s.context, lambda rec: choice_tu(one_tu(rec), s))


def stop_td(s: TP) -> TP:
    """Transform top-down but do not descend below a success."""
    return _recursive(TP, s.context, lambda rec: choice_tp(s, all_tp(rec)))


def stop_td_tu(s: TU, monoid: Monoid) -> TU:
    """Collect top-down, cutting off below every success."""
    return _recursive(TU, s.context, lambda rec: choice_tu(s, all_tu(rec, monoid)))


def try_(s: TP) -> TP:
    """Attempt a transformation, keeping the term on failure."""
    return choice_tp(s, identity_tp(s.context))


def repeat_(s: TP) -> TP:
    """Apply a transformation at the root until it fails."""
    return _recursive(TP, s.context, lambda rec: try_(seq_tp(s, rec)))


def innermost(s: TP) -> TP:
    """Rewrite to normal form: exhaustively, innermost redexes first."""
    return _recursive(
        TP,
        s.context,
        lambda rec: seq_tp(all_tp(rec), try_(seq_tp(s, rec))),
    )


def crush(s: TU, monoid: Monoid) -> TU:
    """Fold an analysis over every subterm, root first.

    At each node the node's own result comes before the children's fold.
    The step must succeed everywhere it is reached; wrap a partial step
    in choice with a neutral build first.
    """
    ctx = s.context

    def define(rec):
        def run(t):
            return ctx.bind(
                s.run(t),
                lambda here: ctx.bind(
                    all_tu(rec, monoid).run(t),
                    lambda below: ctx.pure(monoid.append(here, below)),
                ),
            )

        return TU(ctx, run)

    return _recursive(TU, ctx, define)


def select(s: TU) -> TU:
    """The result of a partial analysis at the first subterm it holds on.

    Fails only if the analysis fails at every subterm.
    """
    return _recursive(TU, s.context, lambda rec: choice_tu(s, one_tu(rec)))


def selectenv(env, update: Callable, s: Callable[[Any], TU]) -> TU:
    """Selection with an environment threaded along the descent.

    At each node the strategy for the current environment is tried first;
    below the node the environment becomes `update(env, node)`.
    """
    ctx = s(env).context

    def at(env):
        def run(t):
            return ctx.plus_lazy(
                lambda: s(env).run(t), lambda: one_tu(at(update(env, t))).run(t)
            )

        return TU(ctx, run)

    return at(env)


def free_names(refs: TU, decs: TU) -> TU:
    """Free-name analysis over any scoping discipline.

    `refs` yields the names a node itself mentions, `decs` the names the
    node binds for everything below it; both must be total and return
    sets.  A node's free names are its own and its children's, minus what
    it binds.
    """
    ctx = refs.context
    return _recursive(
        TU,
        ctx,
        lambda rec: let_tu(
            refs,
            lambda used: let_tu(
                all_tu(rec, SET_UNION),
                lambda below: let_tu(
                    decs, lambda bound: build_tu(ctx, (used | below) - bound)
                ),
            ),
        ),
    )


def traverse_meta(combine: Callable, descend: Callable, s):
    """The scheme behind the schemes: traverse(s) = combine(s, descend(traverse(s))).

    With the overloaded vocabulary, (seq, all) reads as topdown for
    transformations and as crush for analyses; (choice, one) reads as
    once_td for both.
    """
    return _recursive(type(s), s.context, lambda rec: combine(s, descend(rec)))


def local_state(initial, s):
    """Hide the state of a stateful strategy.

    The strategy must live in a StateOver context; the result lives in
    the inner context, starts every application from `initial` and
    discards the final state.
    """
    ctx = s.context
    if not isinstance(ctx, StateOver):
        raise TypeError(f"local_state needs a strategy in a state context, got {ctx!r}")
    morphism = unlift_state(ctx, initial)
    if isinstance(s, TP):
        return msubst_tp(morphism, s)
    return msubst_tu(morphism, s)
