"""Effect contexts that strategies run in.

A strategy does not commit to one notion of computation.  Plain rewriting
needs nothing, rule application needs failure, name generation needs state.
Each notion is packaged as an effect context with `pure` and `bind`, plus
optional capabilities:

  * failure: `zero` and `plus` (committed first-success choice),
  * state: `get` and `put`.

Four contexts cover the library: IDENTITY, PARTIAL, STATE (state threaded
over identity) and PARTIAL_STATE (state threaded over partial).  The last
two are instances of one StateOver construction, so a state context can sit
on top of any inner context.

Computations are ordinary values: the value itself for IDENTITY, a Just or
NOTHING for PARTIAL, and a function from state to an inner computation of a
(value, state) pair for StateOver.  `run_identity`, `run_partial` and
`run_state` are the corresponding eliminators.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Any, Callable

__all__ = [
    "Just",
    "NOTHING",
    "is_just",
    "from_just",
    "EffectContext",
    "Identity",
    "Partial",
    "StateOver",
    "IDENTITY",
    "PARTIAL",
    "STATE",
    "PARTIAL_STATE",
    "supports_failure",
    "supports_state",
    "run_identity",
    "run_partial",
    "run_state",
    "Monoid",
    "LIST_CONCAT",
    "SET_UNION",
    "INT_SUM",
    "EffectMorphism",
    "identity_morphism",
    "partial_to_identity",
    "unlift_state",
]


@dataclass(frozen=True)
class Just:
    """A present result of a partial computation."""

    value: Any


class _Nothing:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOTHING"


NOTHING = _Nothing()


def is_just(m) -> bool:
    return isinstance(m, Just)


def from_just(m, default=None):
    return m.value if isinstance(m, Just) else default


class EffectContext:
    """Interface every effect context implements.

    `pure` injects a value, `bind` sequences a computation into a function
    producing the next one.  Both obey the usual identity and associativity
    laws.  Subclasses add capabilities by defining the capability methods;
    their absence is meaningful and is checked by `supports_failure` and
    `supports_state`.
    """

    kind = "abstract"

    def pure(self, value):
        raise NotImplementedError

    def bind(self, comp, fn):
        raise NotImplementedError

    def plus_lazy(self, first, second):
        # Default for contexts whose plus cannot short-circuit: force both.
        return self.plus(first(), second())

    def __repr__(self):
        return f"<context {self.kind}>"


class Identity(EffectContext):
    """Effect-free context.  A computation is the value itself."""

    kind = "identity"

    def pure(self, value):
        return value

    def bind(self, comp, fn):
        return fn(comp)

    def __eq__(self, other):
        return isinstance(other, Identity)

    def __hash__(self):
        return hash(Identity)


class Partial(EffectContext):
    """Context with failure.  A computation is Just(v) or NOTHING."""

    kind = "partial"

    def pure(self, value):
        return Just(value)

    def bind(self, comp, fn):
        if isinstance(comp, Just):
            return fn(comp.value)
        return NOTHING

    def zero(self):
        return NOTHING

    def plus(self, left, right):
        # Committed choice: the first success wins, the loser is dropped.
        return left if isinstance(left, Just) else right

    def plus_lazy(self, first, second):
        left = first()
        return left if isinstance(left, Just) else second()

    def __eq__(self, other):
        return isinstance(other, Partial)

    def __hash__(self):
        return hash(Partial)


class StateOver(EffectContext):
    """State threaded over an inner context.

    A computation is a function from the current state to an inner
    computation of a (value, new state) pair.  Failure capability is
    inherited from the inner context; on a failed branch of `plus` the
    state of the losing branch is discarded along with its result.
    """

    kind = "state"

    def __init__(self, inner: EffectContext):
        self.inner = inner

    def pure(self, value):
        return lambda s: self.inner.pure((value, s))

    def bind(self, comp, fn):
        def run(s):
            return self.inner.bind(comp(s), lambda pair: fn(pair[0])(pair[1]))

        return run

    def zero(self):
        return lambda s: self.inner.zero()

    def plus(self, left, right):
        return lambda s: self.inner.plus_lazy(lambda: left(s), lambda: right(s))

    def plus_lazy(self, first, second):
        return lambda s: self.inner.plus_lazy(lambda: first()(s), lambda: second()(s))

    def get(self):
        return lambda s: self.inner.pure((s, s))

    def put(self, new_state):
        return lambda s: self.inner.pure((None, new_state))

    def __eq__(self, other):
        return isinstance(other, StateOver) and self.inner == other.inner

    def __hash__(self):
        return hash((StateOver, self.inner))

    def __repr__(self):
        return f"<context state over {self.inner.kind}>"


IDENTITY = Identity()
PARTIAL = Partial()
STATE = StateOver(IDENTITY)
PARTIAL_STATE = StateOver(PARTIAL)


def supports_failure(ctx: EffectContext) -> bool:
    if isinstance(ctx, Partial):
        return True
    if isinstance(ctx, StateOver):
        return supports_failure(ctx.inner)
    return False


def supports_state(ctx: EffectContext) -> bool:
    return isinstance(ctx, StateOver)


def run_identity(comp):
    """Eliminate an IDENTITY computation."""
    return comp


def run_partial(comp):
    """Eliminate a PARTIAL computation to Just(v) or NOTHING."""
    return comp


def run_state(comp, initial):
    """Run a StateOver computation from an initial state.

    Over IDENTITY the result is a (value, final state) pair; over PARTIAL
    it is Just of such a pair or NOTHING.
    """
    return comp(initial)


@dataclass(frozen=True)
class Monoid:
    """Neutral element plus an associative append, passed to unifying folds."""

    neutral: Any
    append: Callable[[Any, Any], Any]


LIST_CONCAT = Monoid([], operator.add)
SET_UNION = Monoid(frozenset(), operator.or_)
INT_SUM = Monoid(0, operator.add)


@dataclass(frozen=True)
class EffectMorphism:
    """A mapping between effect contexts that preserves pure values."""

    source: EffectContext
    target: EffectContext
    run: Callable[[Any], Any]


def identity_morphism(ctx: EffectContext) -> EffectMorphism:
    return EffectMorphism(ctx, ctx, lambda comp: comp)


def partial_to_identity(default) -> EffectMorphism:
    """Forget failure, recovering with a default.

    Meant for strategies that cannot actually fail any more, for example
    after wrapping in a recovery combinator; the default then never shows.
    """
    return EffectMorphism(
        PARTIAL, IDENTITY, lambda comp: comp.value if isinstance(comp, Just) else default
    )


def unlift_state(ctx: StateOver, initial) -> EffectMorphism:
    """Run state locally: start from `initial`, discard the final state.

    Maps computations in a StateOver context to its inner context, so the
    state becomes invisible from outside.
    """
    if not isinstance(ctx, StateOver):
        raise TypeError(f"unlift_state needs a state context, got {ctx!r}")
    inner = ctx.inner

    def run(comp):
        return inner.bind(comp(initial), lambda pair: inner.pure(pair[0]))

    return EffectMorphism(ctx, inner, run)
