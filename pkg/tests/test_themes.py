"""Traversal schemes: visit order, cut-off, normal forms, environments."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pytest

from oracles import collect_ints, collect_strings, first_success, preorder
from strategem.effects import (
    IDENTITY,
    LIST_CONCAT,
    NOTHING,
    PARTIAL,
    PARTIAL_STATE,
    SET_UNION,
    STATE,
    Just,
    StateOver,
    run_state,
)
from strategem.minilang import (
    EXPR,
    App,
    Lam,
    Let,
    LitInt,
    PVar,
    Var,
    parse,
    to_term,
)
from strategem.strategies import (
    TP,
    TU,
    adhoc_tp,
    adhoc_tu,
    apply,
    build_tu,
    fail_tp,
    fail_tu,
    identity_tp,
    tp_ops,
    tu_ops,
)
from strategem.terms import INT, STR, Registry, children, list_of, pair_of, term
from strategem.themes import (
    bottomup,
    crush,
    free_names,
    innermost,
    local_state,
    once_bu,
    once_td,
    repeat_,
    select,
    selectenv,
    stop_td,
    stop_td_tu,
    topdown,
    traverse_meta,
    try_,
)

CORPUS = Path(__file__).parent / "corpus"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Plus:
    left: Arith
    right: Arith


Arith = Num | Plus

ARITHS = Registry()
ARITH = ARITHS.derive({"Arith": [Num, Plus]})["Arith"]
ARITHS.freeze()


def nested_pair():
    # (1, ([2], 3)) with every component in the term view.
    inner = pair_of(list_of(INT), INT)
    return term((1, ([2], 3)), pair_of(INT, inner))


def inc_ints_step(ctx):
    return adhoc_tp(identity_tp(ctx), INT, lambda v: ctx.pure(v + 1))


def grab_ints():
    return adhoc_tu(build_tu(IDENTITY, []), INT, lambda v: IDENTITY.pure([v]))


def grab_strs():
    return adhoc_tu(build_tu(IDENTITY, []), STR, lambda v: IDENTITY.pure([v]))


def _label(t):
    return (t.tag.name, repr(t.value))


def _logger():
    def run(t):
        return STATE.bind(
            STATE.get(),
            lambda log: STATE.bind(STATE.put(log + (_label(t),)), lambda _: STATE.pure(t)),
        )

    return TP(STATE, run)


def _postorder(t):
    for kid in children(t):
        yield from _postorder(kid)
    yield t


# Visit order.


def test_topdown_visits_in_preorder():
    t = ARITHS.term(Plus(Plus(Num(1), Num(2)), Num(3)))
    out, log = run_state(apply(topdown(_logger()), t), ())
    assert out == t
    assert list(log) == [_label(x) for x in preorder(t)]


def test_bottomup_visits_in_postorder():
    t = ARITHS.term(Plus(Plus(Num(1), Num(2)), Num(3)))
    out, log = run_state(apply(bottomup(_logger()), t), ())
    assert out == t
    assert list(log) == [_label(x) for x in _postorder(t)]


def test_topdown_increments_every_int():
    out = apply(topdown(inc_ints_step(IDENTITY)), nested_pair())
    assert out.value == (2, ([3], 4))


def test_topdown_and_bottomup_agree_on_independent_rules():
    t = nested_pair()
    s = inc_ints_step(IDENTITY)
    assert apply(topdown(s), t) == apply(bottomup(s), t)


# One-hit schemes.


def test_once_td_hits_the_first_preorder_match():
    bump = adhoc_tp(fail_tp(PARTIAL), INT, lambda v: PARTIAL.pure(v + 100))
    out = apply(once_td(bump), nested_pair())
    assert out == Just(term((101, ([2], 3)), nested_pair().tag))


def test_once_td_matches_the_preorder_oracle():
    t = to_term(parse((CORPUS / "funs.ml0").read_text()))
    probe = adhoc_tu(fail_tu(PARTIAL), STR, lambda v: PARTIAL.pure(v))
    got = apply(once_td(probe), t)
    expected = first_success(lambda sub: sub.value if sub.tag is STR else None, t)
    assert got == Just(expected[1])


def test_once_bu_prefers_the_deepest_leftmost_match():
    t = ARITHS.term(Plus(Num(1), Num(2)))
    probe = adhoc_tu(fail_tu(PARTIAL), ARITH, lambda v: PARTIAL.pure(v))
    assert apply(once_td(probe), t) == Just(Plus(Num(1), Num(2)))
    assert apply(once_bu(probe), t) == Just(Num(1))


def test_once_fails_when_nothing_matches():
    probe = adhoc_tu(fail_tu(PARTIAL), STR, lambda v: PARTIAL.pure(v))
    t = ARITHS.term(Plus(Num(1), Num(2)))
    assert apply(once_td(probe), t) is NOTHING
    assert apply(once_bu(probe), t) is NOTHING


# Cut-off schemes.


def _strip_let():
    def step(v):
        if isinstance(v, Let):
            return PARTIAL.pure(v.body)
        return NOTHING

    return adhoc_tp(fail_tp(PARTIAL), EXPR, step)


def test_stop_td_does_not_descend_below_a_success():
    e = Let("x", LitInt(1), Let("y", LitInt(2), Var("z")))
    out = apply(stop_td(_strip_let()), to_term(e, EXPR))
    assert out == Just(to_term(Let("y", LitInt(2), Var("z")), EXPR))


def test_stop_td_rewrites_each_topmost_match():
    e = App(Let("x", LitInt(1), Var("a")), Let("y", LitInt(2), Var("b")))
    out = apply(stop_td(_strip_let()), to_term(e, EXPR))
    assert out == Just(to_term(App(Var("a"), Var("b")), EXPR))


def test_stop_td_with_failing_step_is_identity():
    t = nested_pair()
    assert apply(stop_td(fail_tp(PARTIAL)), t) == Just(t)


def test_stop_td_tu_cuts_below_successes():
    def step(v):
        if isinstance(v, Lam):
            return PARTIAL.pure(["lam"])
        if isinstance(v, Var):
            return PARTIAL.pure([v.name])
        return NOTHING

    s = adhoc_tu(fail_tu(PARTIAL), EXPR, step)
    e = App(Lam(PVar("p"), Var("hidden")), Var("y"))
    out = apply(stop_td_tu(s, LIST_CONCAT), to_term(e, EXPR))
    assert out == Just(["lam", "y"])


# Recovery and repetition.


def test_try_keeps_the_term_on_failure():
    t = term("s")
    assert apply(try_(fail_tp(PARTIAL)), t) == Just(t)
    bump = adhoc_tp(fail_tp(PARTIAL), INT, lambda v: PARTIAL.pure(v + 1))
    assert apply(try_(bump), term(1)) == Just(term(2))


def test_repeat_applies_until_failure():
    def step(v):
        return PARTIAL.pure(v - 1) if v > 0 else NOTHING

    countdown = adhoc_tp(fail_tp(PARTIAL), INT, step)
    assert apply(repeat_(countdown), term(3)) == Just(term(0))
    assert apply(repeat_(countdown), term(0)) == Just(term(0))
    assert apply(repeat_(countdown), term("s")) == Just(term("s"))


# Normalization.


def _zero_rule():
    def step(v):
        if isinstance(v, Plus) and v.left == Num(0):
            return PARTIAL.pure(v.right)
        return NOTHING

    return adhoc_tp(fail_tp(PARTIAL), ARITH, step)


def test_innermost_reaches_the_normal_form():
    t = ARITHS.term(Plus(Num(0), Plus(Num(0), Num(5))))
    assert apply(innermost(_zero_rule()), t) == Just(ARITHS.term(Num(5)))
    t = ARITHS.term(Plus(Plus(Num(0), Num(0)), Num(7)))
    assert apply(innermost(_zero_rule()), t) == Just(ARITHS.term(Num(7)))


def test_innermost_leaves_no_redex_behind():
    t = ARITHS.term(Plus(Num(0), Plus(Plus(Num(0), Num(1)), Num(0))))
    out = apply(innermost(_zero_rule()), t)
    assert isinstance(out, Just)
    assert apply(once_td(_zero_rule()), out.value) is NOTHING


def test_innermost_is_identity_without_redexes():
    t = ARITHS.term(Plus(Num(1), Num(2)))
    assert apply(innermost(_zero_rule()), t) == Just(t)


# Deep collection.


def test_crush_collects_in_preorder():
    assert apply(crush(grab_ints(), LIST_CONCAT), nested_pair()) == [1, 2, 3]


def test_crush_matches_the_reference_walkers():
    for name in ("funs.ml0", "nested.ml0", "data.ml0"):
        m = parse((CORPUS / name).read_text())
        t = to_term(m)
        assert apply(crush(grab_ints(), LIST_CONCAT), t) == collect_ints(m)
        assert apply(crush(grab_strs(), LIST_CONCAT), t) == collect_strings(m)


# Selection.


def test_select_returns_the_first_holding_analysis():
    t = to_term(parse((CORPUS / "strings.ml0").read_text()))
    probe = adhoc_tu(fail_tu(PARTIAL), STR, lambda v: PARTIAL.pure(v))
    got = apply(select(probe), t)
    expected = first_success(lambda sub: sub.value if sub.tag is STR else None, t)
    assert got == Just(expected[1])


def test_select_fails_only_if_the_analysis_fails_everywhere():
    t = ARITHS.term(Plus(Num(1), Num(2)))
    probe = adhoc_tu(fail_tu(PARTIAL), STR, lambda v: PARTIAL.pure(v))
    assert apply(select(probe), t) is NOTHING
    sometimes = adhoc_tu(fail_tu(PARTIAL), INT, lambda v: PARTIAL.pure(v))
    assert apply(select(sometimes), t) == Just(1)


def test_selectenv_with_a_constant_environment_is_select():
    t = to_term(parse((CORPUS / "funs.ml0").read_text()))
    probe = lambda env: adhoc_tu(fail_tu(PARTIAL), STR, lambda v: PARTIAL.pure((env, v)))
    got = apply(selectenv("e", lambda env, node: env, probe), t)
    plain = apply(select(probe("e")), t)
    assert got == plain


def test_selectenv_threads_depth_along_the_descent():
    probe = lambda d: adhoc_tu(
        fail_tu(PARTIAL), INT, lambda v: PARTIAL.pure(v) if d == 2 else NOTHING
    )
    got = apply(selectenv(0, lambda d, node: d + 1, probe), nested_pair())
    # The only Int at depth two in (1, ([2], 3)) is the 3.
    assert got == Just(3)


def test_selectenv_tracks_binders():
    def update(env, node):
        v = node.value
        if node.tag is EXPR and isinstance(v, Lam) and isinstance(v.param, PVar):
            return env | {v.param.name}
        return env

    def bound_var(env):
        def step(v):
            if isinstance(v, Var) and v.name in env:
                return PARTIAL.pure(v.name)
            return NOTHING

        return adhoc_tu(fail_tu(PARTIAL), EXPR, step)

    e = Lam(PVar("x"), App(Var("add"), Var("x")))
    got = apply(selectenv(frozenset(), update, bound_var), to_term(e, EXPR))
    assert got == Just("x")
    free_only = App(Var("add"), Var("y"))
    assert apply(selectenv(frozenset(), update, bound_var), to_term(free_only, EXPR)) is NOTHING


# Free names as a scheme.


def _lam_refs():
    def step(v):
        return IDENTITY.pure(frozenset({v.name}) if isinstance(v, Var) else frozenset())

    return adhoc_tu(build_tu(IDENTITY, frozenset()), EXPR, step)


def _lam_decs():
    def step(v):
        if isinstance(v, Lam) and isinstance(v.param, PVar):
            return IDENTITY.pure(frozenset({v.param.name}))
        return IDENTITY.pure(frozenset())

    return adhoc_tu(build_tu(IDENTITY, frozenset()), EXPR, step)


def test_free_names_subtracts_bound_names():
    s = free_names(_lam_refs(), _lam_decs())
    e = Lam(PVar("x"), App(App(Var("add"), Var("x")), Var("y")))
    assert apply(s, to_term(e, EXPR)) == frozenset({"add", "y"})


def test_free_names_scopes_binders_locally():
    s = free_names(_lam_refs(), _lam_decs())
    e = App(Lam(PVar("x"), Var("x")), Var("x"))
    assert apply(s, to_term(e, EXPR)) == frozenset({"x"})
    closed = Lam(PVar("x"), Var("x"))
    assert apply(s, to_term(closed, EXPR)) == frozenset()


# The scheme behind the schemes.


def test_traverse_meta_reads_as_topdown():
    ops = tp_ops()
    s = inc_ints_step(IDENTITY)
    t = nested_pair()
    assert apply(traverse_meta(ops.seq, ops.all, s), t) == apply(topdown(s), t)


def test_traverse_meta_reads_as_crush():
    ops = tu_ops(LIST_CONCAT)
    t = to_term(parse((CORPUS / "funs.ml0").read_text()))
    got = apply(traverse_meta(ops.seq, ops.all, grab_ints()), t)
    assert got == apply(crush(grab_ints(), LIST_CONCAT), t)


def test_traverse_meta_reads_as_once_td():
    ops = tp_ops()
    bump = adhoc_tp(fail_tp(PARTIAL), INT, lambda v: PARTIAL.pure(v + 100))
    t = nested_pair()
    assert apply(traverse_meta(ops.choice, ops.one, bump), t) == apply(once_td(bump), t)


# Local state.


def _stamp():
    ctx = STATE

    def step(v):
        return ctx.bind(ctx.get(), lambda n: ctx.bind(ctx.put(n + 1), lambda _: ctx.pure(n)))

    return adhoc_tp(identity_tp(ctx), INT, step)


def test_local_state_hides_the_counter():
    s = local_state(10, topdown(_stamp()))
    assert s.context == IDENTITY
    out = apply(s, nested_pair())
    assert out.value == (10, ([11], 12))


def test_local_state_restarts_per_application():
    s = local_state(0, topdown(_stamp()))
    first = apply(s, nested_pair())
    second = apply(s, nested_pair())
    assert first == second


def test_local_state_on_stateless_strategy_is_inert():
    s = local_state(0, topdown(inc_ints_step(STATE)))
    plain = topdown(inc_ints_step(IDENTITY))
    t = nested_pair()
    assert apply(s, t) == apply(plain, t)


def test_local_state_rejects_stateless_contexts():
    with pytest.raises(TypeError):
        local_state(0, identity_tp(IDENTITY))


def test_local_state_over_partial():
    ctx = PARTIAL_STATE

    def step(v):
        return ctx.bind(ctx.get(), lambda n: ctx.bind(ctx.put(n + 1), lambda _: ctx.pure(n)))

    s = local_state(5, topdown(adhoc_tp(identity_tp(ctx), INT, step)))
    assert s.context == PARTIAL
    assert isinstance(s.context, StateOver) is False
    out = apply(s, nested_pair())
    assert out == Just(term((5, ([6], 7)), nested_pair().tag))
