import random

import pytest
from hypothesis import given, settings

from ccskp.generate import random_process, random_walk
from ccskp.ltsi import (
    AXIOMS, EventStructure, check_axioms, check_sp, completions, directly_key_independent,
    event_key_equiv, events_diamond, flip_mutants, key_independence_pairs, parabolic_normalize,
    rooted_paths, same_partition,
)
from ccskp.relations import dependent_labels, independent_labels
from ccskp.semantics import LtsiGraph, Path, StepError, Transition, explore
from ccskp.syntax import parse
from strategies import processes

EXAMPLES = ["a | ('a + b)", "(a.b|'b.c)\\b", "a.b | 'a.'b", "(a|(b+c)) + (a|b) + ((a+c)|b)",
            "(a | 'a | a)\\a", "tau.a | b + c"]


@pytest.mark.parametrize("src", EXAMPLES)
def test_axioms_on_examples(src):
    assert all(v is None for v in check_axioms(explore(parse(src))).values())


@settings(max_examples=40, deadline=None)
@given(processes(7))
def test_axioms_on_random(p):
    res = check_axioms(explore(p))
    assert res == {k: None for k in AXIOMS}


def toy_graph(indep):
    edges = [Transition("P", "Q", "x"), Transition("P", "R", "y")]
    return LtsiGraph("P", ["P", "Q", "R"], edges, independent=indep)


def test_missing_square_fails_sp():
    g = toy_graph(lambda t, u: t.label != u.label)
    assert check_sp(g) is not None
    assert check_sp(toy_graph(lambda t, u: False)) is None


def test_toy_axioms():
    res = check_axioms(toy_graph(lambda t, u: False))
    assert res == {k: None for k in AXIOMS}


def test_cycle_fails_wf():
    edges = [Transition("P", "Q", "x"), Transition("Q", "P", "y")]
    g = LtsiGraph("P", ["P", "Q"], edges, independent=lambda t, u: False)
    assert check_axioms(g, ["WF"])["WF"] is not None


@pytest.mark.parametrize("src", EXAMPLES)
def test_flipped_independence_is_caught(src):
    g = explore(parse(src))
    for pair, m in flip_mutants(g, random.Random(1), 30):
        res = check_axioms(m)
        assert any(v is not None for v in res.values()), pair


def test_flip_caught_without_rpi():
    # the first-order checkers alone also see a flipped square
    g = explore(parse("a | b"))
    t, u = g.out_fwd[g.root]
    m = g.with_flips([(t, u)])
    res = check_axioms(m, ["SP", "BTI", "PCI", "ID", "IRE"])
    assert res["ID"] is not None


# events


def test_diamond_events_of_parallel():
    g = explore(parse("a | b"))
    es = EventStructure(g)
    fwd = es.forward_events()
    assert len(fwd) == 2
    assert {len(es.members[e]) for e in fwd} == {2}
    for e in fwd:
        assert es.reverse(es.reverse(e)) == e
        assert not es.forward[es.reverse(e)]


@pytest.mark.parametrize("src", EXAMPLES)
def test_event_partitions_agree(src):
    g = explore(parse(src))
    assert same_partition(events_diamond(g), event_key_equiv(g))


@settings(max_examples=40, deadline=None)
@given(processes(7))
def test_event_partitions_agree_random(p):
    g = explore(p)
    assert same_partition(events_diamond(g), event_key_equiv(g))


def test_same_key_different_events():
    # the continuation b gets the same key whether a fired alone or with 'a
    g = explore(parse("a.b | 'a"))
    es = EventStructure(g)
    b_events = {es.of(t) for t in g.edges if str(t.label).endswith("b[1]")}
    assert len(b_events) == 2


def test_causality_despite_independent_labels():
    g = explore(parse("(a.b|'b.c)\\b"))
    es = EventStructure(g)
    ta = next(t for t in g.edges if str(t.label) == "|L a[0]")
    tc = next(t for t in g.edges if str(t.label) == "|R c[3]")
    assert independent_labels(ta.label, tc.label)
    ea, ec = es.of(ta), es.of(tc)
    assert es.causal_lt(ea, ec)
    assert not es.coind(ea, ec)
    assert es.polychotomy(ea, ec) == ["before"]


def test_count():
    g = explore(parse("a | b"))
    es = EventStructure(g)
    ta = next(t for t in g.out_fwd[g.root] if str(t.label) == "|L a[0]")
    tb = next(t for t in g.out_fwd[ta.target])
    r = Path([ta, tb])
    ea = es.of(ta)
    assert es.count(r, ea) == 1
    back = next(t for t in g.steps(tb.target) if not t.forward and t.key == 0)
    assert es.count(Path([ta, tb, back]), ea) == 0
    assert es.count(Path([ta, tb, back]), es.reverse(ea)) == 0


def check_nre(g, max_forward=10, budget=20000):
    es = EventStructure(g)
    for r in rooted_paths(g, max_forward, budget):
        for e in {es.of(t) for t in r}:
            assert es.count(r, e) <= 1


@pytest.mark.parametrize("src", EXAMPLES)
def test_nre(src):
    check_nre(explore(parse(src)), 6, 5000)


def _forward_event_pairs(es):
    fwd = es.forward_events()
    return [(a, b) for a in fwd for b in fwd]


@settings(max_examples=30, deadline=None)
@given(processes(7))
def test_polychotomy(p):
    es = EventStructure(explore(p))
    for a, b in _forward_event_pairs(es):
        assert len(es.polychotomy(a, b)) == 1


@settings(max_examples=30, deadline=None)
@given(processes(7))
def test_immediate_predecessor_is_composable_and_not_coind(p):
    es = EventStructure(explore(p))
    for a, b in _forward_event_pairs(es):
        if a == b:
            continue
        assert es.immediate_pred(a, b) == (es.composable(a, b) and not es.coind(a, b))


@settings(max_examples=30, deadline=None)
@given(processes(7))
def test_composable_order_is_dependence(p):
    es = EventStructure(explore(p))
    for a, b in _forward_event_pairs(es):
        if a != b and es.composable(a, b):
            assert es.causal_lt(a, b) == dependent_labels(es.label(a), es.label(b))


@settings(max_examples=30, deadline=None)
@given(processes(7))
def test_events_of_state_match_keys(p):
    g = explore(p)
    es = EventStructure(g)
    for x in g.nodes:
        evs = es.ev_of(x)
        assert len(evs) == len(x.keys)
        assert {es.key(e) for e in evs} == set(x.keys)
        assert len(es.path_sets()[x]) == 1


@settings(max_examples=30, deadline=None)
@given(processes(7))
def test_key_independence(p):
    g = explore(p)
    es = EventStructure(g)
    # coinitial pairs: direct key independence is independence
    for x in g.nodes:
        ss = g.steps(x)
        for t in ss:
            for u in ss:
                if t != u:
                    assert directly_key_independent(g, t, u) == g.independent(t, u)
    # closed under key equivalence it is independence of events
    kc = event_key_equiv(g)
    pairs = key_independence_pairs(g)
    ts = list(g.transitions())
    rep = {}
    for t in ts:
        rep.setdefault(es.of(t), t)
    for e1, t in rep.items():
        for e2, u in rep.items():
            assert ((kc[t], kc[u]) in pairs) == es.coind(e1, e2)


def test_coinitial_independent_have_squares():
    g = explore(parse("a | b | 'a"))
    for x in g.nodes:
        ss = g.steps(x)
        for t in ss:
            for u in ss:
                if t != u and g.independent(t, u):
                    assert completions(g, t, u)
                    assert t.key != u.key


# parabolic normal form


def _check_parabolic(g, es, r):
    s, s2 = parabolic_normalize(r, g)
    assert s.forward_only() and s2.forward_only()
    assert len(s) + len(s2) <= len(r)
    out = list(s.reverse()) + list(s2)
    if out:
        assert out[0].source == r.source and out[-1].target == r.target
    elif len(r):
        assert r.source == r.target
    seen = {es.of(t) for t in r}
    assert all(es.of(t) in seen for t in out)


@settings(max_examples=30, deadline=None)
@given(processes(7))
def test_parabolic(p):
    g = explore(p)
    es = EventStructure(g)
    rng = random.Random(str(p))
    for _ in range(10):
        _check_parabolic(g, es, random_walk(rng, g, 12))


def test_parabolic_cancels():
    g = explore(parse("a.b"))
    t1, t2 = g.edges
    s, s2 = parabolic_normalize(Path([t1, t2, t2.reverse(), t1.reverse(), t1]), g)
    assert list(s) == [] and list(s2) == [t1]


def test_parabolic_needs_square():
    edges = [Transition("P", "Q", "x"), Transition("R", "Q", "y")]
    g = LtsiGraph("P", ["P", "Q", "R"], edges, independent=lambda t, u: True)
    with pytest.raises(StepError):
        parabolic_normalize(Path([edges[0], edges[1].reverse()]), g)


def test_rooted_paths_budget():
    g = explore(random_process(random.Random(3), 8))
    assert sum(1 for _ in rooted_paths(g, 10, budget=50)) == 50
