import random

from hypothesis import given, settings

from ccskp.generate import random_process
from ccskp.relations import (
    CONNECTED_DEPENDENT, CONNECTED_INDEPENDENT, NOT_CONNECTED, ccsp_steps, classify,
    connected_labels, connected_transitions, dependent_labels, forget_label, independent_labels,
    prune, realise, remove_key, smile, trans_relation,
)
from ccskp.semantics import backward_steps, explore, forward_steps
from ccskp.syntax import Sum, is_standard, origin, parse, parse_label, prefixes, strip_keys, with_key
from strategies import labels, reachable

L = parse_label


def test_worked_relations():
    assert connected_labels(L("|R +L 'a[1]"), L("<a[1], +L 'a[1]>"))
    assert dependent_labels(L("|R +L 'a[1]"), L("|R +R b[2]"))
    assert independent_labels(L("|L a[0]"), L("|R +R b[2]"))
    assert classify(L("+L a[0]"), L("|R b[1]")) == NOT_CONNECTED
    assert connected_labels(L("a[0]"), L("|R b[1]"))
    assert classify(L("|L a[0]"), L("|R +R b[1]")) == CONNECTED_INDEPENDENT
    assert classify(L("|L a[0]"), L("|R b[0]")) == CONNECTED_DEPENDENT


def test_rule_cases():
    # prefixes depend on everything they are connected to
    assert dependent_labels(L("a[0]"), L("+L b[1]"))
    assert dependent_labels(L("|L b[1]"), L("a[0]"))
    # choices in opposite branches conflict
    assert dependent_labels(L("+L a[0]"), L("+R b[1]"))
    assert not independent_labels(L("+L a[0]"), L("+R b[1]"))
    # a component of a synchronisation
    assert independent_labels(L("|L +L |L a[0]"), L("<+L |R 'b[3], b[3]>"))
    assert dependent_labels(L("|L +L a[0]"), L("<+R 'b[3], b[3]>"))
    assert dependent_labels(L("|L a[0]"), L("<a[3], 'a[3]>"))
    # two synchronisations
    assert independent_labels(L("<|L a[1], |L 'a[1]>"), L("<|R b[2], |R 'b[2]>"))
    assert dependent_labels(L("<|L a[1], |L 'a[1]>"), L("<|L b[2], |R 'b[2]>"))


@given(labels(), labels())
def test_complementarity(t1, t2):
    c, d, i = connected_labels(t1, t2), dependent_labels(t1, t2), independent_labels(t1, t2)
    if i or d:
        assert c
    if c:
        assert i != d


@given(labels(), labels())
def test_symmetry(t1, t2):
    assert connected_labels(t1, t2) == connected_labels(t2, t1)
    assert dependent_labels(t1, t2) == dependent_labels(t2, t1)
    assert independent_labels(t1, t2) == independent_labels(t2, t1)
    assert smile(strip_keys(t1), strip_keys(t2)) == smile(strip_keys(t2), strip_keys(t1))


@given(labels())
def test_reflexive_cases(t):
    assert connected_labels(t, t)
    assert not independent_labels(t, t)


@given(labels(), labels())
def test_independence_needs_different_keys(t1, t2):
    if independent_labels(t1, t2):
        assert t1.key != t2.key


@settings(max_examples=200)
@given(labels(keyless=True), labels(keyless=True))
def test_smile_matches_independence_with_distinct_keys(t1, t2):
    assert smile(t1, t2) == independent_labels(with_key(t1, 0), with_key(t2, 1))


def test_transitions_connected_by_origin():
    g = explore(parse("a | ('a + b)"))
    ts = list(g.transitions())
    for t in ts:
        for u in ts:
            assert connected_transitions(t, u)
            assert connected_labels(t.label, u.label)
            assert trans_relation(t, u) == classify(t.label, u.label)
    other = explore(parse("a + b")).edges[0]
    assert trans_relation(ts[0], other) == NOT_CONNECTED


def _reachable_keyless_labels(p):
    g = explore(p)
    return {strip_keys(t.label) for t in g.edges}


@settings(max_examples=200)
@given(labels(), labels())
def test_realisation(t1, t2):
    x = realise(t1, t2)
    if not connected_labels(t1, t2):
        assert x is None
        return
    assert is_standard(x)
    found = _reachable_keyless_labels(x)
    assert strip_keys(t1) in found and strip_keys(t2) in found


# the non-reversible side


def test_ccsp_steps():
    steps = {str(th): str(q) for th, q in ccsp_steps(parse("a + b"))}
    assert steps == {"+L a": "0", "+R b": "0"}
    assert ccsp_steps(parse("0")) == []
    assert {str(th) for th, _ in ccsp_steps(parse("(a | 'a)\\a"))} == {"<a, 'a>"}


def test_prune():
    assert prune(parse("a[0].b + c")) == parse("b")
    assert prune(parse("a.b + c")) == parse("a.b + c")
    assert prune(parse("(a[1] | 'a[1].c)\\a")) == parse("(0 | c)\\a")


@settings(max_examples=80)
@given(reachable())
def test_key_forgetting_projection(p):
    for t in forward_steps(p):
        lab = forget_label(p, t.label)
        assert (lab, prune(t.target)) in ccsp_steps(prune(p))


@settings(max_examples=80)
@given(reachable())
def test_independence_projects_to_smile(p):
    ts = forward_steps(p) + backward_steps(p)
    for t in ts:
        for u in ts:
            if independent_labels(t.label, u.label):
                assert smile(strip_keys(t.label), strip_keys(u.label))


@settings(max_examples=80)
@given(reachable())
def test_remove_key_preserves_steps(p):
    for _, _, q in prefixes(p):
        if q.key is None:
            continue
        a, k = q.label, q.key
        r = remove_key(p, a, k)
        fresh = max(p.keys) + 1
        for t in forward_steps(p, fresh):
            assert any(u.label == t.label and u.target == remove_key(t.target, a, k)
                       for u in forward_steps(r, fresh))
        if not _reopens(p, k):
            for u in forward_steps(r, fresh):
                assert any(t.label == u.label and remove_key(t.target, a, k) == u.target
                           for t in forward_steps(p, fresh))


def _reopens(p, k):
    """Some sum branch is keyed by ``k`` alone, so removal makes it standard."""
    if isinstance(p, Sum) and {k} in (p.left.keys, p.right.keys):
        return True
    return any(_reopens(c, k) for c in p.children())


def test_remove_key_reopens_sum():
    # removing the only executed prefix of a branch re-enables the other one
    x = parse("a[0] + c")
    r = remove_key(x, "a", 0)
    assert [str(t.label) for t in forward_steps(r)] == ["+R c[0]"]
    assert forward_steps(x) == []


def test_origin_of_random_terms_is_stable():
    rng = random.Random(7)
    for _ in range(20):
        p = random_process(rng, 6)
        assert origin(p) == p
