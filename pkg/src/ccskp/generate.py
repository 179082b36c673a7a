"""Seeded random processes, proof labels and paths."""
from __future__ import annotations

import random

from .semantics import Path
from .syntax import NIL, TAU, Par, Prefix, Restrict, Simple, Sum, Sync, complement


def random_action(rng, names="abc", tau=0.05):
    if rng.random() < tau:
        return TAU
    a = rng.choice(names)
    return complement(a) if rng.random() < 0.4 else a


def random_process(rng: random.Random, max_prefixes=8, names="abc", p_par=0.35,
                   p_sum=0.3, p_res=0.08):
    """A standard process with between one and ``max_prefixes`` prefixes."""
    return _gen(rng, rng.randint(1, max_prefixes), names, p_par, p_sum, p_res)


def _gen(rng, n, names, p_par, p_sum, p_res):
    if n == 0:
        return NIL
    if n == 1:
        p = Prefix(random_action(rng, names))
    else:
        r = rng.random()
        if r < p_par or r < p_par + p_sum:
            k = rng.randint(1, n - 1) if rng.random() < 0.85 else rng.choice((0, n))
            left = _gen(rng, k, names, p_par, p_sum, p_res)
            right = _gen(rng, n - k, names, p_par, p_sum, p_res)
            p = Par(left, right) if r < p_par else Sum(left, right)
        else:
            p = Prefix(random_action(rng, names), _gen(rng, n - 1, names, p_par, p_sum, p_res))
    if rng.random() < p_res:
        p = Restrict(p, rng.choice(names))
    return p


def variant(rng, p):
    """A process built from ``p`` by a random rewrite; some rewrites keep the
    behaviour, others change it."""
    choice = rng.randrange(7)
    if choice == 0:
        return p
    if choice == 1:
        return _commute(rng, p)
    if choice == 2:
        return Sum(p, p) if p.size <= 4 else Sum(p, NIL)
    if choice == 3:
        return _relabel(rng, p)
    if choice == 4:
        return _flatten(p)
    if choice == 5:
        return Par(p, NIL)
    return random_process(rng, max(1, p.size))


def _commute(rng, p):
    if isinstance(p, (Par, Sum)):
        l, r = _commute(rng, p.left), _commute(rng, p.right)
        return type(p)(r, l) if rng.random() < 0.5 else type(p)(l, r)
    if isinstance(p, Prefix):
        return Prefix(p.label, _commute(rng, p.cont), p.key)
    if isinstance(p, Restrict):
        return Restrict(_commute(rng, p.body), p.name)
    return p


def _relabel(rng, p):
    pre = [q for q in _subterms(p) if isinstance(q, Prefix)]
    if not pre:
        return p
    target = rng.choice(pre)
    return _replace(p, target, Prefix(random_action(rng), target.cont, target.key))


def _flatten(p):
    """Turn the first parallel into its interleaving when both sides are
    single prefixes."""
    if isinstance(p, Par) and isinstance(p.left, Prefix) and isinstance(p.right, Prefix) \
            and p.left.cont is NIL and p.right.cont is NIL:
        a, b = p.left.label, p.right.label
        s = Sum(Prefix(a, Prefix(b)), Prefix(b, Prefix(a)))
        if b == complement(a) and a != TAU:
            s = Sum(s, Prefix(TAU))
        return s
    if isinstance(p, (Par, Sum)):
        return type(p)(_flatten(p.left), p.right)
    if isinstance(p, Prefix):
        return Prefix(p.label, _flatten(p.cont), p.key)
    if isinstance(p, Restrict):
        return Restrict(_flatten(p.body), p.name)
    return p


def _subterms(p):
    yield p
    for c in p.children():
        yield from _subterms(c)


def _replace(p, old, new):
    if p is old:
        return new
    if isinstance(p, Prefix):
        return Prefix(p.label, _replace(p.cont, old, new), p.key)
    if isinstance(p, Restrict):
        return Restrict(_replace(p.body, old, new), p.name)
    if isinstance(p, (Par, Sum)):
        return type(p)(_replace(p.left, old, new), _replace(p.right, old, new))
    return p


def random_label(rng, depth=3, key=None, names="ab"):
    """A well-formed proof label; ``key`` defaults to a random small key."""
    if key is None:
        key = rng.randrange(3)
    return _label(rng, depth, key, names)


def _label(rng, depth, key, names, allow_sync=True):
    r = rng.random()
    if depth == 0 or r < 0.25:
        return Simple((), random_action(rng, names), key)
    if allow_sync and r < 0.4:
        a = rng.choice(names)
        if rng.random() < 0.5:
            a = complement(a)
        left = _label(rng, depth - 1, key, names, False)
        right = _label(rng, depth - 1, key, names, False)
        left = Simple(left.path, a, key)
        right = Simple(right.path, complement(a), key)
        return Sync((), left, right)
    op = rng.choice(("|L", "|R", "+L", "+R"))
    inner = _label(rng, depth - 1, key, names, allow_sync)
    if isinstance(inner, Simple):
        return Simple((op,) + inner.path, inner.action, key)
    return Sync((op,) + inner.path, inner.left, inner.right)


def random_walk(rng, g, length):
    """A rooted path of at most ``length`` steps taken uniformly at random."""
    node = g.root
    out = []
    for _ in range(length):
        ss = g.steps(node)
        if not ss:
            break
        t = rng.choice(ss)
        out.append(t)
        node = t.target
    return Path(out)
