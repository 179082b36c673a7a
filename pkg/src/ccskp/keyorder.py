"""The causal order read directly off the keys of a process."""
from __future__ import annotations

from functools import lru_cache

from .syntax import Nil, Prefix, Restrict


def ord_pairs(p) -> frozenset:
    """Generating pairs ``(n, k)``: the prefix keyed ``n`` guards key ``k``."""
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, Prefix):
        inner = ord_pairs(p.cont)
        if p.key is None:
            return inner
        return inner | {(p.key, k) for k in p.cont.keys}
    if isinstance(p, Restrict):
        return ord_pairs(p.body)
    return ord_pairs(p.left) | ord_pairs(p.right)


@lru_cache(maxsize=65536)
def leq_closure(p) -> frozenset:
    """Reflexive-transitive closure of :func:`ord_pairs` over ``keys(p)``."""
    succ = {k: set() for k in p.keys}
    for a, b in ord_pairs(p):
        succ[a].add(b)
    out = set()
    for k in p.keys:
        seen = {k}
        stack = [k]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out |= {(k, y) for y in seen}
    return frozenset(out)


def leq_keys(p, k1, k2) -> bool:
    if k1 not in p.keys or k2 not in p.keys:
        raise KeyError(k1 if k1 not in p.keys else k2)
    return (k1, k2) in leq_closure(p)


def maximal_keys(p) -> frozenset:
    cl = leq_closure(p)
    return frozenset(k for k in p.keys if not any(a == k and b != k for a, b in cl))


def maximal_events(p, es) -> frozenset:
    """Events of ``p`` (in the event structure ``es``) with no successor."""
    return frozenset(es.event_of_key(p, k) for k in maximal_keys(p))


def order_edges(p) -> list:
    """Covering pairs of the key order, for display."""
    cl = leq_closure(p)
    strict = {(a, b) for a, b in cl if a != b}
    return sorted((a, b) for a, b in strict
                  if not any((a, c) in strict and (c, b) in strict for c in p.keys))
