"""Forward and backward steps, explored state graphs, and the translation
between proof-labelled and plainly labelled transitions.

Forward steps need a fresh key. Three policies are offered:

* ``"positional"`` (default): the key is the pre-order index of the acting
  prefix, or ``n + i*n + j`` for a synchronisation of prefixes ``i`` and ``j``
  in a term with ``n`` prefixes. Any order of the same steps then yields the
  same keys, so explored graphs are closed under commuting squares.
* ``"min"``: the smallest natural not already used.
* an ``int``: that exact key (it must be fresh).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from . import relations
from .syntax import (
    TAU, Nil, Par, Prefix, ProofLabel, Restrict, Simple, Sum, Sync,
    complement, ell, is_standard, key_of, name_of, origin, prefixes, rename_keys, wrap,
)


class StepError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    source: object
    target: object
    label: object
    forward: bool = True

    def reverse(self) -> "Transition":
        return Transition(self.target, self.source, self.label, not self.forward)

    @property
    def key(self):
        return key_of(self.label)

    @property
    def action(self):
        return ell(self.label)

    def fwd(self) -> "Transition":
        return self if self.forward else self.reverse()

    def __str__(self):
        arrow = "->" if self.forward else "~>"
        return f"{self.source} {arrow}[{self.label}] {self.target}"


class Path(tuple):
    """A composable sequence of transitions."""

    def __new__(cls, steps: Iterable[Transition] = ()):
        steps = tuple(steps)
        for a, b in zip(steps, steps[1:]):
            if a.target != b.source:
                raise StepError("transitions are not composable")
        return super().__new__(cls, steps)

    @property
    def source(self):
        return self[0].source

    @property
    def target(self):
        return self[-1].target

    def reverse(self) -> "Path":
        return Path(t.reverse() for t in reversed(self))

    def forward_only(self) -> bool:
        return all(t.forward for t in self)

    def backward_only(self) -> bool:
        return not any(t.forward for t in self)


# ------------------------------------------------------------ step rules


class _Open:
    """A forward step whose key is not chosen yet."""

    __slots__ = ("positions", "action", "simple", "build")

    def __init__(self, positions, action, simple, build):
        self.positions = positions
        self.action = action
        self.simple = simple
        self.build = build


def _fwd(p, off):
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        if p.key is None:
            if p.cont.keys:
                return []
            a, c = p.label, p.cont
            return [_Open((off,), a, True, lambda k: (Simple((), a, k), Prefix(a, c, k)))]
        out = []
        kp, a = p.key, p.label
        for s in _fwd(p.cont, off + 1):
            out.append(_Open(s.positions, s.action, s.simple, _guard_pre(s.build, a, kp)))
        return out
    if isinstance(p, Restrict):
        n = p.name
        out = []
        for s in _fwd(p.body, off):
            if s.action not in (n, complement(n)):
                out.append(_Open(s.positions, s.action, s.simple, _lift_res(s.build, n)))
        return out
    left, right = p.left, p.right
    ls, rs = _fwd(left, off), _fwd(right, off + left.size)
    if isinstance(p, Sum):
        out = []
        if not right.keys:
            out += [_Open(s.positions, s.action, s.simple, _lift_sum(s.build, "+L", right, True)) for s in ls]
        if not left.keys:
            out += [_Open(s.positions, s.action, s.simple, _lift_sum(s.build, "+R", left, False)) for s in rs]
        return out
    out = [_Open(s.positions, s.action, s.simple, _lift_par(s.build, "|L", right, True)) for s in ls]
    out += [_Open(s.positions, s.action, s.simple, _lift_par(s.build, "|R", left, False)) for s in rs]
    for sl in ls:
        if not sl.simple or sl.action == TAU:
            continue
        for sr in rs:
            if sr.simple and sr.action == complement(sl.action):
                out.append(_Open(sl.positions + sr.positions, TAU, False, _syn(sl.build, sr.build)))
    return out


def _guard_pre(build, a, kp):
    def b(k):
        if k == kp:
            return None
        r = build(k)
        return None if r is None else (r[0], Prefix(a, r[1], kp))
    return b


def _lift_res(build, n):
    def b(k):
        r = build(k)
        return None if r is None else (r[0], Restrict(r[1], n))
    return b


def _lift_sum(build, op, other, left):
    def b(k):
        r = build(k)
        if r is None:
            return None
        return wrap(op, r[0]), (Sum(r[1], other) if left else Sum(other, r[1]))
    return b


def _lift_par(build, op, other, left):
    def b(k):
        if k in other.keys:
            return None
        r = build(k)
        if r is None:
            return None
        return wrap(op, r[0]), (Par(r[1], other) if left else Par(other, r[1]))
    return b


def _syn(bl, br):
    def b(k):
        rl, rr = bl(k), br(k)
        if rl is None or rr is None:
            return None
        return Sync((), rl[0], rr[0]), Par(rl[1], rr[1])
    return b


def positional_key(n: int, positions: tuple) -> int:
    if len(positions) == 1:
        return positions[0]
    i, j = positions
    return n + i * n + j


def min_fresh(p) -> int:
    k = 0
    while k in p.keys:
        k += 1
    return k


def forward_steps(p, keys="positional") -> list:
    """All forward transitions of ``p`` under the given key policy."""
    out = []
    if keys == "min":
        fixed = min_fresh(p)
    elif isinstance(keys, int) and not isinstance(keys, bool):
        if keys < 0:
            raise StepError("keys are naturals")
        if keys in p.keys:
            raise StepError(f"key {keys} is not fresh")
        fixed = keys
    elif keys == "positional":
        fixed = None
        n = p.size
    else:
        raise StepError(f"unknown key policy {keys!r}")
    for s in _fwd(p, 0):
        k = positional_key(n, s.positions) if fixed is None else fixed
        r = s.build(k)
        if r is not None:
            out.append(Transition(p, r[1], r[0], True))
    return out


def _bwd(p):
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        if p.key is None:
            return []
        a, k = p.label, p.key
        if not p.cont.keys:
            return [(Simple((), a, k), Prefix(a, p.cont))]
        return [(th, Prefix(a, q, k)) for th, q in _bwd(p.cont) if key_of(th) != k]
    if isinstance(p, Restrict):
        n = p.name
        return [(th, Restrict(q, n)) for th, q in _bwd(p.body)
                if ell(th) not in (n, complement(n))]
    left, right = p.left, p.right
    ls, rs = _bwd(left), _bwd(right)
    if isinstance(p, Sum):
        out = []
        if not right.keys:
            out += [(wrap("+L", th), Sum(q, right)) for th, q in ls]
        if not left.keys:
            out += [(wrap("+R", th), Sum(left, q)) for th, q in rs]
        return out
    out = [(wrap("|L", th), Par(q, right)) for th, q in ls if key_of(th) not in right.keys]
    out += [(wrap("|R", th), Par(left, q)) for th, q in rs if key_of(th) not in left.keys]
    for tl, ql in ls:
        if not isinstance(tl, Simple) or tl.action == TAU:
            continue
        for tr, qr in rs:
            if (isinstance(tr, Simple) and tr.key == tl.key
                    and tr.action == complement(tl.action)):
                out.append((Sync((), tl, tr), Par(ql, qr)))
    return out


def backward_steps(p) -> list:
    return [Transition(p, q, th, False) for th, q in _bwd(p)]


def steps(p, keys="positional") -> list:
    return forward_steps(p, keys) + backward_steps(p)


# --------------------------------------------------- reachability, keys


def is_reachable(p) -> bool:
    """Whether undoing steps can bring ``p`` back to a standard process."""
    seen = set()
    stack = [p]
    while stack:
        q = stack.pop()
        if is_standard(q):
            return True
        if q in seen:
            continue
        seen.add(q)
        stack.extend(t.target for t in backward_steps(q))
    return False


def positional_renaming(p) -> dict:
    """The key renaming sending ``p`` to the keys positional stepping would
    have produced."""
    n = p.size
    occ = {}
    for pos, _, q in prefixes(p):
        if q.key is not None:
            occ.setdefault(q.key, []).append(pos)
    return {k: positional_key(n, tuple(v)) for k, v in occ.items()}


def normalise_keys(p):
    return rename_keys(p, positional_renaming(p))


# ----------------------------------------------------------------- graphs


class LtsiGraph:
    """A finite reversible LTS with an independence relation.

    ``edges`` are the forward transitions; backward transitions are their
    reverses. ``independent`` decides independence of two transitions; by
    default it compares proof labels. ``flips`` is a set of unordered pairs
    whose independence is inverted.
    """

    def __init__(self, root, nodes, edges, independent: Optional[Callable] = None,
                 flips=frozenset(), by_label=None):
        self.root = root
        self.nodes = list(nodes)
        self.edges = list(edges)
        self._indep = independent or (lambda t, u: relations.independent_labels(t.label, u.label))
        self.by_label = (independent is None) if by_label is None else by_label
        self.flips = frozenset(frozenset(f) for f in flips)
        self.index = {n: i for i, n in enumerate(self.nodes)}
        canon = {n: n for n in self.nodes}
        self.edges = [t if t.source is canon[t.source] and t.target is canon[t.target]
                      else Transition(canon[t.source], canon[t.target], t.label, t.forward)
                      for t in self.edges]
        self.out_fwd = {n: [] for n in self.nodes}
        self.in_fwd = {n: [] for n in self.nodes}
        for t in self.edges:
            self.out_fwd[t.source].append(t)
            self.in_fwd[t.target].append(t)
        self._steps = {}

    def steps(self, node) -> list:
        s = self._steps.get(node)
        if s is None:
            s = self.out_fwd[node] + [t.reverse() for t in self.in_fwd[node]]
            self._steps[node] = s
        return s

    def transitions(self) -> Iterable[Transition]:
        for n in self.nodes:
            yield from self.steps(n)

    def independent(self, t, u) -> bool:
        r = self._indep(t, u)
        if self.flips and frozenset((t, u)) in self.flips:
            return not r
        return r

    def with_flips(self, pairs) -> "LtsiGraph":
        g = LtsiGraph(self.root, self.nodes, self.edges, self._indep,
                      self.flips ^ frozenset(frozenset(p) for p in pairs), self.by_label)
        return g

    def to_json(self) -> dict:
        ids = self.index
        return {
            "nodes": [{"id": i, "term": str(n)} for i, n in enumerate(self.nodes)],
            "edges": [{"src": ids[t.source], "dst": ids[t.target], "label": str(t.label),
                       "key": t.key, "kind": "sync" if isinstance(t.label, Sync) else "act"}
                      for t in self.edges],
        }

    def to_dot(self) -> str:
        ids = self.index
        lines = ["digraph ltsi {"]
        for i, n in enumerate(self.nodes):
            lines.append(f"  n{i} [label={json.dumps(str(n))}];")
        for t in self.edges:
            lines.append(f"  n{ids[t.source]} -> n{ids[t.target]} [label={json.dumps(str(t.label))}];")
        lines.append("}")
        return "\n".join(lines)


def explore(root, max_depth: Optional[int] = None, keys="positional") -> LtsiGraph:
    """Breadth-first forward exploration from the origin of ``root``.

    With the positional policy every node is reachable, every backward step
    of a node is the reverse of one of its incoming edges, and keys stay
    consistent across interleavings.
    """
    start = origin(root)
    nodes = [start]
    seen = {start: (0, 0)}
    edges = []
    queue = deque([start])
    while queue:
        p = queue.popleft()
        d = seen[p][0]
        if max_depth is not None and d >= max_depth:
            continue
        for t in forward_steps(p, keys):
            q = t.target
            if q in seen:
                t = Transition(p, nodes[seen[q][1]], t.label)
            else:
                seen[q] = (d + 1, len(nodes))
                nodes.append(q)
                queue.append(q)
            edges.append(t)
    return LtsiGraph(start, nodes, edges)


# -------------------------------------------------------- plain labels


@dataclass(frozen=True)
class PlainTransition:
    source: object
    target: object
    action: str
    key: int
    forward: bool = True


def erase(t: Transition) -> PlainTransition:
    return PlainTransition(t.source, t.target, ell(t.label), key_of(t.label), t.forward)


def enrich(source, action: str, key: int, forward: bool = True, target=None) -> Transition:
    """The proof-labelled transition behind a plainly labelled one."""
    if forward:
        cands = [t for t in forward_steps(source, key) if ell(t.label) == action]
    else:
        cands = [t for t in backward_steps(source) if ell(t.label) == action and t.key == key]
    if target is not None:
        cands = [t for t in cands if t.target == target]
    if len(cands) != 1:
        raise StepError(f"{len(cands)} transitions match {action}[{key}]")
    return cands[0]


def plain_forward_steps(p, k: int) -> list:
    """Forward steps with plain labels ``(action, key)``, derived directly
    from the plain rules rather than from proof labels."""
    return [PlainTransition(p, q, a, k, True) for a, q in _pf(p, k)]


def _pf(p, k):
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        if p.key is None:
            return [] if p.cont.keys else [(p.label, Prefix(p.label, p.cont, k))]
        if p.key == k:
            return []
        return [(a, Prefix(p.label, q, p.key)) for a, q in _pf(p.cont, k)]
    if isinstance(p, Restrict):
        return [(a, Restrict(q, p.name)) for a, q in _pf(p.body, k) if name_of(a) != p.name or a == TAU]
    l, r = p.left, p.right
    if isinstance(p, Sum):
        out = [(a, Sum(q, r)) for a, q in _pf(l, k)] if not r.keys else []
        return out + ([(a, Sum(l, q)) for a, q in _pf(r, k)] if not l.keys else [])
    ls, rs = _pf(l, k), _pf(r, k)
    out = [(a, Par(q, r)) for a, q in ls if k not in r.keys]
    out += [(a, Par(l, q)) for a, q in rs if k not in l.keys]
    out += [(TAU, Par(ql, qr)) for a, ql in ls for b, qr in rs if a != TAU and b == complement(a)]
    return out


def plain_backward_steps(p) -> list:
    return [PlainTransition(p, q, a, k, False) for a, k, q in _pb(p)]


def _pb(p):
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        if p.key is None:
            return []
        if not p.cont.keys:
            return [(p.label, p.key, Prefix(p.label, p.cont))]
        return [(a, k, Prefix(p.label, q, p.key)) for a, k, q in _pb(p.cont) if k != p.key]
    if isinstance(p, Restrict):
        return [(a, k, Restrict(q, p.name)) for a, k, q in _pb(p.body) if name_of(a) != p.name or a == TAU]
    l, r = p.left, p.right
    if isinstance(p, Sum):
        out = [(a, k, Sum(q, r)) for a, k, q in _pb(l)] if not r.keys else []
        return out + ([(a, k, Sum(l, q)) for a, k, q in _pb(r)] if not l.keys else [])
    ls, rs = _pb(l), _pb(r)
    out = [(a, k, Par(q, r)) for a, k, q in ls if k not in r.keys]
    out += [(a, k, Par(l, q)) for a, k, q in rs if k not in l.keys]
    out += [(TAU, k, Par(ql, qr)) for a, k, ql in ls for b, k2, qr in rs
            if k == k2 and a != TAU and b == complement(a)]
    return out
