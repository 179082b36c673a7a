"""Analysis of finite reversible LTSs with independence.

Works on any :class:`~ccskp.semantics.LtsiGraph`. The axiom checkers return
``None`` when the axiom holds and a counterexample tuple otherwise.
"""
from __future__ import annotations

from collections import defaultdict
from itertools import combinations

from .semantics import LtsiGraph, Path, StepError, Transition
from .syntax import Process, key_of


class UnionFind:
    def __init__(self):
        self.parent = {}
        self.rank = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


# ----------------------------------------------------------------- squares


class _Index:
    def __init__(self, g: LtsiGraph):
        self.g = g
        self.by = {}

    def lookup(self, node, label, forward):
        d = self.by.get(node)
        if d is None:
            d = defaultdict(list)
            for t in self.g.steps(node):
                d[(t.label, t.forward)].append(t)
            self.by[node] = d
        return d.get((label, forward), ())


def completions(g, t, u, index=None):
    """Pairs ``(u2, t2)`` closing the square spanned by coinitial ``t``, ``u``:
    ``u2`` leaves ``t.target`` like ``u``, ``t2`` leaves ``u.target`` like ``t``
    and both end in the same state."""
    ix = index or _Index(g)
    out = []
    for u2 in ix.lookup(t.target, u.label, u.forward):
        for t2 in ix.lookup(u.target, t.label, t.forward):
            if t2.target == u2.target:
                out.append((u2, t2))
    return out


def squares(g, index=None):
    ix = index or _Index(g)
    for p in g.nodes:
        ss = g.steps(p)
        for t in ss:
            for u in ss:
                if t != u:
                    for u2, t2 in completions(g, t, u, ix):
                        yield t, u, u2, t2


# ------------------------------------------------------------------ axioms


def check_sp(g, index=None):
    ix = index or _Index(g)
    for p in g.nodes:
        ss = g.steps(p)
        for t, u in combinations(ss, 2):
            if g.independent(t, u) and not completions(g, t, u, ix):
                return (t, u)
    return None


def check_bti(g, index=None):
    for p in g.nodes:
        back = [t for t in g.steps(p) if not t.forward]
        for t, u in combinations(back, 2):
            if not g.independent(t, u):
                return (t, u)
    return None


def check_wf(g, index=None):
    indeg = {n: 0 for n in g.nodes}
    for t in g.edges:
        indeg[t.target] += 1
        s, d = t.source, t.target
        if isinstance(s, Process) and len(d.keys) != len(s.keys) + 1:
            return (t,)
    queue = [n for n, d in indeg.items() if d == 0]
    done = 0
    while queue:
        n = queue.pop()
        done += 1
        for t in g.out_fwd[n]:
            indeg[t.target] -= 1
            if indeg[t.target] == 0:
                queue.append(t.target)
    if done != len(g.nodes):
        return tuple(n for n, d in indeg.items() if d > 0)
    return None


def check_pci(g, index=None):
    ix = index or _Index(g)
    for t, u, u2, t2 in squares(g, ix):
        if g.independent(t, u) and not g.independent(u2, t.reverse()):
            return (t, u, u2, t2)
    return None


def check_id(g, index=None):
    ix = index or _Index(g)
    for t, u, u2, t2 in squares(g, ix):
        if t.forward == u.forward:
            need = t.target != u.target
        else:
            need = t.source != u2.target
        if need and not g.independent(t, u):
            return (t, u, u2, t2)
    return None


def check_ire(g, index=None, events=None):
    ev = events or EventStructure(g)
    if g.by_label:
        for members in ev.members.values():
            labels = {t.label for t in members}
            if len(labels) > 1:
                return tuple(members)[:2]
        for pair in g.flips:
            x, y = tuple(pair) if len(pair) == 2 else (next(iter(pair)),) * 2
            for a, b in ((x, y), (y, x)):
                for t in ev.members[ev.of(a)]:
                    if g.independent(a, b) != g.independent(t, b):
                        return (t, a, b)
        return None
    ts = list(g.transitions())
    for members in ev.members.values():
        ms = list(members)
        for u in ts:
            vals = {g.independent(t, u) for t in ms}
            if len(vals) > 1:
                return (ms[0], u)
    return None


def check_rpi(g, index=None):
    if g.by_label:
        cands = []
        for pair in g.flips:
            x, y = tuple(pair) if len(pair) == 2 else (next(iter(pair)),) * 2
            cands += [(x, y), (y, x), (x.reverse(), y), (y.reverse(), x)]
    else:
        ts = list(g.transitions())
        cands = [(t, u) for t in ts for u in ts]
    for t, u in cands:
        if g.independent(t, u) and not g.independent(t.reverse(), u):
            return (t, u)
    return None


AXIOMS = {
    "SP": check_sp, "BTI": check_bti, "WF": check_wf, "PCI": check_pci,
    "ID": check_id, "IRE": check_ire, "RPI": check_rpi,
}


def check_axioms(g, names=None) -> dict:
    """Run the named axiom checkers (all by default)."""
    ix = _Index(g)
    out = {}
    for name in names or AXIOMS:
        out[name] = AXIOMS[name](g, ix)
    return out


def flip_mutants(g, rng, count):
    """Graphs whose independence is inverted on one random pair of
    coinitial transitions each."""
    pairs = []
    for p in g.nodes:
        pairs += list(combinations(g.steps(p), 2))
    rng.shuffle(pairs)
    return [(pr, g.with_flips([pr])) for pr in pairs[:count]]


# ------------------------------------------------------------------ events


class EventStructure:
    """Events of a graph: transitions identified across commuting squares,
    together with the orders and relations built on them."""

    def __init__(self, g: LtsiGraph):
        self.g = g
        ix = _Index(g)
        uf = UnionFind()
        ts = list(g.transitions())
        for t in ts:
            uf.add(t)
        for p in g.nodes:
            ss = g.steps(p)
            for t in ss:
                for u in ss:
                    if t != u and g.independent(t, u):
                        for u2, t2 in completions(g, t, u, ix):
                            uf.union(t, t2)
                            uf.union(t.reverse(), t2.reverse())
        self._id = {}
        roots = {}
        self.members = defaultdict(list)
        for t in ts:
            r = uf.find(t)
            i = roots.setdefault(r, len(roots))
            self._id[t] = i
            self.members[i].append(t)
        self.forward = {i: ms[0].forward for i, ms in self.members.items()}
        self.rev = {i: self._id[ms[0].reverse()] for i, ms in self.members.items()}
        self._paths = None
        self._coind = None

    def of(self, t: Transition) -> int:
        return self._id[t]

    def reverse(self, e: int) -> int:
        return self.rev[e]

    def partition(self) -> dict:
        return dict(self._id)

    def forward_events(self):
        return [e for e, f in self.forward.items() if f]

    def key(self, e):
        return key_of(self.members[e][0].label)

    def label(self, e):
        return self.members[e][0].label

    def count(self, path, e) -> int:
        """Occurrences of ``e`` minus occurrences of its reverse."""
        n = 0
        re = self.rev[e]
        for t in path:
            c = self._id[t]
            if c == e:
                n += 1
            elif c == re:
                n -= 1
        return n

    # forward-only rooted paths, summarised per state
    def path_sets(self) -> dict:
        """For every state, the event sets of forward-only rooted paths to it."""
        if self._paths is None:
            g = self.g
            indeg = {n: 0 for n in g.nodes}
            for t in g.edges:
                indeg[t.target] += 1
            sets = {n: set() for n in g.nodes}
            queue = [n for n in g.nodes if indeg[n] == 0]
            for n in queue:
                sets[n].add(frozenset())
            while queue:
                n = queue.pop()
                for t in g.out_fwd[n]:
                    e = self._id[t]
                    tgt = sets[t.target]
                    for s in sets[n]:
                        tgt.add(s | {e})
                    indeg[t.target] -= 1
                    if indeg[t.target] == 0:
                        queue.append(t.target)
            self._paths = sets
            must = {}
            co = set()
            for ss in sets.values():
                for s in ss:
                    for e in s:
                        must[e] = must[e] & s if e in must else s
                    for a in s:
                        for b in s:
                            co.add((a, b))
            self._must = must
            self._co = co
        return self._paths

    def causal_leq(self, e1, e2) -> bool:
        if e1 == e2:
            return True
        self.path_sets()
        return e2 in self._must and e1 in self._must[e2]

    def causal_lt(self, e1, e2) -> bool:
        return e1 != e2 and self.causal_leq(e1, e2)

    def conflict(self, e1, e2) -> bool:
        self.path_sets()
        return (e1, e2) not in self._co

    def coind(self, e1, e2) -> bool:
        if self._coind is None:
            c = set()
            for p in self.g.nodes:
                ss = self.g.steps(p)
                for t in ss:
                    for u in ss:
                        if t != u and self.g.independent(t, u):
                            c.add((self._id[t], self._id[u]))
            self._coind = c
        return (e1, e2) in self._coind

    def polychotomy(self, e1, e2) -> list:
        """Which of equal, before, after, conflict and coind hold."""
        rels = []
        if e1 == e2:
            rels.append("equal")
        if self.causal_lt(e1, e2):
            rels.append("before")
        if self.causal_lt(e2, e1):
            rels.append("after")
        if self.conflict(e1, e2):
            rels.append("conflict")
        if self.coind(e1, e2):
            rels.append("coind")
        return rels

    def immediate_pred(self, e1, e2) -> bool:
        if not self.causal_lt(e1, e2):
            return False
        return not any(self.causal_lt(e1, e) and self.causal_lt(e, e2)
                       for e in self.forward_events())

    def composable(self, e1, e2) -> bool:
        srcs = {t.source for t in self.members[e2]}
        return any(t.target in srcs for t in self.members[e1])

    def ev_of(self, x) -> frozenset:
        """Events performed on the way from the root to ``x``."""
        ss = self.path_sets()[x]
        return frozenset().union(*ss) if ss else frozenset()

    def event_of_key(self, x, k) -> int:
        for e in self.ev_of(x):
            if self.key(e) == k:
                return e
        raise KeyError(k)


def events_diamond(g) -> dict:
    """Map every transition to its event, closing over commuting squares."""
    es = EventStructure(g)
    return es.partition()


def event_key_equiv(g) -> dict:
    """Map every transition to ``(key, direction, component)``: two
    same-direction transitions with the same key are related when their
    forward targets are joined by a path that never uses that key."""
    keys = {t.key for t in g.edges}
    comp = {}
    for k in keys:
        uf = UnionFind()
        for n in g.nodes:
            uf.add(n)
        for t in g.edges:
            if t.key != k:
                uf.union(t.source, t.target)
        comp[k] = uf
    out = {}
    for t in g.transitions():
        f = t.fwd()
        out[t] = (f.key, t.forward, comp[f.key].find(f.target))
    return out


def same_partition(m1: dict, m2: dict) -> bool:
    if m1.keys() != m2.keys():
        return False
    pairs = {(m1[t], m2[t]) for t in m1}
    return len(pairs) == len(set(m1.values())) == len(set(m2.values()))


# --------------------------------------------------------- key independence


def directly_key_independent(g, t, u, index=None) -> bool:
    return (t.source == u.source and t != u and t.key != u.key
            and bool(completions(g, t, u, index)))


def key_independence_pairs(g) -> set:
    """Pairs of key-equivalence classes with coinitial members that are
    directly key independent."""
    kc = event_key_equiv(g)
    ix = _Index(g)
    out = set()
    for p in g.nodes:
        ss = g.steps(p)
        for t in ss:
            for u in ss:
                if directly_key_independent(g, t, u, ix):
                    out.add((kc[t], kc[u]))
    return out


# ----------------------------------------------------------------- paths


def rooted_paths(g, max_forward, budget=None):
    """Enumerate rooted paths (from the root) using at most ``max_forward``
    forward steps, depth first. Stops after ``budget`` paths if given."""
    count = 0
    stack = [(g.root, (), 0)]
    while stack:
        n, path, f = stack.pop()
        yield Path(path) if path else Path()
        count += 1
        if budget is not None and count >= budget:
            return
        for t in g.steps(n):
            if t.forward and f >= max_forward:
                continue
            stack.append((t.target, path + (t,), f + t.forward))


def parabolic_normalize(path, g, index=None):
    """Rewrite ``path`` into ``(s, s2)``, both forward only, with
    ``reverse(s) + s2`` causally equivalent to ``path``."""
    ix = index or _Index(g)
    seq = list(path)
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            t, ub = seq[i], seq[i + 1]
            if not (t.forward and not ub.forward):
                continue
            if ub == t.reverse():
                del seq[i:i + 2]
            else:
                seq[i:i + 2] = _swap(g, t, ub, ix)
            changed = True
            break
    j = 0
    while j < len(seq) and not seq[j].forward:
        j += 1
    return Path(seq[:j]).reverse(), Path(seq[j:])


def _swap(g, t, ub, ix):
    p, r = t.source, ub.target
    for u2 in ix.lookup(p, ub.label, False):
        for t2 in ix.lookup(u2.target, t.label, True):
            if t2.target == r:
                return [u2, t2]
    raise StepError(f"no square to commute {t.label} with {ub.label}")
