"""Bisimulation games between processes.

``kp`` and ``dp`` play forward-only games over triples ``(X, Y, f)`` where
``f`` pairs the keys of ``X`` with keys of ``Y`` (keys stand for events).
``fr`` plays forward and backward moves over pairs and requires equal keys.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from . import keyorder
from .relations import dependent_labels
from .semantics import backward_steps, forward_steps, is_reachable, normalise_keys, positional_renaming
from .syntax import Prefix, ell, event_label_of_key, is_standard, origin, rename_keys


class NotReachable(ValueError):
    pass


@dataclass
class Verdict:
    kind: str
    equivalent: bool
    witness: frozenset = frozenset()
    trace: list = field(default_factory=list)
    renaming: dict = field(default_factory=dict)

    def __bool__(self):
        return self.equivalent


def check_bijection(f: dict, x, y):
    """``(label_preserving, order_preserving)`` for a map from the keys of
    ``x`` to the keys of ``y``."""
    if set(f) != set(x.keys) or set(f.values()) != set(y.keys) or len(set(f.values())) != len(f):
        raise ValueError("not a bijection between the events")
    lab = all(ell(event_label_of_key(x, k)) == ell(event_label_of_key(y, f[k])) for k in f)
    cx, cy = keyorder.leq_closure(x), keyorder.leq_closure(y)
    order = all(((a, b) in cx) == ((f[a], f[b]) in cy) for a in f for b in f)
    return lab, order


# ---------------------------------------------------------- forward games


class ForwardGame:
    """The forward-only game for ``kind`` in ``{"kp", "dp"}``."""

    def __init__(self, kind="kp"):
        if kind not in ("kp", "dp"):
            raise ValueError(kind)
        self.kind = kind
        self.memo = {}
        self._steps = {}

    def steps(self, p):
        s = self._steps.get(p)
        if s is None:
            s = self._steps[p] = forward_steps(p)
        return s

    def extend(self, x, y, f, t, u, attacker_left=True):
        """The extended key map if ``u`` may answer ``t``, else ``None``."""
        if ell(t.label) != ell(u.label):
            return None
        tx, ty = (t, u) if attacker_left else (u, t)
        kx, ky = tx.key, ty.key
        if self.kind == "kp":
            cx, cy = keyorder.leq_closure(tx.target), keyorder.leq_closure(ty.target)
            for a, b in f:
                if ((a, kx) in cx) != ((b, ky) in cy) or ((kx, a) in cx) != ((ky, b) in cy):
                    return None
        else:
            fm = dict(f) if attacker_left else {b: a for a, b in f}
            src, oth = (x, y) if attacker_left else (y, x)
            for e in keyorder.maximal_keys(src):
                if (dependent_labels(event_label_of_key(src, e), t.label)
                        != dependent_labels(event_label_of_key(oth, fm[e]), u.label)):
                    return None
        return f | {(kx, ky)}

    def responses(self, state, left):
        """For each attack from one side, the admissible answers."""
        x, y, f = state
        out = []
        if left:
            for t in self.steps(x):
                rs = []
                for u in self.steps(y):
                    f2 = self.extend(x, y, f, t, u, True)
                    if f2 is not None:
                        rs.append(((t.target, u.target, f2), u))
                out.append((t, rs))
        else:
            for u in self.steps(y):
                rs = []
                for t in self.steps(x):
                    f2 = self.extend(x, y, f, u, t, False)
                    if f2 is not None:
                        rs.append(((t.target, u.target, f2), t))
                out.append((u, rs))
        return out

    def good(self, state) -> bool:
        r = self.memo.get(state)
        if r is not None:
            return r
        r = True
        for left in (True, False):
            x, y, f = state
            attackers = self.steps(x if left else y)
            for a in attackers:
                ok = False
                for b in self.steps(y if left else x):
                    f2 = self.extend(x, y, f, a, b, left)
                    if f2 is None:
                        continue
                    nxt = (a.target, b.target, f2) if left else (b.target, a.target, f2)
                    if self.good(nxt):
                        ok = True
                        break
                if not ok:
                    r = False
                    break
            if not r:
                break
        self.memo[state] = r
        return r

    def witness(self):
        return frozenset(s for s, v in self.memo.items() if v)

    def trace(self, state) -> list:
        """A distinguishing sequence from a losing triple: each entry is the
        attacking move and, when one exists, the answer that survives longest."""
        depth = {}

        def rounds(s):
            if s in depth:
                return depth[s]
            depth[s] = None
            best = None
            for left in (True, False):
                for a, rs in self.responses(s, left):
                    if any(self.good(n) for n, _ in rs):
                        continue
                    d = 1 + max((rounds(n) or 0 for n, _ in rs), default=0)
                    if best is None or d < best[0]:
                        best = (d, left, a, rs)
            depth[s] = best[0]
            moves[s] = best
            return best[0]

        moves = {}
        rounds(state)
        out = []
        s = state
        while s in moves:
            _, left, a, rs = moves[s]
            step = {"side": "left" if left else "right", "move": str(a.label)}
            if rs:
                n, b = max(rs, key=lambda nb: depth.get(nb[0]) or 0)
                step["answer"] = str(b.label)
                out.append(step)
                s = n
            else:
                out.append(step)
                break
        return out


def _forward_bisim(p, q, kind) -> Verdict:
    for r in (p, q):
        if not is_standard(r):
            raise ValueError("expected standard processes; use bisimilar_from_origin")
    game = ForwardGame(kind)
    root = (p, q, frozenset())
    ok = game.good(root)
    return Verdict(kind, ok, game.witness() if ok else frozenset(), [] if ok else game.trace(root))


def kp_bisimilar(p, q) -> Verdict:
    return _forward_bisim(p, q, "kp")


def dp_bisimilar(p, q) -> Verdict:
    return _forward_bisim(p, q, "dp")


def grounded_closure(p, q, kind="kp", good_only=False) -> set:
    """Triples reachable from ``(p, q, {})`` by answered moves. With
    ``good_only`` both the path and the triples stay inside the winning
    region of the defender."""
    game = ForwardGame(kind)
    root = (p, q, frozenset())
    if good_only and not game.good(root):
        return set()
    seen = {root}
    queue = deque([root])
    while queue:
        s = queue.popleft()
        for left in (True, False):
            for _, rs in game.responses(s, left):
                for n, _ in rs:
                    if n not in seen and (not good_only or game.good(n)):
                        seen.add(n)
                        queue.append(n)
    return seen


def bisimilar_from_origin(x, y, kind="kp") -> Verdict:
    """Decide ``x`` and ``y`` (possibly non-standard) by replaying the game
    from their origins and looking for a winning triple on ``(x, y)``."""
    for r in (x, y):
        if not is_reachable(r):
            raise NotReachable(str(r))
    rx, ry = positional_renaming(x), positional_renaming(y)
    nx, ny = rename_keys(x, rx), rename_keys(y, ry)
    p, q = origin(x), origin(y)
    game = ForwardGame(kind)
    if not game.good((p, q, frozenset())):
        return Verdict(kind, False, frozenset(), game.trace((p, q, frozenset())))
    for s in grounded_closure(p, q, kind, good_only=True):
        if s[0] == nx and s[1] == ny:
            ix = {v: k for k, v in rx.items()}
            iy = {v: k for k, v in ry.items()}
            f = {ix[a]: iy[b] for a, b in s[2]}
            return Verdict(kind, True, game.witness(), [], f)
    return Verdict(kind, False, frozenset(), [{"side": "left", "move": "not reachable as a winning triple"}])


# ------------------------------------------------------------- FR game


def _key_order(p, out):
    """Keys of ``p`` in pre-order of first occurrence, appended to ``out``."""
    if not p.keys:
        return
    if isinstance(p, Prefix):
        if p.key is not None and p.key not in out:
            out.append(p.key)
        _key_order(p.cont, out)
    else:
        for c in p.children():
            _key_order(c, out)


class _FrArena:
    """Interned processes and memoised steps for one FR computation."""

    def __init__(self):
        self.pool = {}
        self.fwd = {}
        self.bwd = {}

    def intern(self, p):
        return self.pool.setdefault(p, p)

    def canon(self, x, y):
        order = []
        _key_order(x, order)
        _key_order(y, order)
        m = {k: i for i, k in enumerate(order)}
        return self.intern(rename_keys(x, m)), self.intern(rename_keys(y, m))

    def forward(self, p, k):
        r = self.fwd.get((p, k))
        if r is None:
            r = self.fwd[(p, k)] = forward_steps(p, k)
        return r

    def backward(self, p):
        r = self.bwd.get(p)
        if r is None:
            r = self.bwd[p] = backward_steps(p)
        return r

    def attacks(self, x, y):
        """Moves of both players with their equal-key answers."""
        out = []
        for a, b, left in ((x, y, True), (y, x, False)):
            fresh = set(b.keys - a.keys)
            k = 0
            while k in a.keys or k in b.keys:
                k += 1
            fresh.add(k)
            for kk in sorted(fresh):
                ans = self.forward(b, kk) if kk not in b.keys else []
                for t in self.forward(a, kk):
                    rs = [u for u in ans if ell(u.label) == ell(t.label)]
                    out.append((left, t, rs))
            bb = self.backward(b)
            for t in self.backward(a):
                rs = [u for u in bb if u.key == t.key and ell(u.label) == ell(t.label)]
                out.append((left, t, rs))
        return out


def fr_bisimilar(x, y) -> Verdict:
    """Greatest fixed point of the forward-reverse game from ``(x, y)``,
    computed up to simultaneous renaming of keys."""
    arena = _FrArena()
    root = arena.canon(x, y)
    succ = {}
    preds = defaultdict(set)
    queue = deque([root])
    succ[root] = None
    while queue:
        s = queue.popleft()
        attacks = []
        for left, t, rs in arena.attacks(*s):
            nxts = []
            for u in rs:
                n = arena.canon(t.target, u.target) if left else arena.canon(u.target, t.target)
                nxts.append((n, u))
                preds[n].add(s)
                if n not in succ:
                    succ[n] = None
                    queue.append(n)
            attacks.append((left, t, nxts))
        succ[s] = attacks
    good = set(succ)
    removed = {}
    reason = {}
    work = deque(succ)
    while work:
        s = work.popleft()
        if s not in good:
            continue
        for left, t, nxts in succ[s]:
            if not any(n in good for n, _ in nxts):
                good.discard(s)
                removed[s] = len(removed)
                reason[s] = (left, t, nxts)
                work.extend(preds[s])
                break
    ok = root in good
    trace = []
    s = root
    while not ok and s in reason:
        left, t, nxts = reason[s]
        step = {"side": "left" if left else "right", "move": str(t.label),
                "direction": "forward" if t.forward else "backward"}
        trace.append(step)
        if not nxts:
            break
        n, u = max(nxts, key=lambda nu: removed[nu[0]])
        step["answer"] = str(u.label)
        s = n
    return Verdict("fr", ok, frozenset(good) if ok else frozenset(), trace)


def bisimilar(x, y, kind="kp") -> Verdict:
    if kind == "fr":
        return fr_bisimilar(x, y)
    if is_standard(x) and is_standard(y):
        return _forward_bisim(x, y, kind)
    return bisimilar_from_origin(x, y, kind)
