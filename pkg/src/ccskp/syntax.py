"""Terms of keyed reversible CCS and their proof labels.

Actions are plain strings: a name ``a``, a co-name ``'a`` or ``tau``.
Keys are naturals. A process is built from :class:`Nil`, :class:`Prefix`
(optionally keyed), :class:`Restrict`, :class:`Sum` and :class:`Par`.

Concrete syntax, loosest to tightest binding::

    proc := par ("+" par)*
    par  := pre ("|" pre)*
    pre  := label ["[" nat "]"] ("." pre | ("\\" name)*) | atom
    atom := ("0" | "(" proc ")") ("\\" name)*

``a.b \\ b`` therefore reads as ``a.((b.0) \\ b)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Union

TAU = "tau"
PAR_OPS = ("|L", "|R")
SUM_OPS = ("+L", "+R")


class ParseError(ValueError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} at offset {pos}")
        self.pos = pos


class MalformedProcess(ValueError):
    pass


# ---------------------------------------------------------------- actions

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_action(a) -> bool:
    if not isinstance(a, str):
        return False
    if a == TAU:
        return True
    n = a[1:] if a.startswith("'") else a
    return bool(_NAME.match(n)) and n != TAU


def complement(a: str) -> str:
    if a == TAU:
        return TAU
    return a[1:] if a.startswith("'") else "'" + a


def name_of(a: str) -> str:
    return a[1:] if a.startswith("'") else a


# -------------------------------------------------------------- processes


class Process:
    """Base of all process terms. Equality is structural, hashes are cached."""

    __match_args__: tuple = ()

    def _parts(self):
        p = self.__dict__.get("_p")
        if p is None:
            p = self.__dict__["_p"] = tuple(getattr(self, f) for f in self.__match_args__)
        return p

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + self._parts())
            self.__dict__["_h"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._parts() == other._parts()

    def __repr__(self):
        return f"Process({render(self)!r})"

    def __str__(self):
        return render(self)

    @cached_property
    def keys(self) -> frozenset:
        ks = frozenset()
        for c in self.children():
            ks |= c.keys
        return ks

    @cached_property
    def size(self) -> int:
        """Number of prefix occurrences."""
        return sum(c.size for c in self.children())

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True, eq=False, repr=False)
class Nil(Process):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Prefix(Process):
    label: str
    cont: Process = None
    key: Optional[int] = None

    def __post_init__(self):
        if self.cont is None:
            object.__setattr__(self, "cont", NIL)

    def children(self):
        return (self.cont,)

    @cached_property
    def keys(self):
        ks = self.cont.keys
        return ks | {self.key} if self.key is not None else ks

    @cached_property
    def size(self):
        return 1 + self.cont.size


@dataclass(frozen=True, eq=False, repr=False)
class Restrict(Process):
    body: Process
    name: str

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False, repr=False)
class Sum(Process):
    left: Process
    right: Process

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Par(Process):
    left: Process
    right: Process

    def children(self):
        return (self.left, self.right)


NIL = Nil()


def keys(p: Process) -> frozenset:
    return p.keys


def is_standard(p: Process) -> bool:
    return not p.keys


def origin(p: Process) -> Process:
    """Forget every key."""
    if not p.keys:
        return p
    if isinstance(p, Prefix):
        return Prefix(p.label, origin(p.cont))
    if isinstance(p, Restrict):
        return Restrict(origin(p.body), p.name)
    return type(p)(origin(p.left), origin(p.right))


def rename_keys(p: Process, mapping) -> Process:
    """Apply ``mapping`` (dict or callable) to every key of ``p``."""
    if not p.keys:
        return p
    f = mapping if callable(mapping) else mapping.__getitem__
    if all(f(k) == k for k in p.keys):
        return p
    if isinstance(p, Prefix):
        k = None if p.key is None else f(p.key)
        return Prefix(p.label, rename_keys(p.cont, f), k)
    if isinstance(p, Restrict):
        return Restrict(rename_keys(p.body, f), p.name)
    return type(p)(rename_keys(p.left, f), rename_keys(p.right, f))


def prefixes(p: Process, path=()) -> Iterator[tuple]:
    """Yield ``(position, path, prefix)`` for every prefix occurrence in
    pre-order. ``path`` lists the ``|``/``+`` operators above the prefix."""
    stack = [(p, path)]
    pos = 0
    while stack:
        q, pa = stack.pop()
        if isinstance(q, Prefix):
            yield pos, pa, q
            pos += 1
            stack.append((q.cont, pa))
        elif isinstance(q, Restrict):
            stack.append((q.body, pa))
        elif isinstance(q, (Sum, Par)):
            ops = PAR_OPS if isinstance(q, Par) else SUM_OPS
            stack.append((q.right, pa + (ops[1],)))
            stack.append((q.left, pa + (ops[0],)))


def check_well_formed(p: Process) -> None:
    """Raise :class:`MalformedProcess` unless every key is used by one prefix
    or by two complementary prefixes in different parallel components, no
    sum has keys on both sides, and no unkeyed prefix guards a key."""
    seen = {}
    for _, path, q in prefixes(p):
        if not is_action(q.label):
            raise MalformedProcess(f"bad action {q.label!r}")
        if q.key is None:
            if q.cont.keys:
                raise MalformedProcess(f"unkeyed prefix {q.label} guards keys")
            continue
        if not isinstance(q.key, int) or q.key < 0:
            raise MalformedProcess(f"key {q.key!r} is not a natural")
        seen.setdefault(q.key, []).append((path, q.label))
    for k, occ in seen.items():
        if len(occ) > 2:
            raise MalformedProcess(f"key {k} used {len(occ)} times")
        if len(occ) == 2:
            (p1, a1), (p2, a2) = occ
            if a1 == TAU or a2 != complement(a1):
                raise MalformedProcess(f"key {k} shared by {a1} and {a2}")
            i = _diverge(p1, p2)
            if i is None or p1[i] != "|L" or p2[i] != "|R":
                raise MalformedProcess(f"key {k} not split across a parallel")
    _check_sums(p)


def _check_sums(p):
    if isinstance(p, Sum) and p.left.keys and p.right.keys:
        raise MalformedProcess("both branches of a sum carry keys")
    for c in p.children():
        _check_sums(c)


def _diverge(p1, p2):
    for i, (x, y) in enumerate(zip(p1, p2)):
        if x != y:
            return i
    return None


# ----------------------------------------------------------- proof labels


@dataclass(frozen=True)
class Simple:
    """``path`` followed by ``action[key]``; ``key`` is ``None`` when keyless."""

    path: tuple
    action: str
    key: Optional[int] = None

    def __str__(self):
        return render_label(self)


@dataclass(frozen=True)
class Sync:
    """``path`` followed by a synchronisation pair of two simple labels."""

    path: tuple
    left: Simple
    right: Simple

    @property
    def key(self):
        return self.left.key

    def __str__(self):
        return render_label(self)


ProofLabel = Union[Simple, Sync]


def ell(theta: ProofLabel) -> str:
    return theta.action if isinstance(theta, Simple) else TAU


def key_of(theta: ProofLabel):
    return theta.key


def with_key(theta: ProofLabel, k) -> ProofLabel:
    if isinstance(theta, Simple):
        return Simple(theta.path, theta.action, k)
    return Sync(theta.path, with_key(theta.left, k), with_key(theta.right, k))


def strip_keys(theta: ProofLabel) -> ProofLabel:
    return with_key(theta, None)


def wrap(op: str, theta: ProofLabel) -> ProofLabel:
    if isinstance(theta, Simple):
        return Simple((op,) + theta.path, theta.action, theta.key)
    return Sync((op,) + theta.path, theta.left, theta.right)


def head(theta: ProofLabel):
    """Outermost constructor: ``("act",)``, ``(op, rest)`` or ``("pair", l, r)``."""
    if theta.path:
        op = theta.path[0]
        if isinstance(theta, Simple):
            return op, Simple(theta.path[1:], theta.action, theta.key)
        return op, Sync(theta.path[1:], theta.left, theta.right)
    if isinstance(theta, Simple):
        return ("act",)
    return "pair", theta.left, theta.right


def is_valid_label(theta) -> bool:
    ops = PAR_OPS + SUM_OPS
    if isinstance(theta, Simple):
        return all(o in ops for o in theta.path) and is_action(theta.action)
    if isinstance(theta, Sync):
        l, r = theta.left, theta.right
        return (all(o in ops for o in theta.path)
                and isinstance(l, Simple) and isinstance(r, Simple)
                and is_valid_label(l) and is_valid_label(r)
                and l.action != TAU and r.action == complement(l.action)
                and l.key == r.key)
    return False


def event_label_of_key(p: Process, k: int) -> ProofLabel:
    """Rebuild the proof label of the transition that introduced key ``k``."""
    occ = [(path, q.label) for _, path, q in prefixes(p) if q.key == k]
    if not occ:
        raise KeyError(k)
    if len(occ) == 1:
        path, a = occ[0]
        return Simple(path, a, k)
    if len(occ) != 2:
        raise MalformedProcess(f"key {k} used {len(occ)} times")
    (p1, a1), (p2, a2) = occ
    i = _diverge(p1, p2)
    if i is None or p1[i] != "|L" or p2[i] != "|R" or a2 != complement(a1) or a1 == TAU:
        raise MalformedProcess(f"key {k} does not mark a synchronisation")
    return Sync(p1[:i], Simple(p1[i + 1:], a1, k), Simple(p2[i + 1:], a2, k))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>'?[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[.\[\]()|+\\<>,⟨⟩]))")


def _tokens(src: str):
    out = []
    i = 0
    n = len(src)
    while i < n:
        m = _TOKEN.match(src, i)
        if not m:
            if src[i:].strip() == "":
                break
            raise ParseError(f"unexpected character {src[i]!r}", i)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        i = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokens(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.next()
        if t[1] != val:
            raise ParseError(f"expected {val!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def at(self, val):
        return self.peek()[1] == val and self.peek()[0] != "end"

    # processes
    def proc(self):
        p = self.par()
        while self.at("+"):
            self.next()
            p = Sum(p, self.par())
        return p

    def par(self):
        p = self.pre()
        while self.at("|"):
            self.next()
            p = Par(p, self.pre())
        return p

    def pre(self):
        kind, val, pos = self.peek()
        if kind == "name":
            self.next()
            if not is_action(val):
                raise ParseError(f"bad action {val!r}", pos)
            k = self.key()
            if self.at("."):
                self.next()
                return Prefix(val, self.pre(), k)
            return self.restrictions(Prefix(val, NIL, k))
        return self.atom()

    def key(self):
        if not self.at("["):
            return None
        self.next()
        kind, val, pos = self.next()
        if kind != "num":
            raise ParseError("expected a key", pos)
        self.expect("]")
        return int(val)

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num" and val == "0":
            p = NIL
        elif val == "(" and kind == "sym":
            p = self.proc()
            self.expect(")")
        else:
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos)
        return self.restrictions(p)

    def restrictions(self, p):
        while self.at("\\"):
            self.next()
            kind, val, pos = self.next()
            if kind != "name" or not is_action(val) or val == TAU:
                raise ParseError("expected a name to restrict", pos)
            p = Restrict(p, name_of(val))
        return p

    # proof labels
    def label(self):
        path = []
        while self.peek()[1] in ("|", "+"):
            op = self.next()[1]
            kind, d, pos = self.next()
            if d not in ("L", "R"):
                raise ParseError("expected L or R after operator", pos)
            path.append(op + d)
        if self.peek()[1] in ("<", "⟨"):
            self.next()
            l = self.label()
            self.expect(",")
            r = self.label()
            t = self.next()
            if t[1] not in (">", "⟩"):
                raise ParseError("expected '>'", t[2])
            if not (isinstance(l, Simple) and isinstance(r, Simple)):
                raise ParseError("synchronisation halves must be simple", t[2])
            return Sync(tuple(path), l, r)
        kind, val, pos = self.next()
        if kind != "name" or not is_action(val):
            raise ParseError(f"expected an action, found {val or 'end of input'!r}", pos)
        return Simple(tuple(path), val, self.key())

    def done(self):
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)


def parse(src: str) -> Process:
    ps = _Parser(src)
    p = ps.proc()
    ps.done()
    return p


def parse_label(src: str) -> ProofLabel:
    """Parse ``|L +R b[1]`` or ``<a[0], +L 'a[0]>``."""
    ps = _Parser(src)
    theta = ps.label()
    ps.done()
    if not is_valid_label(theta):
        raise ParseError(f"ill-formed proof label {src!r}")
    return theta


# -------------------------------------------------------------- rendering


def render(p: Process) -> str:
    return _sum(p)


def _sum(p):
    if isinstance(p, Sum):
        return f"{_sum(p.left)} + {_par(p.right)}"
    return _par(p)


def _par(p):
    if isinstance(p, Par):
        return f"{_par(p.left)} | {_pre(p.right)}"
    return _pre(p)


def _pre(p):
    if isinstance(p, Prefix):
        head_ = p.label if p.key is None else f"{p.label}[{p.key}]"
        if isinstance(p.cont, Nil):
            return head_
        return f"{head_}.{_pre(p.cont)}"
    if isinstance(p, Restrict):
        return _restricted(p)
    if isinstance(p, Nil):
        return "0"
    return f"({_sum(p)})"


def _restricted(p):
    b = p.body
    if isinstance(b, Restrict):
        inner = _restricted(b)
    elif isinstance(b, Nil):
        inner = "0"
    elif isinstance(b, Prefix) and isinstance(b.cont, Nil):
        inner = _pre(b)
    else:
        inner = f"({_sum(b)})"
    return f"{inner}\\{p.name}"


def render_label(theta: ProofLabel) -> str:
    ops = " ".join(theta.path)
    if isinstance(theta, Simple):
        core = theta.action if theta.key is None else f"{theta.action}[{theta.key}]"
    else:
        core = f"<{render_label(theta.left)}, {render_label(theta.right)}>"
    return f"{ops} {core}" if ops else core
