"""Connectivity, dependence and independence of proof labels, plus the
keyless machinery used to compare against the non-reversible calculus."""
from __future__ import annotations

from .syntax import (
    NIL, TAU, Nil, Par, Prefix, ProofLabel, Restrict, Simple, Sum, Sync,
    complement, head, is_standard, key_of, name_of, origin, strip_keys, wrap,
)

CONNECTED_DEPENDENT = "CONNECTED+DEPENDENT"
CONNECTED_INDEPENDENT = "CONNECTED+INDEPENDENT"
NOT_CONNECTED = "NOT-CONNECTED"


def _split(op):
    return op[0], op[1]


def _side(h, d):
    return h[1] if d == "L" else h[2]


def connected_labels(t1: ProofLabel, t2: ProofLabel) -> bool:
    h1, h2 = head(t1), head(t2)
    if h1[0] == "act" or h2[0] == "act":
        return True
    if h1[0] != "pair" and h2[0] != "pair":
        (o1, d1), (o2, d2) = _split(h1[0]), _split(h2[0])
        if o1 != o2:
            return False
        return connected_labels(h1[1], h2[1]) if d1 == d2 else True
    if h1[0] == "pair" and h2[0] == "pair":
        return connected_labels(h1[1], h2[1]) and connected_labels(h1[2], h2[2])
    if h1[0] == "pair":
        o, d = _split(h2[0])
        return o == "|" and connected_labels(_side(h1, d), h2[1])
    o, d = _split(h1[0])
    return o == "|" and connected_labels(h1[1], _side(h2, d))


def dependent_labels(t1: ProofLabel, t2: ProofLabel) -> bool:
    h1, h2 = head(t1), head(t2)
    if h1[0] == "act" or h2[0] == "act":
        return True
    if h1[0] != "pair" and h2[0] != "pair":
        (o1, d1), (o2, d2) = _split(h1[0]), _split(h2[0])
        if o1 != o2:
            return False
        if d1 == d2:
            return dependent_labels(h1[1], h2[1])
        return o1 == "+" or key_of(t1) == key_of(t2)
    if h1[0] == "pair" and h2[0] == "pair":
        l1, r1, l2, r2 = h1[1], h1[2], h2[1], h2[2]
        return ((dependent_labels(l1, l2) and connected_labels(r1, r2))
                or (dependent_labels(r1, r2) and connected_labels(l1, l2)))
    if h1[0] == "pair":
        o, d = _split(h2[0])
        return o == "|" and dependent_labels(_side(h1, d), h2[1])
    o, d = _split(h1[0])
    return o == "|" and dependent_labels(h1[1], _side(h2, d))


def independent_labels(t1: ProofLabel, t2: ProofLabel) -> bool:
    h1, h2 = head(t1), head(t2)
    if h1[0] == "act" or h2[0] == "act":
        return False
    if h1[0] != "pair" and h2[0] != "pair":
        (o1, d1), (o2, d2) = _split(h1[0]), _split(h2[0])
        if o1 != o2:
            return False
        if d1 == d2:
            return independent_labels(h1[1], h2[1])
        return o1 == "|" and key_of(t1) != key_of(t2)
    if h1[0] == "pair" and h2[0] == "pair":
        return independent_labels(h1[1], h2[1]) and independent_labels(h1[2], h2[2])
    if h1[0] == "pair":
        o, d = _split(h2[0])
        return o == "|" and independent_labels(_side(h1, d), h2[1])
    o, d = _split(h1[0])
    return o == "|" and independent_labels(h1[1], _side(h2, d))


def classify(t1: ProofLabel, t2: ProofLabel) -> str:
    if not connected_labels(t1, t2):
        return NOT_CONNECTED
    return CONNECTED_INDEPENDENT if independent_labels(t1, t2) else CONNECTED_DEPENDENT


def connected_transitions(t1, t2) -> bool:
    """Transitions are connected exactly when they share an origin."""
    return origin(t1.source) == origin(t2.source)


def trans_relation(t1, t2) -> str:
    if not connected_transitions(t1, t2):
        return NOT_CONNECTED
    return classify(t1.label, t2.label)


# ------------------------------------------------------------ keyless side


def smile(t1: ProofLabel, t2: ProofLabel) -> bool:
    """Independence of keyless labels as understood without keys."""
    h1, h2 = head(t1), head(t2)
    if h1[0] == "act" or h2[0] == "act":
        return False
    if h1[0] != "pair" and h2[0] != "pair":
        (o1, d1), (o2, d2) = _split(h1[0]), _split(h2[0])
        if o1 != o2:
            return False
        if d1 == d2:
            return smile(h1[1], h2[1])
        return o1 == "|"
    if h1[0] == "pair" and h2[0] == "pair":
        return smile(h1[1], h2[1]) and smile(h1[2], h2[2])
    if h1[0] == "pair":
        h1, h2 = h2, h1
    o, d = _split(h1[0])
    return o == "|" and smile(h1[1], _side(h2, d))


def prune(p):
    """Drop executed prefixes and the untaken branch of decided sums."""
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prefix):
        return prune(p.cont) if p.key is not None else p
    if isinstance(p, Restrict):
        return Restrict(prune(p.body), p.name)
    if isinstance(p, Par):
        return Par(prune(p.left), prune(p.right))
    ls, rs = is_standard(p.left), is_standard(p.right)
    if rs and not ls:
        return prune(p.left)
    if ls and not rs:
        return prune(p.right)
    return Sum(prune(p.left), prune(p.right))


def forget_label(p, theta: ProofLabel) -> ProofLabel:
    """Keyless label of the step ``theta`` from ``p`` seen on ``prune(p)``:
    sum operators of sums already decided in ``p`` vanish."""
    if isinstance(p, Prefix):
        return forget_label(p.cont, theta) if p.key is not None else strip_keys(theta)
    if isinstance(p, Restrict):
        return forget_label(p.body, theta)
    h = head(theta)
    if h[0] == "act":
        return strip_keys(theta)
    if h[0] == "pair":
        return Sync((), forget_label(p.left, h[1]), forget_label(p.right, h[2]))
    sub = p.left if h[0][1] == "L" else p.right
    inner = forget_label(sub, h[1])
    if isinstance(p, Sum) and not is_standard(p):
        return inner
    return wrap(h[0], inner)


def ccsp_steps(p):
    """Forward steps of the keyless, non-reversible calculus with proof
    labels: ``(label, target)`` pairs; sums discard the untaken branch."""
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        return [(Simple((), p.label), p.cont)]
    if isinstance(p, Restrict):
        n = p.name
        return [(th, Restrict(q, n)) for th, q in ccsp_steps(p.body)
                if _ell(th) not in (n, complement(n))]
    if isinstance(p, Sum):
        return ([(wrap("+L", th), q) for th, q in ccsp_steps(p.left)]
                + [(wrap("+R", th), q) for th, q in ccsp_steps(p.right)])
    ls, rs = ccsp_steps(p.left), ccsp_steps(p.right)
    out = [(wrap("|L", th), Par(q, p.right)) for th, q in ls]
    out += [(wrap("|R", th), Par(p.left, q)) for th, q in rs]
    for tl, ql in ls:
        for tr, qr in rs:
            if (isinstance(tl, Simple) and isinstance(tr, Simple)
                    and tl.action != TAU and tr.action == complement(tl.action)):
                out.append((Sync((), tl, tr), Par(ql, qr)))
    return out


def _ell(th):
    return th.action if isinstance(th, Simple) else TAU


def remove_key(p, a: str, k: int):
    """Delete the prefixes ``a[k]`` and its complement ``[k]``, keeping their
    continuations in place."""
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prefix):
        if p.key == k and name_of(p.label) == name_of(a):
            return remove_key(p.cont, a, k)
        return Prefix(p.label, remove_key(p.cont, a, k), p.key)
    if isinstance(p, Restrict):
        return Restrict(remove_key(p.body, a, k), p.name)
    return type(p)(remove_key(p.left, a, k), remove_key(p.right, a, k))


def realise(t1: ProofLabel, t2: ProofLabel):
    """A standard process from which steps labelled ``t1`` and ``t2`` (keys
    aside) are both reachable, or ``None`` when the labels are not connected."""
    if not connected_labels(t1, t2):
        return None
    return _realise(t1, t2)


def _realise(t1, t2):
    h1, h2 = head(t1), head(t2)
    if h1[0] == "act":
        return Prefix(t1.action, _real(t2))
    if h2[0] == "act":
        return Prefix(t2.action, _real(t1))
    if h1[0] == "pair" and h2[0] == "pair":
        return Par(_realise(h1[1], h2[1]), _realise(h1[2], h2[2]))
    if h1[0] == "pair":
        h1, h2 = h2, h1
    o, d = _split(h1[0])
    if h2[0] == "pair":
        inner = _realise(h1[1], _side(h2, d))
        return Par(inner, _real(h2[2])) if d == "L" else Par(_real(h2[1]), inner)
    d2 = h2[0][1]
    cons = Par if o == "|" else Sum
    if d == d2:
        return _place(o, d, _realise(h1[1], h2[1]))
    l, r = (h1[1], h2[1]) if d == "L" else (h2[1], h1[1])
    return cons(_real(l), _real(r))


def _place(o, d, inner):
    cons = Par if o == "|" else Sum
    return cons(inner, NIL) if d == "L" else cons(NIL, inner)


def real(th: ProofLabel):
    """A standard process that can eventually take a step labelled ``th``."""
    return _real(th)


def _real(th: ProofLabel):
    h = head(th)
    if h[0] == "act":
        return Prefix(th.action)
    if h[0] == "pair":
        return Par(_real(h[1]), _real(h[2]))
    o, d = _split(h[0])
    return _place(o, d, _real(h[1]))
