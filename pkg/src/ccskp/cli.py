"""Command line front end.

Exit status: 0 on success, 1 when a checked property fails (or processes are
not equivalent), 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import bisim, keyorder, ltsi, relations
from .generate import random_process
from .semantics import backward_steps, explore, forward_steps, is_reachable
from .syntax import (
    MalformedProcess, ParseError, check_well_formed, event_label_of_key, parse, parse_label,
    render_label,
)


class Session:
    """State of an interactive stepping session with undo."""

    def __init__(self, p):
        self.start = p
        self.current = p
        self.history = []

    def moves(self):
        return forward_steps(self.current) + backward_steps(self.current)

    def take(self, t):
        self.history.append(t)
        self.current = t.target

    def undo(self):
        if not self.history:
            return False
        t = self.history.pop()
        self.current = t.source
        return True


def _term(args):
    if getattr(args, "random", None):
        rng = random.Random(args.seed)
        return random_process(rng, args.random)
    if args.term is None:
        raise ParseError("a term or --random is required")
    p = parse(args.term)
    check_well_formed(p)
    return p


def _emit(args, data, text):
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def cmd_parse(args):
    p = _term(args)
    data = {"term": str(p), "keys": sorted(p.keys), "standard": not p.keys,
            "reachable": is_reachable(p)}
    _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    return 0


def cmd_explore(args):
    g = explore(_term(args), max_depth=args.max_depth)
    if args.dot:
        print(g.to_dot())
    elif args.json:
        print(json.dumps(g.to_json(), indent=2))
    else:
        print(f"{len(g.nodes)} states, {len(g.edges)} forward transitions")
        for t in g.edges:
            print(f"  {t.source}  --{t.label}-->  {t.target}")
    return 0


def cmd_rel(args):
    a, b = parse_label(args.first), parse_label(args.second)
    verdict = relations.classify(a, b)
    _emit(args, {"first": render_label(a), "second": render_label(b), "relation": verdict}, verdict)
    return 0


def cmd_axioms(args):
    g = explore(_term(args), max_depth=args.max_depth)
    res = ltsi.check_axioms(g)
    data = {k: (None if v is None else [str(x) for x in v]) for k, v in res.items()}
    lines = [f"{k}: {'ok' if v is None else 'FAILED ' + '; '.join(v)}" for k, v in data.items()]
    _emit(args, {"states": len(g.nodes), "axioms": data}, "\n".join(lines))
    return 0 if all(v is None for v in res.values()) else 1


def cmd_events(args):
    g = explore(_term(args), max_depth=args.max_depth)
    es = ltsi.EventStructure(g)
    evs = sorted(es.forward_events())
    rows = [{"id": e, "key": es.key(e), "label": str(es.label(e)), "transitions": len(es.members[e])}
            for e in evs]
    order = [[a, b] for a in evs for b in evs if es.immediate_pred(a, b)]
    conflicts = [[a, b] for a in evs for b in evs if a < b and es.conflict(a, b)]
    text = [f"event {r['id']}: {r['label']} (key {r['key']}, {r['transitions']} transitions)" for r in rows]
    text += [f"{a} < {b}" for a, b in order] + [f"{a} # {b}" for a, b in conflicts]
    _emit(args, {"events": rows, "immediate": order, "conflict": conflicts}, "\n".join(text))
    return 0


def cmd_keyorder(args):
    p = _term(args)
    cover = keyorder.order_edges(p)
    data = {"keys": sorted(p.keys), "order": [list(e) for e in cover],
            "maximal": sorted(keyorder.maximal_keys(p)),
            "events": {k: str(event_label_of_key(p, k)) for k in sorted(p.keys)}}
    text = [f"{k}: {v}" for k, v in data["events"].items()]
    text += [f"{a} < {b}" for a, b in cover] + [f"maximal: {data['maximal']}"]
    _emit(args, data, "\n".join(text))
    return 0


def cmd_bisim(args):
    p, q = parse(args.first), parse(args.second)
    for r in (p, q):
        check_well_formed(r)
    v = bisim.bisimilar(p, q, args.kind)
    data = {"kind": v.kind, "equivalent": v.equivalent, "witness_size": len(v.witness),
            "trace": v.trace}
    text = "EQUIVALENT" if v.equivalent else "NOT EQUIVALENT"
    if v.equivalent:
        text += f" (witness of {len(v.witness)} states)"
    for s in v.trace:
        verb = "undoes" if s.get("direction") == "backward" else "plays"
        text += f"\n  {s['side']} {verb} {s['move']}" + (f", answered by {s['answer']}" if "answer" in s else ", unanswered")
    _emit(args, data, text)
    return 0 if v.equivalent else 1


def cmd_step(args, stdin=None, out=None):
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    p = _term(args)
    if not is_reachable(p):
        raise bisim.NotReachable(str(p))
    s = Session(p)

    def show():
        out.write(f"\n{s.current}\n")
        for i, t in enumerate(s.moves()):
            arrow = "->" if t.forward else "<-"
            out.write(f"  [{i}] {arrow} {t.label}\n")
        cover = keyorder.order_edges(s.current)
        if cover:
            out.write("  key order: " + ", ".join(f"{a}<{b}" for a, b in cover) + "\n")
        out.write("> ")
        out.flush()

    show()
    for line in stdin:
        cmd = line.strip()
        if cmd in ("q", "quit"):
            break
        if cmd in ("u", "undo"):
            if not s.undo():
                out.write("nothing to undo\n")
        elif cmd.isdigit() and int(cmd) < len(s.moves()):
            t = s.moves()[int(cmd)]
            for prev in s.history:
                out.write(f"  vs {prev.label}: {relations.classify(t.label, prev.label)}\n")
            s.take(t)
        elif cmd:
            out.write("enter a move number, 'undo' or 'quit'\n")
        show()
    out.write("\n")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="ccskp", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="seed for --random terms")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp, term=True, depth=False):
        if term:
            sp.add_argument("term", nargs="?")
            sp.add_argument("--random", type=int, metavar="N", help="use a random term with at most N prefixes")
            sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        if depth:
            sp.add_argument("--max-depth", type=int)
        sp.add_argument("--json", action="store_true")
        return sp

    common(sub.add_parser("parse", help="parse and describe a term")).set_defaults(fn=cmd_parse)
    sp = common(sub.add_parser("explore", help="explore the state graph"), depth=True)
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(fn=cmd_explore)
    sp = common(sub.add_parser("rel", help="relate two proof labels"), term=False)
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(fn=cmd_rel)
    common(sub.add_parser("axioms", help="check the axioms on the state graph"), depth=True).set_defaults(fn=cmd_axioms)
    common(sub.add_parser("events", help="list events and their order"), depth=True).set_defaults(fn=cmd_events)
    common(sub.add_parser("keyorder", help="order of keys in a term")).set_defaults(fn=cmd_keyorder)
    common(sub.add_parser("step", help="step through a term interactively")).set_defaults(fn=cmd_step)
    sp = common(sub.add_parser("bisim", help="decide a bisimilarity"), term=False)
    sp.add_argument("--kind", choices=("kp", "dp", "fr"), default="kp")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(fn=cmd_bisim)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, MalformedProcess, bisim.NotReachable) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
