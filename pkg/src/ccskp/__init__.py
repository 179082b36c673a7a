"""Keyed reversible CCS with proof labels."""
from .syntax import (
    NIL, Nil, Par, Prefix, Restrict, Simple, Sum, Sync, parse, parse_label, render,
    render_label,
)
from .semantics import Transition, backward_steps, explore, forward_steps, is_reachable

__version__ = "0.1.0"
