"""LTL to deterministic transition-based generalized Rabin automata."""

from .compiler import BuildOptions, RabinAutomaton, build_automaton, stats
from .formula import CapExceeded
from .hoa import emit_dot, emit_hoa, read_hoa
from .oracle import LassoWord, accepts, evaluate, lasso
from .parser import ParseError, parse

__all__ = [
    "BuildOptions", "CapExceeded", "LassoWord", "ParseError",
    "RabinAutomaton", "accepts", "build_automaton", "emit_dot", "emit_hoa",
    "evaluate", "lasso", "parse", "read_hoa", "stats",
]
