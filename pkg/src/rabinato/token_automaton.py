"""Deterministic token automata for eventually-always monitoring.

A token automaton puts a fresh token on the initial state at every step and
moves all existing tokens along the (deterministic) transition function; a
run is accepting when all but finitely many tokens reach an accepting state.
The automaton for a formula uses the frozen one-letter derivative as its
transition function, so the token born at step i tracks the obligation the
suffix starting at i still has to discharge, with G-subformulas delegated
to the monitors responsible for them.

Only the transition structure lives here.  The accepting set depends on
which G-subformulas are assumed to hold, and is derived per assumption set;
the actual acceptance semantics (infinitely many tokens) is realized by the
rank automaton built on top of this structure.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formula as fm


@dataclass
class TokenAutomaton:
    states: list          # interned formulas; index 0 is the initial state
    delta: list           # delta[state][letter_index] -> state index
    letters: list         # frozensets over `atoms`
    atoms: tuple
    sinks: frozenset      # non-initial states whose transitions all self-loop

    @property
    def initial(self):
        return 0

    def letter_index(self, letter):
        bits = 0
        for i, name in enumerate(self.atoms):
            if name in letter:
                bits |= 1 << i
        return bits


def build_token_automaton(psi, state_cap=1_000_000):
    """Transition structure over the frozen-derivative closure of `psi`."""
    states, delta, letters = fm.reachable(psi, fm.after_frozen, cap=state_cap)
    sinks = frozenset(
        q for q in range(1, len(states))
        if all(t == q for t in delta[q])
    )
    return TokenAutomaton(states=states, delta=delta, letters=letters,
                          atoms=fm.atoms(psi), sinks=sinks)


def accepting_states(aut, assumed):
    """States entailed by the assumed G-subformulas (closed under delta)."""
    positives = list(assumed)
    return frozenset(
        q for q, f in enumerate(aut.states)
        if fm.entails_all(positives, (), f)
    )
