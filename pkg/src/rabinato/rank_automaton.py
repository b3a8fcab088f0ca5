"""Determinization of token automata through seniority rankings.

A ranking is a partial map from token-automaton states to ranks 1..n: the
initial state is always ranked, sinks never are, ranks are distinct and
contiguous from 1.  Stepping a ranking moves every ranked token, drops
tokens that land in sinks, keeps only the most senior token on a collision,
compresses the surviving ranks order-preservingly, and reseeds the initial
state with the youngest rank when it came up empty.

Each transition records the token movements (source state, rank, target
state).  From those and an accepting set we derive, per rank j, the three
transition sets driving the Rabin pairs: `fail` (a token hits a
non-accepting sink), `succeed(j)` (the rank-j token enters an accepting
state), and `buy(j)` (a token senior to j swallows another token outside
the accepting set, or is itself joined by the token born on the initial
state).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formula as fm
from .formula import CapExceeded
from .token_automaton import accepting_states


@dataclass
class RankAutomaton:
    token: "TokenAutomaton"
    rankings: list        # tuples: rank or None per token-automaton state
    delta: list           # delta[ranking][letter_index] -> ranking index
    moves: list           # moves[ranking][letter_index] -> ((state, rank, dest), ...)
    max_rank: int

    @property
    def initial(self):
        return 0

    @property
    def letters(self):
        return self.token.letters

    def letter_index(self, letter):
        return self.token.letter_index(letter)


@dataclass
class RankAcceptance:
    """Per-transition flags for a fixed accepting set."""
    fails: list           # [ranking][letter] -> bool
    succeeds: list        # [ranking][letter] -> frozenset of ranks
    buys: list            # [ranking][letter] -> frozenset of ranks

    def pair(self, j):
        """Rabin pair for rank j as (fin, inf) sets of (ranking, letter)."""
        fin, inf = set(), set()
        for r, row in enumerate(self.fails):
            for l, failed in enumerate(row):
                if failed or j in self.buys[r][l]:
                    fin.add((r, l))
                if j in self.succeeds[r][l]:
                    inf.add((r, l))
        return fin, inf


def initial_ranking(aut):
    ranks = [None] * len(aut.states)
    ranks[aut.initial] = 1
    return tuple(ranks)


def rank_step(aut, ranks, letter_index):
    """One ranking step; returns (new ranking, movement records)."""
    ranked = sorted(
        ((rk, q) for q, rk in enumerate(ranks) if rk is not None))
    moves = []
    claimed = {}
    for rk, q in ranked:
        dest = aut.delta[q][letter_index]
        moves.append((q, rk, dest))
        if dest not in aut.sinks and dest not in claimed:
            claimed[dest] = rk
    new = [None] * len(aut.states)
    for fresh, (dest, _) in enumerate(
            sorted(claimed.items(), key=lambda kv: kv[1]), start=1):
        new[dest] = fresh
    if new[aut.initial] is None:
        new[aut.initial] = len(claimed) + 1
    return tuple(new), tuple(moves)


def build_rank_automaton(aut, state_cap=1_000_000):
    """Breadth-first closure of the initial ranking under rank_step."""
    first = initial_ranking(aut)
    rankings = [first]
    index = {first: 0}
    delta, moves = [], []
    frontier = 0
    nletters = len(aut.letters)
    while frontier < len(rankings):
        r = rankings[frontier]
        frontier += 1
        drow, mrow = [], []
        for l in range(nletters):
            s, mv = rank_step(aut, r, l)
            j = index.get(s)
            if j is None:
                j = len(rankings)
                if j >= state_cap:
                    raise CapExceeded(f"ranking cap {state_cap} exceeded")
                index[s] = j
                rankings.append(s)
            drow.append(j)
            mrow.append(mv)
        delta.append(drow)
        moves.append(mrow)
    max_rank = max(max((rk for rk in r if rk is not None), default=0)
                   for r in rankings)
    return RankAutomaton(token=aut, rankings=rankings, delta=delta,
                         moves=moves, max_rank=max_rank)


def apply_acceptance(ra, assumed):
    """Derive fail/succeed/buy flags for the given assumption set.

    A rank succeeds only when its token moves into the accepting set from
    outside: accepting states need not be sinks here, and a token parked
    inside the accepting set must not keep certifying success on behalf of
    the unboundedly many tokens bought elsewhere.  When the initial state
    is accepting the whole reachable automaton is (closure), every token
    succeeds at birth, and all transitions succeed at every rank.
    """
    acc = accepting_states(ra.token, assumed)
    sinks = ra.token.sinks
    init = ra.token.initial
    bad_sinks = sinks - acc
    universal = init in acc
    all_ranks = frozenset(range(1, ra.max_rank + 1))
    fails, succeeds, buys = [], [], []
    for r in range(len(ra.rankings)):
        frow, srow, brow = [], [], []
        for mv in ra.moves[r]:
            frow.append(any(dest in bad_sinks for _, _, dest in mv))
            if universal:
                srow.append(all_ranks)
            else:
                srow.append(frozenset(rk for q, rk, dest in mv
                                      if dest in acc and q not in acc))
            bought = set()
            by_dest = {}
            for _, rk, dest in mv:
                if dest not in acc:
                    by_dest.setdefault(dest, []).append(rk)
                if dest == init and init not in acc:
                    bought.add(rk)
            for dest, rks in by_dest.items():
                if len(rks) > 1:
                    bought.add(min(rks))
            brow.append(frozenset(
                j for j in range(1, ra.max_rank + 1)
                if any(rk < j for rk in bought)))
        fails.append(frow)
        succeeds.append(srow)
        buys.append(brow)
    return RankAcceptance(fails=fails, succeeds=succeeds, buys=buys)


def rank_conjunction(ra, ranking_index, j):
    """Conjunction of the formulas whose rank is j or younger (numerically >= j)."""
    ranks = ra.rankings[ranking_index]
    return fm.conj([ra.token.states[q]
                    for q, rk in enumerate(ranks)
                    if rk is not None and rk >= j])


def ranking_label(ra, ranking_index):
    """Display like (2,1,-) over non-sink states in state order."""
    ranks = ra.rankings[ranking_index]
    cells = [str(ranks[q]) if ranks[q] is not None else "-"
             for q in range(len(ranks)) if q not in ra.token.sinks]
    return "(" + ",".join(cells) + ")"
