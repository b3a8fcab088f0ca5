"""Composition of the tracker and the per-G-subformula monitors into the
final deterministic transition-based generalized Rabin automaton.

The tracker unfolds the input formula with the one-letter derivative and
carries what remains to be fulfilled.  Each G-subformula gets a monitor
(token automaton + rank automaton) in charge of deciding whether the
subformula eventually holds forever, and at which seniority rank.  States
of the product pair a tracker formula with one ranking per monitor still
relevant to it; the acceptance condition is a disjunction over guesses
(A, pi): A is the set of G-subformulas assumed to hold eventually, pi picks
the rank at which each monitor in A is expected to succeed.  A disjunct
requires, on the transitions traversed infinitely often,

  * no monitor failure and no buying at the guessed rank (Fin),
  * each monitor in A succeeding at its guessed rank (Inf per monitor),
  * the tracker eventually staying inside the states entailed by the guess
    (Fin over transitions entering states outside that set).

Finally the reachable product is reduced by partition refinement over the
per-transition acceptance marks, which preserves the recognized language
exactly and collapses the transient tracker variants of prefix-independent
formulas.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import formula as fm
from .formula import CapExceeded
from .token_automaton import build_token_automaton
from .rank_automaton import (RankAutomaton, apply_acceptance,
                             build_rank_automaton, rank_conjunction,
                             ranking_label)


@dataclass
class BuildOptions:
    relevance: bool = True
    reduce_states: bool = True
    state_cap: int = 1_000_000
    disjunct_cap: int = 10_000


@dataclass
class Monitor:
    gform: "Formula"          # the G-subformula this monitor answers for
    body: "Formula"           # its argument
    rank_aut: RankAutomaton
    letter_map: list = None   # product letter index -> monitor letter index

    def acceptance(self, assumed):
        key = frozenset(g.seq for g in assumed) & self._own_keys
        hit = self._acc_cache.get(key)
        if hit is None:
            local = [g for g in assumed if g.seq in self._own_keys]
            hit = apply_acceptance(self.rank_aut, local)
            self._acc_cache[key] = hit
        return hit

    def __post_init__(self):
        self._acc_cache = {}
        self._own_keys = frozenset(
            g.seq for g in fm.always_subformulas(self.body))


@dataclass(frozen=True)
class ProductState:
    tracker: int              # tracker state index
    rankings: tuple           # ranking index per tracked monitor, by position


@dataclass
class Tracker:
    states: list
    delta: list
    letters: list


@dataclass
class Disjunct:
    assumed: tuple            # monitor positions assumed to hold
    ranks: tuple              # guessed rank per assumed monitor
    fin_id: int = -1
    inf_ids: tuple = ()


@dataclass
class RabinAutomaton:
    formula: "Formula"
    atoms: tuple
    letters: list
    monitors: list
    tracked: list             # monitor positions tracked, per tracker state
    states: list              # representative ProductState per class
    members: list             # all ProductStates in each class
    delta: list
    marks: list               # marks[state][letter] -> frozenset of set ids
    disjuncts: list
    num_sets: int
    tracker_states: list = field(default_factory=list)
    build_ms: float = 0.0

    @property
    def initial(self):
        return 0

    def letter_index(self, letter):
        bits = 0
        for i, name in enumerate(self.atoms):
            if name in letter:
                bits |= 1 << i
        return bits

    def state_label(self, i):
        st = self.members[i][0]
        parts = [str(self.tracker_states[st.tracker])]
        for pos, ridx in zip(self.tracked[st.tracker], st.rankings):
            mon = self.monitors[pos]
            parts.append(f"{mon.gform}:{ranking_label(mon.rank_aut, ridx)}")
        return " ; ".join(parts)


def build_tracker(f, state_cap=1_000_000):
    states, delta, letters = fm.reachable(f, fm.after, cap=state_cap)
    return Tracker(states=states, delta=delta, letters=letters)


def guess_entails(state_formula, assumed, negated):
    """The co-Buchi membership test behind each acceptance disjunct.

    `assumed` lists one (gform, rank_aut, ranking_index, rank) per monitor
    assumed to eventually hold; `negated` lists the G-subformulas assumed
    to fail.  True iff the conjunction of the assumed G-subformulas, their
    rank conjunctions, and the negated literals propositionally entails
    the tracker state.
    """
    positives = []
    for gform, ra, ridx, j in assumed:
        positives.append(gform)
        positives.append(rank_conjunction(ra, ridx, j))
    return fm.entails_all(positives, negated, state_formula)


def relevant_monitors(state_formula, gforms):
    """G-subformulas whose truth value still matters to the given formula."""
    out = []
    for g in gforms:
        if fm.substitute(state_formula, g, fm.TT) is not fm.substitute(
                state_formula, g, fm.FF):
            out.append(g)
    return out


def tracked_sets(tracker, gforms):
    """Monitor positions tracked per tracker state: relevant somewhere ahead."""
    n = len(tracker.states)
    rel = [frozenset(i for i, g in enumerate(gforms)
                     if fm.substitute(tracker.states[s], g, fm.TT)
                     is not fm.substitute(tracker.states[s], g, fm.FF))
           for s in range(n)]
    tracked = list(rel)
    changed = True
    while changed:
        changed = False
        for s in range(n):
            agg = tracked[s]
            for t in tracker.delta[s]:
                agg = agg | tracked[t]
            if agg != tracked[s]:
                tracked[s] = agg
                changed = True
    return [tuple(sorted(t)) for t in tracked]


def build_monitors(f, state_cap):
    monitors = []
    for g in fm.always_subformulas(f):
        token = build_token_automaton(g.sub, state_cap)
        monitors.append(Monitor(gform=g, body=g.sub,
                                rank_aut=build_rank_automaton(token, state_cap)))
    return monitors


def build_product(f, state_cap=1_000_000):
    """Synchronous product of all monitors' rank automata (no tracker).

    Returns (monitors, states, delta, letters); states are tuples of
    ranking indices aligned with the monitor list.
    """
    monitors = build_monitors(f, state_cap)
    letters = fm.letters_for(fm.atoms(f))
    for mon in monitors:
        mon.letter_map = [mon.rank_aut.letter_index(nu) for nu in letters]
    first = tuple(0 for _ in monitors)
    states, index, delta = [first], {first: 0}, []
    frontier = 0
    while frontier < len(states):
        st = states[frontier]
        frontier += 1
        row = []
        for l in range(len(letters)):
            nxt = tuple(mon.rank_aut.delta[r][mon.letter_map[l]]
                        for mon, r in zip(monitors, st))
            j = index.get(nxt)
            if j is None:
                j = len(states)
                if j >= state_cap:
                    raise CapExceeded(f"state cap {state_cap} exceeded")
                index[nxt] = j
                states.append(nxt)
            row.append(j)
        delta.append(row)
    return monitors, states, delta, letters


def _enumerate_disjuncts(monitors, cap):
    total = 0
    for bits in range(1 << len(monitors)):
        count = 1
        for i in range(len(monitors)):
            if bits >> i & 1:
                count *= monitors[i].rank_aut.max_rank
        total += count
        if total > cap:
            raise CapExceeded(f"disjunct cap {cap} exceeded")
    out = []
    for bits in range(1 << len(monitors)):
        assumed = tuple(i for i in range(len(monitors)) if bits >> i & 1)
        ranges = [range(1, monitors[i].rank_aut.max_rank + 1) for i in assumed]
        for ranks in itertools.product(*ranges):
            out.append(Disjunct(assumed=assumed, ranks=ranks))
    return out


def build_automaton(f, opts=None):
    """Compile a formula into a deterministic tGDRA recognizing it."""
    opts = opts or BuildOptions()
    t0 = time.perf_counter()
    monitors = build_monitors(f, opts.state_cap)
    tracker = build_tracker(f, opts.state_cap)
    gforms = [m.gform for m in monitors]
    if opts.relevance:
        tracked = tracked_sets(tracker, gforms)
    else:
        tracked = [tuple(range(len(monitors)))] * len(tracker.states)
    letters = tracker.letters
    for mon in monitors:
        mon.letter_map = [mon.rank_aut.letter_index(nu) for nu in letters]

    # reachable product of tracker and tracked monitors
    def successor(st, l):
        t2 = tracker.delta[st.tracker][l]
        pos2 = tracked[t2]
        old = dict(zip(tracked[st.tracker], st.rankings))
        ranks2 = tuple(
            monitors[p].rank_aut.delta[old[p]][monitors[p].letter_map[l]]
            for p in pos2)
        return ProductState(tracker=t2, rankings=ranks2)

    first = ProductState(tracker=0,
                         rankings=tuple(0 for _ in tracked[0]))
    states, index, delta = [first], {first: 0}, []
    frontier = 0
    while frontier < len(states):
        st = states[frontier]
        frontier += 1
        row = []
        for l in range(len(letters)):
            nxt = successor(st, l)
            j = index.get(nxt)
            if j is None:
                j = len(states)
                if j >= opts.state_cap:
                    raise CapExceeded(f"state cap {opts.state_cap} exceeded")
                index[nxt] = j
                states.append(nxt)
            row.append(j)
        delta.append(row)

    disjuncts = _enumerate_disjuncts(monitors, opts.disjunct_cap)

    # does `st` satisfy the guess of disjunct d? (the co-Buchi target set)
    guess_ok_cache = {}

    def guess_ok(si, d):
        key = (si, id(d))
        hit = guess_ok_cache.get(key)
        if hit is None:
            st = states[si]
            pos = tracked[st.tracker]
            if not set(d.assumed) <= set(pos):
                hit = False
            else:
                assumed = [(monitors[p].gform, monitors[p].rank_aut,
                            st.rankings[pos.index(p)], j)
                           for p, j in zip(d.assumed, d.ranks)]
                negated = [monitors[p].gform
                           for p in range(len(monitors))
                           if p not in d.assumed]
                hit = guess_entails(tracker.states[st.tracker],
                                    assumed, negated)
            guess_ok_cache[key] = hit
        return hit

    # per-transition marks, locally numbered (disjunct, 0=fin / 1+k=inf k)
    local_marks = [[set() for _ in letters] for _ in states]
    used_infs = [set() for _ in disjuncts]
    for si, st in enumerate(states):
        pos = tracked[st.tracker]
        posset = set(pos)
        for di, d in enumerate(disjuncts):
            if not set(d.assumed) <= posset:
                continue
            accs = [monitors[p].acceptance(
                        [monitors[q].gform for q in d.assumed])
                    for p in d.assumed]
            for l in range(len(letters)):
                cell = local_marks[si][l]
                for k, (p, j) in enumerate(zip(d.assumed, d.ranks)):
                    r = st.rankings[pos.index(p)]
                    ml = monitors[p].letter_map[l]
                    a = accs[k]
                    if a.fails[r][ml] or j in a.buys[r][ml]:
                        cell.add((di, 0))
                    if j in a.succeeds[r][ml]:
                        cell.add((di, 1 + k))
                        used_infs[di].add(1 + k)
                if not guess_ok(delta[si][l], d):
                    cell.add((di, 0))

    # prune disjuncts that can never fire
    keep = []
    for di, d in enumerate(disjuncts):
        if any(1 + k not in used_infs[di] for k in range(len(d.assumed))):
            continue
        if all((di, 0) in local_marks[si][l]
               for si in range(len(states)) for l in range(len(letters))):
            continue
        keep.append(di)
    renum = {}
    final_disjuncts = []
    num_sets = 0
    for di in keep:
        d = disjuncts[di]
        d.fin_id = num_sets
        d.inf_ids = tuple(num_sets + 1 + k for k in range(len(d.assumed)))
        num_sets += 1 + len(d.assumed)
        renum[di] = d
        final_disjuncts.append(d)
    marks = [[frozenset(renum[di].fin_id if k == 0 else renum[di].inf_ids[k - 1]
                        for (di, k) in cell if di in renum)
              for cell in row] for row in local_marks]

    # partition refinement over (successor class, marks) signatures
    if opts.reduce_states:
        classes = [0] * len(states)
        ncls = 1
        while True:
            sigs = {}
            nxtcls = [0] * len(states)
            for si in range(len(states)):
                sig = (classes[si],
                       tuple(classes[delta[si][l]] for l in range(len(letters))),
                       tuple(marks[si]))
                j = sigs.get(sig)
                if j is None:
                    j = len(sigs)
                    sigs[sig] = j
                nxtcls[si] = j
            if len(sigs) == ncls:
                break
            classes, ncls = nxtcls, len(sigs)
    else:
        classes = list(range(len(states)))
        ncls = len(states)

    # renumber classes in order of first appearance from the initial state
    order = {}

    def cname(c):
        if c not in order:
            order[c] = len(order)
        return order[c]

    reps = {}
    for si, c in enumerate(classes):
        reps.setdefault(c, si)
    queue = [classes[0]]
    cname(classes[0])
    qi = 0
    while qi < len(queue):
        c = queue[qi]
        qi += 1
        si = reps[c]
        for l in range(len(letters)):
            c2 = classes[delta[si][l]]
            if c2 not in order:
                cname(c2)
                queue.append(c2)

    n = len(order)
    out_states = [None] * n
    out_members = [[] for _ in range(n)]
    out_delta = [None] * n
    out_marks = [None] * n
    for si, c in enumerate(classes):
        if c in order:
            out_members[order[c]].append(states[si])
    for c in queue:
        i = order[c]
        si = reps[c]
        out_states[i] = states[si]
        out_delta[i] = [order[classes[delta[si][l]]] for l in range(len(letters))]
        out_marks[i] = list(marks[si])

    aut = RabinAutomaton(
        formula=f, atoms=fm.atoms(f), letters=letters, monitors=monitors,
        tracked=tracked, states=out_states, members=out_members,
        delta=out_delta, marks=out_marks, disjuncts=final_disjuncts,
        num_sets=num_sets, tracker_states=tracker.states)
    aut.build_ms = (time.perf_counter() - t0) * 1000.0
    return aut


def count_transitions(aut):
    """Edges after grouping letters by (source, target, acceptance marks)."""
    total = 0
    for si in range(len(aut.states)):
        groups = set()
        for l in range(len(aut.letters)):
            groups.add((aut.delta[si][l], aut.marks[si][l]))
        total += len(groups)
    return total


def stats(aut):
    return {
        "states": len(aut.states),
        "transitions": count_transitions(aut),
        "disjuncts": len(aut.disjuncts),
        "acceptance_sets": aut.num_sets,
        "build_ms": round(aut.build_ms, 3),
    }
