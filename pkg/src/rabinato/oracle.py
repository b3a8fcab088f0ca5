"""Independent ground truth on ultimately periodic words.

`evaluate` decides satisfaction of a formula on a lasso word by labelling
the finitely many distinct positions bottom-up per subformula; the
temporal operators are solved on the loop by iterating their one-step
unfolding to a fixpoint (at most period+1 sweeps), least for F/U and
greatest for G.  No automaton code is involved, so this is a genuinely
independent check for every construction in the package.

The module also runs deterministic automata on lassos: `run_loop` returns
the set of transitions traversed in the eventual cycle, from which
`accepts` decides a generalized Rabin condition and `rank_accepted`
the smallest accepting pair of a rank automaton.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import formula as fm


@dataclass(frozen=True)
class LassoWord:
    prefix: tuple   # frozensets
    period: tuple   # frozensets, nonempty

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("lasso period must be nonempty")

    def positions(self):
        return len(self.prefix) + len(self.period)

    def letter(self, i):
        m = len(self.prefix)
        return self.prefix[i] if i < m else self.period[(i - m) % len(self.period)]

    def __str__(self):
        fmt = lambda nu: "{" + ",".join(sorted(nu)) + "}"
        return ("".join(map(fmt, self.prefix)) + "(" +
                "".join(map(fmt, self.period)) + ")^w")


def lasso(prefix, period):
    to = lambda part: tuple(frozenset(nu) for nu in part)
    return LassoWord(to(prefix), to(period))


def evaluate(f, w):
    """Exact satisfaction of `w |= f` by positional labelling."""
    return _labels(f, w, {})[0]


def _labels(f, w, memo):
    got = memo.get(f.seq)
    if got is not None:
        return got
    m, n = len(w.prefix), len(w.period)
    total = m + n
    succ = lambda i: i + 1 if i + 1 < total else m
    k = f.kind
    if k == "tt":
        vals = [True] * total
    elif k == "ff":
        vals = [False] * total
    elif k == "ap":
        vals = [f.name in w.letter(i) for i in range(total)]
    elif k == "nap":
        vals = [f.name not in w.letter(i) for i in range(total)]
    elif k == "and":
        rows = [_labels(c, w, memo) for c in f.children]
        vals = [all(r[i] for r in rows) for i in range(total)]
    elif k == "or":
        rows = [_labels(c, w, memo) for c in f.children]
        vals = [any(r[i] for r in rows) for i in range(total)]
    elif k == "X":
        sub = _labels(f.sub, w, memo)
        vals = [sub[succ(i)] for i in range(total)]
    else:
        if k == "U":
            left = _labels(f.left, w, memo)
            right = _labels(f.right, w, memo)
            step = lambda i, nxt: right[i] or (left[i] and nxt)
            start = False
        elif k == "F":
            sub = _labels(f.sub, w, memo)
            step = lambda i, nxt: sub[i] or nxt
            start = False
        else:  # G
            sub = _labels(f.sub, w, memo)
            step = lambda i, nxt: sub[i] and nxt
            start = True
        vals = [start] * total
        for _ in range(n + 1):
            changed = False
            for i in range(total - 1, m - 1, -1):
                v = step(i, vals[succ(i)])
                if v != vals[i]:
                    vals[i] = v
                    changed = True
            if not changed:
                break
        for i in range(m - 1, -1, -1):
            vals[i] = step(i, vals[i + 1])
    memo[f.seq] = vals
    return vals


# ------------------------------------------------------------------ automata

def run_loop(aut, w):
    """Transitions traversed in the eventual cycle of a deterministic run.

    The automaton needs `initial`, `delta[state][letter_index]`, and a
    `letter_index(letter)` projection; transitions are (state, letter_index)
    pairs.  The run reads the prefix, then whole periods until the state at
    period phase 0 repeats; the cycle's transition set is returned.
    """
    lidx = [aut.letter_index(nu) for nu in w.period]
    state = aut.initial
    for nu in w.prefix:
        state = aut.delta[state][aut.letter_index(nu)]
    seen = {state: 0}
    trips = []
    while True:
        trip = []
        for l in lidx:
            trip.append((state, l))
            state = aut.delta[state][l]
        trips.append(trip)
        if state in seen:
            start = seen[state]
            loop = set()
            for t in trips[start:]:
                loop.update(t)
            return frozenset(loop)
        seen[state] = len(trips)


def accepts(aut, w):
    """Generalized Rabin acceptance of an automaton built by the compiler."""
    loop = run_loop(aut, w)
    marks = set()
    for t in loop:
        marks.update(aut.marks[t[0]][t[1]])
    for d in aut.disjuncts:
        if d.fin_id in marks:
            continue
        if all(i in marks for i in d.inf_ids):
            return True
    return False


def rank_accepted(ra, acceptance, w):
    """Smallest rank whose pair accepts `w`, or None if rejected."""
    loop = run_loop(ra, w)
    for j in range(1, ra.max_rank + 1):
        fin_hit = any(acceptance.fails[r][l] or j in acceptance.buys[r][l]
                      for (r, l) in loop)
        inf_hit = any(j in acceptance.succeeds[r][l] for (r, l) in loop)
        if not fin_hit and inf_hit:
            return j
    return None


# ----------------------------------------------------------------- sampling

_LEAF = ("ap", "nap", "tt", "ff")


def random_formula(rng, max_nodes, names):
    """Reproducible random NNF formula, biased towards U and G nesting."""
    if isinstance(rng, int):
        rng = random.Random(rng)

    def gen(budget):
        if budget <= 1:
            k = rng.choices(_LEAF, weights=(10, 5, 1, 1))[0]
            if k == "ap":
                return fm.ap(rng.choice(names))
            if k == "nap":
                return fm.nap(rng.choice(names))
            return fm.TT if k == "tt" else fm.FF
        op = rng.choices(("and", "or", "X", "F", "G", "U", "leaf"),
                         weights=(14, 14, 8, 10, 18, 22, 6))[0]
        if op == "leaf":
            return gen(1)
        if op in ("X", "F", "G"):
            sub = gen(budget - 1)
            return {"X": fm.nxt, "F": fm.ever, "G": fm.alws}[op](sub)
        lb = rng.randint(1, budget - 2) if budget > 2 else 1
        left, right = gen(lb), gen(budget - 1 - lb)
        if op == "and":
            return fm.conj([left, right])
        if op == "or":
            return fm.disj([left, right])
        return fm.until(left, right)

    return gen(max_nodes)


def random_lasso(rng, max_prefix, max_period, names):
    """Reproducible random lasso word over subsets of `names`."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    draw = lambda: frozenset(n for n in names if rng.random() < 0.5)
    prefix = [draw() for _ in range(rng.randint(0, max_prefix))]
    period = [draw() for _ in range(rng.randint(1, max_period))]
    return LassoWord(tuple(prefix), tuple(period))
