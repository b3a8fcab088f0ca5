"""LTL formulas in negation normal form, interned up to propositional equivalence.

Formulas are immutable nodes hash-consed by an exact propositional signature:
the set of propositional atoms (literals over the proposition names plus
maximal modal subterms, treated as opaque variables) together with the truth
table of the formula over those atoms, after eliminating variables the table
does not depend on.  Two formulas are propositionally equivalent iff they are
the same Python object.

The module also houses the one-letter derivative `after` (the obligation that
must hold of the rest of the word after reading one letter) and its variant
`after_frozen` that leaves G-subformulas untouched, the reachable-formula
closure used to build every automaton in the package, substitution, and the
propositional entailment oracle backing all acceptance tests.

The interning tables are module-level and unsynchronized: formula
construction must stay confined to one thread.  Interned formulas are
immutable and safe to share across threads.
"""

from __future__ import annotations

ATOM_CAP = 20  # 2**ATOM_CAP truth-table rows at most


class CapExceeded(Exception):
    """A configurable resource cap (states, disjuncts, atoms) was hit."""


class Formula:
    __slots__ = ("kind", "name", "sub", "left", "right", "children",
                 "skey", "vars", "table", "seq", "_apset", "_str")

    def __init__(self, kind, name=None, sub=None, left=None, right=None,
                 children=()):
        self.kind = kind          # tt ff ap nap X F G U and or
        self.name = name          # ap / nap
        self.sub = sub            # X F G
        self.left = left          # U
        self.right = right
        self.children = children  # and / or, sorted, length >= 2
        self.skey = _skey_of(self)
        self.vars = None          # set at intern time
        self.table = None
        self.seq = -1
        self._apset = None
        self._str = None

    def __repr__(self):
        return f"Formula({pretty(self)})"

    def __str__(self):
        return pretty(self)


def _skey_of(f):
    if f.kind == "ap":
        return ("a", f.name)
    if f.kind == "nap":
        return ("n", f.name)
    if f.kind in ("tt", "ff"):
        return (f.kind,)
    if f.kind in ("X", "F", "G"):
        return (f.kind, f.sub.skey)
    if f.kind == "U":
        return ("U", f.left.skey, f.right.skey)
    return (f.kind, tuple(c.skey for c in f.children))


_struct: dict = {}   # skey -> node, for literals and modal atoms
_sem: dict = {}      # (vars, table) -> node, for propositional combinations
_atoms_cache: dict = {}
_seq = 0


def _next_seq():
    global _seq
    _seq += 1
    return _seq - 1


TT = Formula("tt")
FF = Formula("ff")
TT.vars, TT.table = (), 1
FF.vars, FF.table = (), 0
TT.seq = _next_seq()
FF.seq = _next_seq()


def _var_key(v):
    # v is ("p", name) for a proposition or ("m", node) for a modal atom
    if v[0] == "p":
        return (0, v[1])
    return (1, v[1].skey)


def _collect_vars(f, acc):
    if f.kind in ("and", "or"):
        for c in f.children:
            _collect_vars(c, acc)
    elif f.kind in ("ap", "nap"):
        acc.add(("p", f.name))
    elif f.kind not in ("tt", "ff"):
        acc.add(("m", f))


_col_cache: dict = {}


def _var_column(i, k):
    # bitmask over 2**k assignment rows where variable i is true
    key = (i, k)
    hit = _col_cache.get(key)
    if hit is None:
        hit = ((1 << (1 << i)) - 1) << (1 << i)
        width = 1 << (i + 1)
        total = 1 << k
        while width < total:
            hit |= hit << width
            width <<= 1
        _col_cache[key] = hit
    return hit


def _eval_mask(f, cols, full, memo):
    # variables missing from `cols` are fixed to false; callers only omit
    # columns for variables the table provably does not depend on
    m = memo.get(f.seq if f.seq >= 0 else id(f))
    if m is not None:
        return m
    k = f.kind
    if k == "tt":
        m = full
    elif k == "ff":
        m = 0
    elif k == "ap":
        m = cols.get(("p", f.name), 0)
    elif k == "nap":
        m = full ^ cols.get(("p", f.name), 0)
    elif k == "and":
        m = full
        for c in f.children:
            m &= _eval_mask(c, cols, full, memo)
    elif k == "or":
        m = 0
        for c in f.children:
            m |= _eval_mask(c, cols, full, memo)
    else:
        m = cols.get(("m", f), 0)
    memo[f.seq if f.seq >= 0 else id(f)] = m
    return m


def _table_over(f, vs):
    k = len(vs)
    full = (1 << (1 << k)) - 1
    cols = {v: _var_column(i, k) for i, v in enumerate(vs)}
    return _eval_mask(f, cols, full, {}), full


def _semantic_signature(f):
    acc = set()
    _collect_vars(f, acc)
    vs = sorted(acc, key=_var_key)
    if len(vs) > ATOM_CAP:
        raise CapExceeded(f"formula exceeds the {ATOM_CAP} propositional atom cap")
    table, full = _table_over(f, vs)
    essential = []
    for i, v in enumerate(vs):
        low = full ^ _var_column(i, len(vs))  # rows with variable i false
        if ((table >> (1 << i)) ^ table) & low:
            essential.append(v)
    if len(essential) < len(vs):
        vs = essential
        table, _ = _table_over(f, vs)
    sigvars = tuple(v if v[0] == "p" else ("m", v[1].seq) for v in vs)
    return (sigvars, table), vs


def _finish(candidate):
    """Intern a literal or modal node: identity is structural."""
    hit = _struct.get(candidate.skey)
    if hit is not None:
        return hit
    if candidate.kind == "ap":
        var, table = ("p", candidate.name), 0b10
    elif candidate.kind == "nap":
        var, table = ("p", candidate.name), 0b01
    else:
        var, table = ("m", candidate), 0b10
    candidate.vars = (var,)
    candidate.table = table
    candidate.seq = _next_seq()
    _struct[candidate.skey] = candidate
    sigvar = var if var[0] == "p" else ("m", candidate.seq)
    _sem[((sigvar,), table)] = candidate
    return candidate


def _finish_nary(candidate):
    """Intern an and/or node by its exact propositional signature."""
    sig, vs = _semantic_signature(candidate)
    if not vs:
        return TT if sig[1] == 1 else FF
    hit = _sem.get(sig)
    if hit is not None:
        return hit
    candidate.vars = tuple(vs)
    candidate.table = sig[1]
    candidate.seq = _next_seq()
    _sem[sig] = candidate
    return candidate


# ---------------------------------------------------------------- constructors

def ap(name):
    return _finish(Formula("ap", name=name))


def nap(name):
    return _finish(Formula("nap", name=name))


def conj(items):
    return _nary("and", items, TT, FF)


def disj(items):
    return _nary("or", items, FF, TT)


def _nary(kind, items, neutral, absorbing):
    flat = []
    seen = set()
    stack = list(items)
    while stack:
        f = stack.pop()
        if f is absorbing:
            return absorbing
        if f is neutral:
            continue
        if f.kind == kind:
            stack.extend(f.children)
            continue
        if f.seq not in seen:
            seen.add(f.seq)
            flat.append(f)
    if not flat:
        return neutral
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=lambda g: g.skey)
    return _finish_nary(Formula(kind, children=tuple(flat)))


def nxt(sub):
    if sub is TT or sub is FF:
        return sub
    return _finish(Formula("X", sub=sub))


def ever(sub):
    if sub is TT or sub is FF:
        return sub
    if sub.kind == "F":
        return sub
    return _finish(Formula("F", sub=sub))


def alws(sub):
    if sub is TT or sub is FF:
        return sub
    if sub.kind == "G":
        return sub
    return _finish(Formula("G", sub=sub))


def until(left, right):
    if right is TT or right is FF:
        return right
    if left is FF:
        return right
    if left is TT:
        return ever(right)
    return _finish(Formula("U", left=left, right=right))


def negate(f):
    """Negation-normal-form dual.  Raises ValueError on U (no release operator)."""
    k = f.kind
    if k == "tt":
        return FF
    if k == "ff":
        return TT
    if k == "ap":
        return nap(f.name)
    if k == "nap":
        return ap(f.name)
    if k == "and":
        return disj([negate(c) for c in f.children])
    if k == "or":
        return conj([negate(c) for c in f.children])
    if k == "X":
        return nxt(negate(f.sub))
    if k == "F":
        return alws(negate(f.sub))
    if k == "G":
        return ever(negate(f.sub))
    raise ValueError("negation of an until-formula has no NNF in this syntax")


# ---------------------------------------------------------------- derivatives

_after_cache: dict = {}


def after(f, letter):
    """Obligation left of `f` once a letter (set of true propositions) is read."""
    return _after(f, letter, False)


def after_frozen(f, letter):
    """Like `after`, but G-subformulas stay frozen instead of unfolding."""
    return _after(f, letter, True)


def _after(f, letter, frozen):
    key = (f.seq, letter, frozen)
    hit = _after_cache.get(key)
    if hit is not None:
        return hit
    k = f.kind
    if k in ("tt", "ff"):
        out = f
    elif k == "ap":
        out = TT if f.name in letter else FF
    elif k == "nap":
        out = FF if f.name in letter else TT
    elif k == "and":
        out = conj([_after(c, letter, frozen) for c in f.children])
    elif k == "or":
        out = disj([_after(c, letter, frozen) for c in f.children])
    elif k == "X":
        out = f.sub
    elif k == "F":
        out = disj([_after(f.sub, letter, frozen), f])
    elif k == "G":
        out = f if frozen else conj([_after(f.sub, letter, frozen), f])
    else:  # U
        out = disj([_after(f.right, letter, frozen),
                    conj([_after(f.left, letter, frozen), f])])
    _after_cache[key] = out
    return out


def atoms(f):
    """Sorted tuple of proposition names occurring anywhere in the formula."""
    hit = _atoms_cache.get(f.seq)
    if hit is not None:
        return hit
    k = f.kind
    if k in ("tt", "ff"):
        out = ()
    elif k in ("ap", "nap"):
        out = (f.name,)
    elif k in ("and", "or"):
        out = tuple(sorted(set().union(*[atoms(c) for c in f.children])))
    elif k == "U":
        out = tuple(sorted(set(atoms(f.left)) | set(atoms(f.right))))
    else:
        out = atoms(f.sub)
    _atoms_cache[f.seq] = out
    return out


def letters_for(names):
    """All subsets of the given proposition names, in a fixed order."""
    names = tuple(names)
    out = []
    for bits in range(1 << len(names)):
        out.append(frozenset(n for i, n in enumerate(names) if bits >> i & 1))
    return out


def reachable(f, step, cap=1_000_000, alphabet=None):
    """BFS closure of `f` under a one-letter stepper, deduplicated by interning.

    Returns (states, delta, letters) with delta[state][letter] as indices.
    """
    letters = letters_for(atoms(f) if alphabet is None else alphabet)
    states = [f]
    index = {f.seq: 0}
    delta = []
    frontier = 0
    while frontier < len(states):
        g = states[frontier]
        frontier += 1
        row = []
        for nu in letters:
            h = step(g, nu)
            j = index.get(h.seq)
            if j is None:
                j = len(states)
                if j >= cap:
                    raise CapExceeded(f"state cap {cap} exceeded")
                index[h.seq] = j
                states.append(h)
            row.append(j)
        delta.append(row)
    return states, delta, letters


def always_subformulas(f):
    """All G-rooted subterms, innermost first (dependencies before dependents)."""
    out = []
    seen = set()

    def walk(g):
        if g.seq in seen:
            return
        seen.add(g.seq)
        k = g.kind
        if k in ("and", "or"):
            for c in g.children:
                walk(c)
        elif k in ("X", "F", "G"):
            walk(g.sub)
        elif k == "U":
            walk(g.left)
            walk(g.right)
        if k == "G":
            out.append(g)

    walk(f)
    return out


def substitute(f, target, value):
    """Replace every occurrence of `target` (a G-subformula) by tt or ff."""
    memo = {}

    def go(g):
        if g is target:
            return value
        hit = memo.get(g.seq)
        if hit is not None:
            return hit
        k = g.kind
        if k in ("tt", "ff", "ap", "nap"):
            out = g
        elif k == "and":
            out = conj([go(c) for c in g.children])
        elif k == "or":
            out = disj([go(c) for c in g.children])
        elif k == "X":
            out = nxt(go(g.sub))
        elif k == "F":
            out = ever(go(g.sub))
        elif k == "G":
            out = alws(go(g.sub))
        else:
            out = until(go(g.left), go(g.right))
        memo[g.seq] = out
        return out

    return go(f)


# ---------------------------------------------------------------- entailment

def prop_atoms(f):
    """The formula's propositional atoms: literals and maximal modal subterms."""
    return tuple(ap(v[1]) if v[0] == "p" else v[1] for v in f.vars)


def canonical(f):
    """Canonical key; equal keys iff propositionally equivalent (== interning)."""
    return (tuple(v if v[0] == "p" else ("m", v[1].seq) for v in f.vars), f.table)


def prop_entails(antecedent, consequent, assume_false=()):
    """Does the antecedent propositionally imply the consequent?

    `assume_false` lists modal atoms additionally constrained to false
    (negative literals over the atom set).
    """
    return entails_all([antecedent], assume_false, consequent)


def entails_all(positives, negated, target):
    """(/\\ positives /\\ /\\ !negated) |=_p target, over the shared atom set."""
    acc = set()
    for g in positives:
        _collect_vars(g, acc)
    for g in negated:
        acc.add(("m", g))
    _collect_vars(target, acc)
    vs = sorted(acc, key=_var_key)
    if len(vs) > ATOM_CAP:
        raise CapExceeded(f"entailment query exceeds the {ATOM_CAP} atom cap")
    k = len(vs)
    full = (1 << (1 << k)) - 1
    cols = {v: _var_column(i, k) for i, v in enumerate(vs)}
    memo = {}
    ante = full
    for g in positives:
        ante &= _eval_mask(g, cols, full, memo)
    for g in negated:
        ante &= full ^ cols[("m", g)]
    return ante & ~_eval_mask(target, cols, full, memo) == 0


# ---------------------------------------------------------------- printing

_PREC = {"or": 1, "and": 2, "U": 3, "X": 4, "F": 4, "G": 4,
         "ap": 5, "nap": 5, "tt": 5, "ff": 5}


def pretty(f):
    if f._str is None:
        f._str = _pretty(f)
    return f._str


def _wrap(f, minimum):
    s = pretty(f)
    return f"({s})" if _PREC[f.kind] < minimum else s


def _pretty(f):
    k = f.kind
    if k in ("tt", "ff"):
        return k
    if k == "ap":
        return f.name
    if k == "nap":
        return "!" + f.name
    if k == "and":
        return " & ".join(_wrap(c, 2) for c in f.children)
    if k == "or":
        return " | ".join(_wrap(c, 1) for c in f.children)
    if k == "U":
        # right-associative: parenthesize a U-shaped left operand
        ls = pretty(f.left) if _PREC[f.left.kind] > 3 else f"({pretty(f.left)})"
        rs = _wrap(f.right, 3)
        return f"{ls} U {rs}"
    return k + " " + _wrap(f.sub, 4)
