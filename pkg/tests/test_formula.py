import random

import pytest

from rabinato import formula as fm
from rabinato import oracle as oc
from rabinato.parser import parse

A, B, C = fm.ap("a"), fm.ap("b"), fm.ap("c")


def letters(*names):
    return frozenset(names)


# ------------------------------------------------------------- canonical keys

def test_canonical_idempotence():
    assert fm.conj([A, A]) is A
    assert fm.canonical(fm.conj([A, A])) == fm.canonical(A)


def test_canonical_absorption():
    buc = fm.until(B, C)
    assert fm.conj([fm.disj([A, buc]), buc]) is buc


def test_always_differs_from_unfolding():
    # G a and a & G a are distinct propositional combinations
    assert fm.alws(A) is not fm.conj([A, fm.alws(A)])


def test_constant_collapse():
    assert fm.disj([A, fm.nap("a")]) is fm.TT
    assert fm.conj([A, fm.nap("a")]) is fm.FF
    assert fm.until(A, fm.FF) is fm.FF
    assert fm.ever(fm.TT) is fm.TT
    assert fm.alws(fm.alws(A)) is fm.alws(A)


def test_commuted_constructions_intern_identically():
    f1 = fm.disj([fm.conj([A, B]), C])
    f2 = fm.disj([C, fm.conj([B, A])])
    assert f1 is f2


# ---------------------------------------------------------------- entailment

def test_prop_entails_basics():
    ga = fm.alws(A)
    assert fm.prop_entails(ga, ga)
    assert fm.prop_entails(ga, fm.TT)
    assert fm.prop_entails(fm.FF, fm.until(A, B))
    assert not fm.prop_entails(ga, A)  # modal atoms are opaque
    assert not fm.prop_entails(fm.TT, ga)


def test_prop_entails_with_negative_modal_literals():
    ga, gb = fm.alws(A), fm.alws(B)
    target = fm.disj([ga, gb])
    assert fm.prop_entails(ga, target, assume_false=[gb])
    assert not fm.prop_entails(fm.TT, target, assume_false=[ga, gb])
    # an inconsistent antecedent entails anything
    assert fm.prop_entails(ga, fm.FF, assume_false=[ga])


def test_prop_atom_sets():
    f = fm.conj([A, fm.disj([fm.nap("a"), fm.until(B, C)])])
    names = [str(x) for x in fm.prop_atoms(f)]
    assert names == ["a", "b U c"]
    for x in fm.prop_atoms(f):
        assert x.kind not in ("and", "or", "tt", "ff")


# --------------------------------------------------------------- derivatives

def test_after_first_example():
    phi = parse("a | b U c")
    assert fm.after(phi, letters("a")) is fm.TT
    assert fm.after(phi, letters()) is fm.FF
    assert fm.after(phi, letters("b")) is fm.until(B, C)
    assert fm.after(fm.nxt(phi), letters()) is phi


def test_after_frozen_contrast():
    psi = parse("G(a & X !a)")
    phi = fm.until(psi, fm.nap("a"))
    assert fm.after_frozen(phi, letters("a")) is fm.conj([psi, phi])
    assert fm.after(phi, letters("a")) is fm.conj([fm.nap("a"), psi, phi])
    assert fm.after_frozen(fm.alws(A), letters()) is fm.alws(A)
    assert fm.after_frozen(fm.alws(A), letters("a")) is fm.alws(A)


def test_reachable_sets():
    phi = parse("a | b U c")
    states, _, lets = fm.reachable(phi, fm.after)
    assert set(states) == {phi, fm.until(B, C), fm.TT, fm.FF}
    assert len(lets) == 8
    states, _, _ = fm.reachable(fm.TT, fm.after)
    assert states == [fm.TT]
    frozen, _, _ = fm.reachable(parse("G(a & X !a)"), fm.after_frozen)
    assert frozen == [parse("G(a & X !a)")]


def test_reachable_cap():
    with pytest.raises(fm.CapExceeded):
        fm.reachable(parse("a | b U c"), fm.after, cap=2)


def test_always_subformulas():
    psi = parse("G(a & X !a)")
    phi = fm.alws(fm.until(psi, fm.nap("a")))
    assert fm.always_subformulas(phi) == [psi, phi]
    assert fm.always_subformulas(parse("a U b")) == []
    nested = parse("G(G(a & G b))")
    assert [str(g) for g in fm.always_subformulas(nested)] == \
        ["G b", str(nested)]


def test_substitute():
    s = parse("G F a | (b & G F c)")
    gfc = parse("G F c")
    assert fm.substitute(s, gfc, fm.TT) is fm.disj([parse("G F a"), B])
    assert fm.substitute(s, gfc, fm.FF) is parse("G F a")
    assert fm.substitute(s, parse("G b"), fm.TT) is s
    assert fm.substitute(fm.conj([fm.alws(A), B]), fm.alws(A), fm.FF) is fm.FF
    # substitution reaches below modalities
    assert fm.substitute(parse("F G a"), fm.alws(A), fm.TT) is fm.TT


# ---------------------------------------------------------------- invariants

def test_after_outputs_stay_in_nnf():
    rng = random.Random(5)
    kinds = {"tt", "ff", "ap", "nap", "and", "or", "X", "F", "G", "U"}

    def walk(f):
        assert f.kind in kinds
        for c in f.children:
            walk(c)
        if f.sub is not None:
            walk(f.sub)
        if f.left is not None:
            walk(f.left)
            walk(f.right)

    for _ in range(200):
        f = oc.random_formula(rng, 10, ("a", "b"))
        for nu in fm.letters_for(("a", "b")):
            walk(fm.after(f, nu))
            walk(fm.after_frozen(f, nu))


def test_canonical_is_congruent_for_after():
    rng = random.Random(6)
    for _ in range(200):
        f = oc.random_formula(rng, 10, ("a", "b"))
        dup = fm.conj([f, f, fm.disj([f, fm.conj([f, B])])])  # absorbs to f
        assert dup is f
        for nu in fm.letters_for(("a", "b")):
            assert fm.after(dup, nu) is fm.after(f, nu)


def test_gfree_satisfaction_reduces_to_reaching_tt():
    # on a lasso, satisfaction of a G-free formula is equivalent to the
    # derivative sequence hitting tt before it cycles
    rng = random.Random(7)
    names = ("a", "b")
    checked = 0
    while checked < 300:
        f = oc.random_formula(rng, 8, names)
        if fm.always_subformulas(f):
            continue
        w = oc.random_lasso(rng, 3, 3, names)
        cur = f
        seen = set()
        i = 0
        hit = False
        while True:
            if cur is fm.TT:
                hit = True
                break
            phase = (i - len(w.prefix)) % len(w.period) if i >= len(w.prefix) else i
            key = (cur.seq, i if i < len(w.prefix) else len(w.prefix) + phase)
            if key in seen:
                break
            seen.add(key)
            cur = fm.after(cur, w.letter(i))
            i += 1
        assert hit == oc.evaluate(f, w)
        checked += 1


def test_reach_is_bounded_on_fixtures():
    for text in ["a | b U c", "G(a | F b)", "F G a | G F b",
                 "(G F a | F G b) & (G F c | F G (d | X e))"]:
        states, _, _ = fm.reachable(parse(text), fm.after, cap=10_000)
        assert len(states) <= 64
