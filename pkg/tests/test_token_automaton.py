import random

from rabinato import formula as fm
from rabinato import oracle as oc
from rabinato.parser import parse
from rabinato.token_automaton import accepting_states, build_token_automaton


def state_index(aut, f):
    return aut.states.index(f)


def step(aut, f, *names):
    return aut.states[aut.delta[state_index(aut, f)][aut.letter_index(frozenset(names))]]


def test_structure_for_until_disjunction():
    phi = parse("a | b U c")
    aut = build_token_automaton(phi)
    buc = parse("b U c")
    assert set(aut.states) == {phi, buc, fm.TT, fm.FF}
    assert step(aut, phi, "a") is fm.TT
    assert step(aut, phi, "b") is buc
    assert step(aut, phi) is fm.FF
    assert step(aut, buc, "c") is fm.TT
    assert step(aut, buc, "b") is buc
    assert {aut.states[q] for q in aut.sinks} == {fm.TT, fm.FF}


def test_structure_for_next_negation():
    psi = parse("a & X !a")
    aut = build_token_automaton(psi)
    assert set(aut.states) == {psi, fm.nap("a"), fm.TT, fm.FF}
    assert step(aut, psi, "a") is fm.nap("a")
    assert step(aut, psi) is fm.FF
    assert step(aut, fm.nap("a")) is fm.TT
    assert step(aut, fm.nap("a"), "a") is fm.FF


def test_structure_for_next_until():
    psi = parse("a & X(b U c)")
    aut = build_token_automaton(psi)
    assert set(aut.states) == {psi, parse("b U c"), fm.TT, fm.FF}


def test_accepting_states_without_assumptions():
    aut = build_token_automaton(parse("a | b U c"))
    assert {aut.states[q] for q in accepting_states(aut, [])} == {fm.TT}


def test_accepting_states_with_assumptions():
    psi = parse("G(a & X !a)")
    phi = fm.until(psi, fm.nap("a"))
    aut = build_token_automaton(phi)
    with_psi = {aut.states[q] for q in accepting_states(aut, [psi])}
    without = {aut.states[q] for q in accepting_states(aut, [])}
    assert with_psi == {psi, fm.TT}
    assert without == {fm.TT}


def test_frozen_always_state_is_a_sink():
    psi = parse("G(a & X !a)")
    aut = build_token_automaton(fm.until(psi, fm.nap("a")))
    assert state_index(aut, psi) in aut.sinks


def test_transition_structure_is_shared_across_assumptions():
    psi = parse("G(a & X !a)")
    aut = build_token_automaton(fm.until(psi, fm.nap("a")))
    f1 = accepting_states(aut, [psi])
    f2 = accepting_states(aut, [])
    assert f1 != f2  # same structure, different accepting sets


def test_accepting_sets_are_closed_under_delta():
    rng = random.Random(11)
    for _ in range(60):
        f = oc.random_formula(rng, 9, ("a", "b"))
        aut = build_token_automaton(f)
        gs = fm.always_subformulas(f)
        for bits in range(1 << min(len(gs), 3)):
            assumed = [g for i, g in enumerate(gs) if bits >> i & 1]
            acc = accepting_states(aut, assumed)
            for q in acc:
                for t in aut.delta[q]:
                    assert t in acc


def test_false_sink_never_accepting():
    rng = random.Random(12)
    for _ in range(60):
        f = oc.random_formula(rng, 9, ("a", "b"))
        aut = build_token_automaton(f)
        if fm.FF not in aut.states:
            continue
        gs = fm.always_subformulas(f)
        acc = accepting_states(aut, gs)
        assert aut.states.index(fm.FF) not in acc
