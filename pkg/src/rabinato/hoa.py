"""HOA v1 and Graphviz emitters, plus a reader for round-trip checks.

Transition labels are emitted as irredundant sums of products over the
atomic propositions: letters are grouped per (source, target, acceptance
marks), the group's minterms are merged into prime implicants, and a
greedy deterministic cover is printed.  All output is byte-deterministic
for a fixed automaton.
"""

from __future__ import annotations

import re

from .compiler import RabinAutomaton
from .rank_automaton import apply_acceptance, ranking_label


# --------------------------------------------------------------- label logic

def _merge_once(implicants):
    # implicant: (care_mask, value); try to drop one care bit of a pair
    out = set()
    merged = set()
    ids = sorted(implicants)
    for i, (c1, v1) in enumerate(ids):
        for c2, v2 in ids[i + 1:]:
            if c1 != c2:
                continue
            diff = v1 ^ v2
            if diff and diff & (diff - 1) == 0:
                out.add((c1 & ~diff, v1 & ~diff))
                merged.add((c1, v1))
                merged.add((c2, v2))
    out.update(set(ids) - merged)
    return out, bool(merged)


def minimal_products(minterms, nbits):
    """Deterministic irredundant sum-of-products cover of a minterm set."""
    full = (1 << nbits) - 1
    current = {(full, m) for m in minterms}
    while True:
        current, merged = _merge_once(current)
        if not merged:
            break
    primes = sorted(current)

    def covers(imp, m):
        care, val = imp
        return m & care == val

    uncovered = set(minterms)
    chosen = []
    while uncovered:
        best = max(primes, key=lambda imp: (sum(covers(imp, m) for m in uncovered),
                                            -bin(imp[0]).count("1"),
                                            [-imp[0], -imp[1]]))
        chosen.append(best)
        uncovered -= {m for m in uncovered if covers(best, m)}
    return sorted(chosen)


def product_text(imp, names, negate="!", conj=" & ", true="t"):
    care, val = imp
    parts = []
    for i, name in enumerate(names):
        if care >> i & 1:
            parts.append(name if val >> i & 1 else negate + name)
    return conj.join(parts) if parts else true


def label_text(minterms, names, **kw):
    if len(minterms) == 1 << len(names):
        return kw.get("true", "t")
    prods = minimal_products(sorted(minterms), len(names))
    return " | ".join(product_text(p, names, **kw) for p in prods)


def _edge_groups(aut, state):
    groups = {}
    for l in range(len(aut.letters)):
        key = (aut.delta[state][l], aut.marks[state][l])
        groups.setdefault(key, []).append(l)
    return sorted(groups.items(),
                  key=lambda kv: (kv[0][0], sorted(kv[0][1]), kv[1][0]))


# ----------------------------------------------------------------------- HOA

def emit_hoa(aut: RabinAutomaton) -> str:
    names = [str(i) for i in range(len(aut.atoms))]
    lines = ["HOA: v1"]
    lines.append(f'name: "{aut.formula}"')
    lines.append(f"States: {len(aut.states)}")
    lines.append("Start: 0")
    lines.append("AP: " + " ".join([str(len(aut.atoms))] +
                                   [f'"{a}"' for a in aut.atoms]))
    if aut.disjuncts:
        sizes = " ".join(str(len(d.inf_ids)) for d in aut.disjuncts)
        lines.append(f"acc-name: generalized-Rabin {len(aut.disjuncts)} {sizes}")
        terms = []
        for d in aut.disjuncts:
            parts = [f"Fin({d.fin_id})"] + [f"Inf({i})" for i in d.inf_ids]
            terms.append(" & ".join(parts))
        body = " | ".join(f"({t})" if len(aut.disjuncts) > 1 else t
                          for t in terms)
        lines.append(f"Acceptance: {aut.num_sets} {body}")
    else:
        lines.append("acc-name: none")
        lines.append("Acceptance: 0 f")
    lines.append("properties: trans-labels explicit-labels trans-acc "
                 "deterministic complete")
    lines.append("--BODY--")
    for s in range(len(aut.states)):
        lines.append(f'State: {s} "{aut.state_label(s)}"')
        for (target, marks), letters in _edge_groups(aut, s):
            label = label_text(letters, names)
            acc = " {" + " ".join(map(str, sorted(marks))) + "}" if marks else ""
            lines.append(f"[{label}] {target}{acc}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------- dot

def emit_dot(aut) -> str:
    if isinstance(aut, RabinAutomaton):
        return _dot_rabin(aut)
    return _dot_rank(aut)


def _dot_rabin(aut: RabinAutomaton) -> str:
    lines = ["digraph automaton {", "  rankdir=LR;",
             '  node [shape=box, style=rounded];',
             '  init [shape=point, label=""];', "  init -> s0;"]
    for s in range(len(aut.states)):
        lines.append(f'  s{s} [label="{aut.state_label(s)}"];')
    for s in range(len(aut.states)):
        for (target, marks), letters in _edge_groups(aut, s):
            label = label_text(letters, list(aut.atoms))
            if marks:
                label += " {" + ",".join(map(str, sorted(marks))) + "}"
            lines.append(f'  s{s} -> s{target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_rank(ra, acceptance=None) -> str:
    if acceptance is None:
        acceptance = apply_acceptance(ra, ())
    names = list(ra.token.atoms)
    lines = ["digraph automaton {", "  rankdir=LR;",
             '  node [shape=box, style=rounded];',
             '  init [shape=point, label=""];', "  init -> s0;"]
    for r in range(len(ra.rankings)):
        lines.append(f'  s{r} [label="{ranking_label(ra, r)}"];')
    for r in range(len(ra.rankings)):
        groups = {}
        for l in range(len(ra.letters)):
            flags = (acceptance.fails[r][l], acceptance.succeeds[r][l],
                     acceptance.buys[r][l])
            groups.setdefault((ra.delta[r][l], flags), []).append(l)
        for (target, flags), letters in sorted(
                groups.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), kv[1][0])):
            label = label_text(letters, names)
            notes = []
            if flags[0]:
                notes.append("fail")
            notes += [f"succ({j})" for j in sorted(flags[1])]
            notes += [f"buy({j})" for j in sorted(flags[2])]
            if notes:
                label += "  " + ",".join(notes)
            lines.append(f'  s{r} -> s{target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- reader

class HoaDocument:
    def __init__(self):
        self.states = 0
        self.start = 0
        self.aps = []
        self.acceptance_sets = 0
        self.acceptance = ""
        self.edges = {}   # state -> list of (label, target, frozenset marks)

    def letter_transitions(self):
        """Expand labels: (state, letter bitmask) -> (target, marks)."""
        out = {}
        k = len(self.aps)
        for s, edges in self.edges.items():
            for label, target, marks in edges:
                for m in range(1 << k):
                    if _eval_label(label, m):
                        key = (s, m)
                        if key in out:
                            raise ValueError(f"nondeterministic edge at {key}")
                        out[key] = (target, marks)
        for s in self.edges:
            for m in range(1 << k):
                if (s, m) not in out:
                    raise ValueError(f"incomplete state {s} on letter {m}")
        return out


def _eval_label(label, letter_bits):
    pos = 0
    text = label

    def parse_or():
        nonlocal pos
        v = parse_and()
        while peek() == "|":
            take()
            v = parse_and() or v
        return v

    def parse_and():
        nonlocal pos
        v = parse_not()
        while peek() == "&":
            take()
            v = parse_not() and v
        return v

    def parse_not():
        nonlocal pos
        if peek() == "!":
            take()
            return not parse_not()
        return parse_atom()

    def parse_atom():
        nonlocal pos
        t = take()
        if t == "(":
            v = parse_or()
            assert take() == ")"
            return v
        if t == "t":
            return True
        if t == "f":
            return False
        return bool(letter_bits >> int(t) & 1)

    toks = re.findall(r"\d+|[tf!&|()]", text)

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    return parse_or()


def read_hoa(text: str) -> HoaDocument:
    doc = HoaDocument()
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].strip() != "--BODY--":
        line = lines[i].strip()
        if line.startswith("States:"):
            doc.states = int(line.split()[1])
        elif line.startswith("Start:"):
            doc.start = int(line.split()[1])
        elif line.startswith("AP:"):
            doc.aps = re.findall(r'"([^"]*)"', line)
        elif line.startswith("Acceptance:"):
            doc.acceptance_sets = int(line.split()[1])
            doc.acceptance = line.split(None, 2)[2] if len(line.split(None, 2)) > 2 else ""
        i += 1
    i += 1
    current = None
    while i < len(lines) and lines[i].strip() != "--END--":
        line = lines[i].strip()
        if line.startswith("State:"):
            current = int(line.split()[1])
            doc.edges[current] = []
        elif line.startswith("["):
            m = re.match(r"\[(.*)\]\s+(\d+)(?:\s*\{([\d\s]*)\})?", line)
            label, target, sets = m.group(1), int(m.group(2)), m.group(3)
            marks = frozenset(int(x) for x in sets.split()) if sets else frozenset()
            doc.edges[current].append((label, target, marks))
        i += 1
    return doc
