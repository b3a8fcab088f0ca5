"""Concrete LTL syntax.

Grammar: atoms `[a-z][a-zA-Z0-9_]*`; constants tt/ff (also true/false);
unary `!`, `X`, `F`, `G`; binary `&`, `|`, `U`, `->`, `<->`; precedence
`! X F G` > `U` > `&` > `|` > `->` > `<->`; `U`, `->` and `<->` are
right-associative.  Implications are desugared and negation is pushed to
the literals while resolving the parse tree; a negation reaching an
until-formula is a syntax error (the NNF syntax has no release operator).
"""

from __future__ import annotations

import re

from . import formula as fm


class ParseError(Exception):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow2><->)
  | (?P<arrow>->)
  | (?P<op>[!&|()])
  | (?P<temporal>[XFGU])(?![a-zA-Z0-9_])
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
""", re.VERBOSE)

_CONSTS = {"tt": True, "true": True, "ff": False, "false": False}


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            if kind == "ident":
                out.append(("const", val, pos) if val in _CONSTS else ("ap", val, pos))
            else:
                out.append((val, val, pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def equiv(self):
        start = self.peek()[2]
        left = self.impl()
        if self.peek()[0] == "<->":
            self.take()
            return ("iff", left, self.equiv(), start)
        return left

    def impl(self):
        start = self.peek()[2]
        left = self.disj()
        if self.peek()[0] == "->":
            self.take()
            return ("imp", left, self.impl(), start)
        return left

    def disj(self):
        start = self.peek()[2]
        items = [self.conj()]
        while self.peek()[0] == "|":
            self.take()
            items.append(self.conj())
        return items[0] if len(items) == 1 else ("or", items, start)

    def conj(self):
        start = self.peek()[2]
        items = [self.until()]
        while self.peek()[0] == "&":
            self.take()
            items.append(self.until())
        return items[0] if len(items) == 1 else ("and", items, start)

    def until(self):
        left = self.unary()
        if self.peek()[0] == "U":
            upos = self.take()[2]
            return ("U", left, self.until(), upos)
        return left

    def unary(self):
        t = self.peek()
        if t[0] in ("!", "X", "F", "G"):
            self.take()
            return (t[0], self.unary(), t[2])
        return self.primary()

    def primary(self):
        t = self.take()
        if t[0] == "ap":
            return ("ap", t[1], t[2])
        if t[0] == "const":
            return ("const", _CONSTS[t[1]], t[2])
        if t[0] == "(":
            inner = self.equiv()
            close = self.take()
            if close[0] != ")":
                raise ParseError(f"expected ')', found {close[1] or 'end of input'}",
                                 close[2])
            return inner
        raise ParseError(f"expected a formula, found {t[1] or 'end of input'}", t[2])


def _resolve(box, pol):
    kind = box[0]
    if kind == "ap":
        return fm.ap(box[1]) if pol else fm.nap(box[1])
    if kind == "const":
        return fm.TT if box[1] == pol else fm.FF
    if kind == "and":
        items = [_resolve(b, pol) for b in box[1]]
        return fm.conj(items) if pol else fm.disj(items)
    if kind == "or":
        items = [_resolve(b, pol) for b in box[1]]
        return fm.disj(items) if pol else fm.conj(items)
    if kind == "imp":
        l = _resolve(box[1], not pol)
        r = _resolve(box[2], pol)
        return fm.disj([l, r]) if pol else fm.conj([l, r])
    if kind == "iff":
        l, r, pos = box[1], box[2], box[3]
        expanded = ("and", [("imp", l, r, pos), ("imp", r, l, pos)], pos)
        return _resolve(expanded, pol)
    if kind == "!":
        return _resolve(box[1], not pol)
    if kind == "X":
        return fm.nxt(_resolve(box[1], pol))
    if kind == "F":
        sub = _resolve(box[1], pol)
        return fm.ever(sub) if pol else fm.alws(sub)
    if kind == "G":
        sub = _resolve(box[1], pol)
        return fm.alws(sub) if pol else fm.ever(sub)
    if not pol:  # negated until
        raise ParseError("unsupported negated until", box[3])
    return fm.until(_resolve(box[1], True), _resolve(box[2], True))


def parse(text):
    """Parse concrete syntax into an interned NNF formula."""
    p = _Parser(_tokenize(text))
    box = p.equiv()
    end = p.take()
    if end[0] != "end":
        raise ParseError(f"unexpected trailing input {end[1]!r}", end[2])
    return _resolve(box, True)
