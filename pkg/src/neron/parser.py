"""Text format for group presentations, morphisms, matrices and connections.

A file is a sequence of named blocks:

    group Gm {
      vars: u, v;
      relations: u*v - 1;
      comul: u -> u'*u'', v -> v'*v'';
      counit: u -> 1, v -> 1;
      antipode: u -> v, v -> u;
    }
    morphism rho { source: G2; target: Gm; pullback: u -> u, v -> v; }
    rep V { group: Gm; matrix: [[u]]; witness: v; }
    connection C { base: punctured-line; rank: 1; matrix: [[pi/x]]; }

Whitespace and newlines are free; `#` starts a comment; `pi` is reserved;
primed names appear only in comultiplication images.  Printing a parsed
file and parsing it back reproduces the same objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .dgal import AFFINE, PUNCTURED, Connection, LaurentPoly
from .errors import ParseError, UndefinedName
from .groebner import Ideal
from .hopf import PRIME1, PRIME2, SCALARS, GroupMorphism, HopfPresentation, tensor_ring
from .ring import Poly, PolyRing, Scalar, Substitution, format_poly

KEYWORDS = ("group", "morphism", "rep", "connection")
PLAIN_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
X = "x"


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if c == "-" and text[i:i + 2] == "->":
            tokens.append(Token("arrow", "->", line, start_col))
            i += 2
            col += 2
            continue
        if c.isdigit():
            m = re.match(r"[0-9]+", text[i:])
            tokens.append(Token("number", m.group(0), line, start_col))
            i += m.end()
            col += m.end()
            continue
        if c.isalpha() or c == "_":
            m = PLAIN_NAME.match(text, i)
            word = m.group(0)
            i = m.end()
            primes = 0
            while i < n and text[i] == "'":
                primes += 1
                i += 1
            tokens.append(Token("name", word + "'" * primes, line, start_col))
            col += len(word) + primes
            continue
        if c == '"':
            j = i + 1
            out = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    out.append(text[j + 1])
                    j += 2
                elif text[j] == "\n":
                    raise ParseError("unterminated string", line, start_col)
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                raise ParseError("unterminated string", line, start_col)
            tokens.append(Token("string", "".join(out), line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if c in "{}()[],;:+-*/^":
            tokens.append(Token(c, c, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, start_col)
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class RepBlock:
    """A comodule matrix as written, before any witness search runs."""
    name: str
    group: HopfPresentation
    entries: list
    witness: Poly = None


@dataclass
class PresentationFile:
    groups: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    reps: dict = field(default_factory=dict)
    connections: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def sole(self, kind: str):
        table = getattr(self, kind + "s")
        if len(table) != 1:
            raise UndefinedName(
                f"file defines {len(table)} {kind} blocks; name one explicitly")
        return next(iter(table.values()))

    def lookup(self, kind: str, name: str):
        table = getattr(self, kind + "s")
        if name is None:
            return self.sole(kind)
        if name not in table:
            raise UndefinedName(f"no {kind} block named {name!r}")
        return table[name]


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, tok: Token, message: str):
        raise ParseError(message, tok.line, tok.column)

    def expect(self, kind: str) -> Token:
        t = self.next()
        if t.kind != kind:
            self.fail(t, f"expected {kind!r}, found {t.text!r}")
        return t

    def block_name(self) -> str:
        t = self.next()
        if t.kind not in ("name", "string"):
            self.fail(t, f"expected a block name, found {t.text!r}")
        if t.kind == "name" and "'" in t.text:
            self.fail(t, "block names cannot carry primes")
        return t.text

    # expression nodes: ("num", q), ("name", text, token), and
    # ("add"|"sub"|"mul"|"div"|"pow"|"neg", ...)

    def expression(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next()
            rhs = self.term()
            node = ("add" if op.kind == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.next()
            rhs = self.factor()
            node = ("mul" if op.kind == "*" else "div", node, rhs, op)
        return node

    def factor(self):
        t = self.peek()
        if t.kind in ("+", "-"):
            self.next()
            inner = self.factor()
            return inner if t.kind == "+" else ("neg", inner)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "^":
            caret = self.next()
            e = self.expect("number")
            return ("pow", base, int(e.text), caret)
        return base

    def atom(self):
        t = self.next()
        if t.kind == "number":
            return ("num", Fraction(int(t.text)))
        if t.kind == "name":
            return ("name", t.text, t)
        if t.kind == "(":
            node = self.expression()
            self.expect(")")
            return node
        self.fail(t, f"expected a value, found {t.text!r}")


def _eval_poly(node, ring: PolyRing, allowed):
    """Evaluate to (numerator, pi_power) standing for numerator / pi^power."""
    kind = node[0]
    if kind == "num":
        return ring.scalar(node[1]), 0
    if kind == "name":
        text, tok = node[1], node[2]
        if text == "pi":
            return ring.pi(), 0
        if text not in allowed:
            raise ParseError(f"unknown variable {text!r} here", tok.line, tok.column)
        return ring.var(text), 0
    if kind == "neg":
        f, m = _eval_poly(node[1], ring, allowed)
        return -f, m
    if kind in ("add", "sub"):
        a, ma = _eval_poly(node[1], ring, allowed)
        b, mb = _eval_poly(node[2], ring, allowed)
        m = max(ma, mb)
        a, b = a.mul_pi(m - ma), b.mul_pi(m - mb)
        return (a + b, m) if kind == "add" else (a - b, m)
    if kind == "mul":
        a, ma = _eval_poly(node[1], ring, allowed)
        b, mb = _eval_poly(node[2], ring, allowed)
        return a * b, ma + mb
    if kind == "div":
        a, ma = _eval_poly(node[1], ring, allowed)
        b, mb = _eval_poly(node[2], ring, allowed)
        op = node[3]
        if mb:
            raise ParseError("nested fractions", op.line, op.column)
        if b.is_scalar():
            s = b.as_scalar()
            if len(s.coeffs) == 1:
                e, q = next(iter(s.coeffs.items()))
                return a.scale(1 / q), ma + e
            raise ParseError("can only divide by rationals or powers of pi", op.line, op.column)
        raise ParseError("can only divide by rationals or powers of pi", op.line, op.column)
    if kind == "pow":
        a, ma = _eval_poly(node[1], ring, allowed)
        return a ** node[2], ma * node[2]
    raise AssertionError(kind)


def _eval_laurent(node):
    kind = node[0]
    if kind == "num":
        return LaurentPoly({0: node[1]})
    if kind == "name":
        text, tok = node[1], node[2]
        if text == "pi":
            return LaurentPoly({0: Scalar.pi_power(1)})
        if text == X:
            return LaurentPoly({1: 1})
        raise ParseError(f"connection entries use only {X!r} and 'pi'", tok.line, tok.column)
    if kind == "neg":
        return -_eval_laurent(node[1])
    if kind == "add":
        return _eval_laurent(node[1]) + _eval_laurent(node[2])
    if kind == "sub":
        return _eval_laurent(node[1]) - _eval_laurent(node[2])
    if kind == "mul":
        return _eval_laurent(node[1]) * _eval_laurent(node[2])
    if kind == "div":
        a = _eval_laurent(node[1])
        b = _eval_laurent(node[2])
        op = node[3]
        if len(b.coeffs) != 1:
            raise ParseError("can only divide by rationals and powers of x", op.line, op.column)
        e, s = next(iter(b.coeffs.items()))
        if list(s.coeffs) != [0]:
            raise ParseError("cannot divide by pi", op.line, op.column)
        q = s.coeffs[0]
        return LaurentPoly({d - e: c * (1 / q) for d, c in a.coeffs.items()})
    if kind == "pow":
        a = _eval_laurent(node[1])
        out = LaurentPoly({0: 1})
        for _ in range(node[2]):
            out = out * a
        return out
    raise AssertionError(kind)


class _FileParser(_Parser):
    def __init__(self, text: str):
        super().__init__(text)
        self.file = PresentationFile()

    def parse(self) -> PresentationFile:
        while self.peek().kind != "eof":
            t = self.next()
            if t.kind != "name" or t.text not in KEYWORDS:
                self.fail(t, "expected 'group', 'morphism', 'rep' or 'connection'")
            name = self.block_name()
            entries = self.block_entries(t)
            if t.text == "group":
                obj = self.build_group(name, entries, t)
                self.file.groups[name] = obj
            elif t.text == "morphism":
                obj = self.build_morphism(name, entries, t)
                self.file.morphisms[name] = obj
            elif t.text == "rep":
                obj = self.build_rep(name, entries, t)
                self.file.reps[name] = obj
            else:
                obj = self.build_connection(name, entries, t)
                self.file.connections[name] = obj
            self.file.order.append((t.text, name))
        return self.file

    def block_entries(self, opener: Token):
        self.expect("{")
        entries = {}
        while self.peek().kind != "}":
            key = self.expect("name")
            if key.text in entries:
                self.fail(key, f"duplicate key {key.text!r}")
            self.expect(":")
            entries[key.text] = (key, self.raw_value(key.text))
            self.expect(";")
        self.expect("}")
        return entries

    def raw_value(self, key: str):
        """Collect the value for a key, shape depending on the key."""
        if key in ("vars",):
            return self.name_list()
        if key in ("relations",):
            return self.expr_list()
        if key in ("comul", "counit", "antipode", "pullback"):
            return self.mapping_list()
        if key in ("matrix",):
            return self.matrix_value()
        if key in ("source", "target", "group"):
            return self.block_name()
        if key in ("witness",):
            return self.expression()
        if key in ("base",):
            return self.dashed_name()
        if key in ("rank",):
            return int(self.expect("number").text)
        tok = self.peek()
        self.fail(tok, f"unknown key {key!r}")

    def name_list(self):
        names = []
        while self.peek().kind != ";":
            t = self.expect("name")
            names.append(t)
            if self.peek().kind == ",":
                self.next()
        return names

    def expr_list(self):
        out = []
        while self.peek().kind != ";":
            out.append(self.expression())
            if self.peek().kind == ",":
                self.next()
        return out

    def mapping_list(self):
        out = []
        while self.peek().kind != ";":
            key = self.expect("name")
            self.expect("arrow")
            out.append((key, self.expression()))
            if self.peek().kind == ",":
                self.next()
        return out

    def matrix_value(self):
        self.expect("[")
        rows = []
        while self.peek().kind != "]":
            row = []
            self.expect("[")
            while self.peek().kind != "]":
                row.append(self.expression())
                if self.peek().kind == ",":
                    self.next()
            self.expect("]")
            rows.append(row)
            if self.peek().kind == ",":
                self.next()
        self.expect("]")
        return rows

    def dashed_name(self):
        parts = [self.expect("name").text]
        while self.peek().kind == "-":
            self.next()
            parts.append(self.expect("name").text)
        return "-".join(parts)

    def take(self, entries, key, opener: Token, required: bool = True):
        if key not in entries:
            if required:
                self.fail(opener, f"block is missing the {key!r} key")
            return None
        return entries.pop(key)[1]

    def reject_extras(self, entries, kind: str):
        for key, (tok, _) in entries.items():
            self.fail(tok, f"{kind} blocks do not take a {key!r} key")

    def plain_poly(self, node, ring, allowed) -> Poly:
        f, m = _eval_poly(node, ring, allowed)
        if m:
            raise ParseError("pi cannot appear in a denominator here", 1, 1)
        return f

    def images_for(self, pairs, variables, ring, allowed, what: str):
        images = {}
        for key, node in pairs:
            v = key.text
            if v not in variables:
                self.fail(key, f"{what} names unknown variable {v!r}")
            if v in images:
                self.fail(key, f"{what} repeats variable {v!r}")
            images[v] = self.plain_poly(node, ring, allowed)
        for v in variables:
            if v not in images:
                raise UndefinedName(f"{what} is missing an image for {v!r}")
        return images

    def build_group(self, name, entries, opener) -> HopfPresentation:
        var_tokens = self.take(entries, "vars", opener)
        relations = self.take(entries, "relations", opener, required=False) or []
        comul = self.take(entries, "comul", opener)
        counit = self.take(entries, "counit", opener)
        antipode = self.take(entries, "antipode", opener)
        self.reject_extras(entries, "group")
        names = []
        for t in var_tokens:
            if t.text == "pi":
                self.fail(t, "'pi' is reserved for the uniformiser")
            if "'" in t.text:
                self.fail(t, "primed names are reserved for comultiplication")
            if t.text in names:
                self.fail(t, f"duplicate variable {t.text!r}")
            names.append(t.text)
        ring = PolyRing(tuple(names))
        ring2 = tensor_ring(ring, (PRIME1, PRIME2))
        allowed = set(names)
        allowed2 = {v + s for v in names for s in (PRIME1, PRIME2)}
        rel_ideal = Ideal(ring, [self.plain_poly(r, ring, allowed) for r in relations])
        comul_map = Substitution(ring, ring2, self.images_for(
            comul, names, ring2, allowed2, "comul"))
        counit_map = Substitution(ring, SCALARS, self.images_for(
            counit, names, SCALARS, set(), "counit"))
        antipode_map = Substitution(ring, ring, self.images_for(
            antipode, names, ring, allowed, "antipode"))
        return HopfPresentation(name, ring, rel_ideal, comul_map, counit_map,
                                antipode_map)

    def build_morphism(self, name, entries, opener) -> GroupMorphism:
        source = self.file.groups.get(self.take(entries, "source", opener))
        target_name = self.take(entries, "target", opener)
        target = self.file.groups.get(target_name)
        pull = self.take(entries, "pullback", opener)
        self.reject_extras(entries, "morphism")
        if source is None or target is None:
            raise UndefinedName(f"morphism {name!r} references an undefined group")
        images = self.images_for(pull, target.ring.variables, source.ring,
                                 set(source.ring.variables), "pullback")
        return GroupMorphism(name, source, target,
                             Substitution(target.ring, source.ring, images))

    def build_rep(self, name, entries, opener) -> RepBlock:
        group_name = self.take(entries, "group", opener)
        matrix = self.take(entries, "matrix", opener)
        witness = self.take(entries, "witness", opener, required=False)
        self.reject_extras(entries, "rep")
        group = self.file.groups.get(group_name)
        if group is None:
            raise UndefinedName(f"rep {name!r} references an undefined group")
        allowed = set(group.ring.variables)
        rows = [[self.plain_poly(e, group.ring, allowed) for e in row]
                for row in matrix]
        wit = self.plain_poly(witness, group.ring, allowed) if witness else None
        return RepBlock(name, group, rows, wit)

    def build_connection(self, name, entries, opener) -> Connection:
        base = self.take(entries, "base", opener)
        rank = self.take(entries, "rank", opener, required=False)
        matrix = self.take(entries, "matrix", opener)
        self.reject_extras(entries, "connection")
        if base not in (AFFINE, PUNCTURED):
            self.fail(opener, f"base must be {AFFINE!r} or {PUNCTURED!r}")
        rows = [[_eval_laurent(e) for e in row] for row in matrix]
        try:
            conn = Connection(base, rows)
        except Exception as exc:
            self.fail(opener, str(exc))
        if rank is not None and rank != conn.rank:
            self.fail(opener, f"declared rank {rank} but the matrix is "
                      f"{conn.rank} x {conn.rank}")
        return conn


def parse(text: str) -> PresentationFile:
    return _FileParser(text).parse()


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """One polynomial over the given ring; pi denominators are rejected."""
    p = _Parser(text)
    node = p.expression()
    p.expect("eof")
    f, m = _eval_poly(node, ring, set(ring.variables))
    if m:
        raise ParseError("pi cannot appear in a denominator here", 1, 1)
    return f


def parse_fraction(text: str, ring: PolyRing):
    """An element numerator / pi^power of the generic fibre."""
    p = _Parser(text)
    node = p.expression()
    p.expect("eof")
    return _eval_poly(node, ring, set(ring.variables))


def parse_poly_list(text: str, ring: PolyRing):
    p = _Parser(text)
    out = []
    while p.peek().kind != "eof":
        node = p.expression()
        f, m = _eval_poly(node, ring, set(ring.variables))
        if m:
            raise ParseError("pi cannot appear in a denominator here", 1, 1)
        out.append(f)
        if p.peek().kind == ",":
            p.next()
    return out


def parse_matrix(text: str, ring: PolyRing):
    """A bracketed matrix [[...], ...] of polynomials over the given ring."""
    p = _FileParser("")
    p.tokens = _tokenize(text)
    p.pos = 0
    rows = p.matrix_value()
    p.expect("eof")
    allowed = set(ring.variables)
    return [[p.plain_poly(e, ring, allowed) for e in row] for row in rows]


def _name_text(name: str) -> str:
    if PLAIN_NAME.fullmatch(name) and name not in KEYWORDS:
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def print_laurent(f: LaurentPoly) -> str:
    """Render with at most one division, so the result parses back."""
    from .dgal import format_laurent
    if f.is_zero():
        return "0"
    low = f.exponents()[0]
    if low >= 0:
        return format_laurent(f)
    shifted = LaurentPoly({e - low: c for e, c in f.coeffs.items()})
    num = format_laurent(shifted)
    if len(shifted.coeffs) > 1:
        num = f"({num})"
    den = "x" if low == -1 else f"x^{-low}"
    return f"{num}/{den}"


def print_group(h: HopfPresentation) -> str:
    lines = [f"group {_name_text(h.name)} {{"]
    lines.append("  vars: " + ", ".join(h.ring.variables) + ";")
    rels = ", ".join(format_poly(g) for g in h.relations.generators)
    lines.append(f"  relations: {rels};" if rels else "  relations: ;")
    for label, sub in (("comul", h.comul), ("counit", h.counit),
                       ("antipode", h.antipode)):
        body = ", ".join(f"{v} -> {format_poly(sub.images[v])}"
                         for v in h.ring.variables)
        lines.append(f"  {label}: {body};")
    lines.append("}")
    return "\n".join(lines)


def print_morphism(m: GroupMorphism) -> str:
    lines = [f"morphism {_name_text(m.name)} {{"]
    lines.append(f"  source: {_name_text(m.source.name)};")
    lines.append(f"  target: {_name_text(m.target.name)};")
    body = ", ".join(f"{v} -> {format_poly(m.pullback.images[v])}"
                     for v in m.target.ring.variables)
    lines.append(f"  pullback: {body};")
    lines.append("}")
    return "\n".join(lines)


def print_rep(r: RepBlock) -> str:
    lines = [f"rep {_name_text(r.name)} {{"]
    lines.append(f"  group: {_name_text(r.group.name)};")
    rows = ", ".join("[" + ", ".join(format_poly(e) for e in row) + "]"
                     for row in r.entries)
    lines.append(f"  matrix: [{rows}];")
    if r.witness is not None:
        lines.append(f"  witness: {format_poly(r.witness)};")
    lines.append("}")
    return "\n".join(lines)


def print_connection(name: str, c: Connection) -> str:
    lines = [f"connection {_name_text(name)} {{"]
    lines.append(f"  base: {c.base};")
    lines.append(f"  rank: {c.rank};")
    rows = ", ".join("[" + ", ".join(print_laurent(e) for e in row) + "]"
                     for row in c.matrix)
    lines.append(f"  matrix: [{rows}];")
    lines.append("}")
    return "\n".join(lines)


def print_file(pf: PresentationFile) -> str:
    chunks = []
    for kind, name in pf.order:
        if kind == "group":
            chunks.append(print_group(pf.groups[name]))
        elif kind == "morphism":
            chunks.append(print_morphism(pf.morphisms[name]))
        elif kind == "rep":
            chunks.append(print_rep(pf.reps[name]))
        else:
            chunks.append(print_connection(name, pf.connections[name]))
    return "\n\n".join(chunks) + "\n"
