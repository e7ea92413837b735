"""Parser, printer and runner for the small recurrence spec language.

A spec file declares a parameter ring, a sequence name, and one recurrence
whose left side is n (optionally a power of n) times the current term:

    # three-term example
    ring b c;
    seq w;
    rec: n*w[n] = (b - n*(n-1))*w[n-1] + c*w[n-3];

Expressions are sums of terms, each a polynomial in n and the ring
variables times one back-reference seq[n - i] with i >= 1; integer
literals, + - * ^ and parentheses; whitespace-insensitive; # starts a
comment.  The initial term seq[0] is implicitly 1 and not writable.

The canonical pretty-printer sorts ring variables and expands every
coefficient polynomial, so parse -> print -> parse is stable and the
printed text's hash identifies the recurrence.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .multipoly import MultiPoly, UPoly, VarSet, to_upoly
from .sequences import ParamSeq


class SpecSyntaxError(ValueError):
    """Parse or semantic error in a spec file, with line/column position."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    value: str
    line: int
    col: int


_OPS = set(";:=[]()+-*^,")


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch.isdigit():
            start = i
            startcol = col
            while i < len(text) and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(Token("int", text[start:i], line, startcol))
        elif ch.isalpha() or ch == "_":
            start = i
            startcol = col
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(Token("name", text[start:i], line, startcol))
        elif ch in _OPS:
            tokens.append(Token("op", ch, line, col))
            i += 1
            col += 1
        else:
            raise SpecSyntaxError(line, col, f"unexpected character {ch!r}")
    tokens.append(Token("end", "", line, col))
    return tokens


@dataclass
class RecurrenceSpec:
    """A parsed recurrence: n^lead_power * seq[n] = sum q_i(n) * seq[n-i].

    ring_vars are stored sorted; each q_i is a MultiPoly over the ring
    variables plus the reserved indeterminate n (zero entries mark gaps).
    """

    ring_vars: tuple[str, ...]
    seq_name: str
    lead_power: int
    q: tuple[MultiPoly, ...]

    @property
    def order(self) -> int:
        return len(self.q)

    @property
    def ring(self) -> VarSet:
        return VarSet(self.ring_vars)

    @property
    def full_vars(self) -> VarSet:
        return VarSet(self.ring_vars + ("n",))

    def q_upoly(self, i: int) -> UPoly:
        """q_i as a univariate polynomial in n over the ring variables."""
        return to_upoly(self.q[i - 1], "n")


# -- parser -------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], allow_refs: bool, vs: VarSet, seq_name: str | None):
        self.tokens = tokens
        self.pos = 0
        self.allow_refs = allow_refs
        self.vs = vs
        self.seq_name = seq_name

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: Token, msg: str):
        raise SpecSyntaxError(tok.line, tok.col, msg)

    def expect_op(self, op: str) -> Token:
        tok = self.next()
        if tok.kind != "op" or tok.value != op:
            self.fail(tok, f"expected {op!r}, found {tok.value!r}")
        return tok

    # values are dicts {None: poly} | {shift: poly, ...}; None marks the
    # pure polynomial part, integer keys mark coefficients of seq[n-shift]
    def parse_expr(self) -> dict:
        sign = 1
        while self.peek().kind == "op" and self.peek().value in "+-":
            if self.next().value == "-":
                sign = -sign
        total = self._scaled(self.parse_term(), sign)
        while self.peek().kind == "op" and self.peek().value in "+-":
            neg = self.next().value == "-"
            term = self.parse_term()
            total = self._merge(total, self._scaled(term, -1 if neg else 1))
        return total

    def parse_term(self) -> dict:
        value = self.parse_factor()
        while self.peek().kind == "op" and self.peek().value == "*":
            self.next()
            rhs = self.parse_factor()
            value = self._product(value, rhs)
        return value

    def parse_factor(self) -> dict:
        tok = self.peek()
        if tok.kind == "op" and tok.value == "-":
            self.next()
            return self._scaled(self.parse_factor(), -1)
        value = self.parse_atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            op = self.next()
            exp = self.next()
            if exp.kind != "int":
                self.fail(exp, "exponent must be an integer literal")
            if set(value) != {None}:
                self.fail(op, "cannot raise a sequence reference to a power")
            return {None: value[None] ** int(exp.value)}
        return value

    def parse_atom(self) -> dict:
        tok = self.next()
        if tok.kind == "int":
            return {None: MultiPoly.const(self.vs, int(tok.value))}
        if tok.kind == "op" and tok.value == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "name":
            if tok.value == self.seq_name:
                if not self.allow_refs:
                    self.fail(tok, f"sequence reference {tok.value!r} not allowed here")
                return {self._parse_ref_index(tok): MultiPoly.one(self.vs)}
            if tok.value in self.vs.names:
                return {None: MultiPoly.variable(self.vs, tok.value)}
            self.fail(tok, f"unknown variable {tok.value!r}")
        self.fail(tok, f"unexpected token {tok.value!r}")

    def _parse_ref_index(self, nametok: Token) -> int:
        self.expect_op("[")
        ntok = self.next()
        if ntok.kind != "name" or ntok.value != "n":
            self.fail(ntok, "sequence index must have the form n - <int>")
        tok = self.next()
        if tok.kind == "op" and tok.value == "]":
            self.fail(tok, f"{self.seq_name}[n] cannot appear on the right side")
        if tok.kind != "op" or tok.value != "-":
            self.fail(tok, "sequence index must have the form n - <int>")
        shift = self.next()
        if shift.kind != "int":
            self.fail(shift, "sequence index must have the form n - <int>")
        self.expect_op("]")
        i = int(shift.value)
        if i < 1:
            self.fail(shift, f"index out of declared range: n - {i}")
        return i

    def _scaled(self, value: dict, sign: int) -> dict:
        if sign == 1:
            return value
        return {k: -p for k, p in value.items()}

    def _merge(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, p in b.items():
            out[k] = out[k] + p if k in out else p
        return out

    def _product(self, a: dict, b: dict) -> dict:
        if (set(a) - {None}) and (set(b) - {None}):
            self.fail(self.peek(), "recurrence must be linear in the sequence")
        if set(b) - {None}:
            a, b = b, a
        scal = b.get(None, MultiPoly.zero(self.vs))
        return {k: p * scal for k, p in a.items()}


def parse_spec(text: str) -> RecurrenceSpec:
    """Parse a complete spec file into its canonical RecurrenceSpec."""
    tokens = _tokenize(text)
    pos = 0
    ring_names: list[str] | None = None
    seq_name: str | None = None
    rec_parsed = False
    lead_power = 1
    coeffs: dict[int, MultiPoly] = {}
    vs: VarSet | None = None

    def fail(tok: Token, msg: str):
        raise SpecSyntaxError(tok.line, tok.col, msg)

    while tokens[pos].kind != "end":
        tok = tokens[pos]
        if tok.kind != "name":
            fail(tok, f"expected a statement, found {tok.value!r}")
        if tok.value == "ring":
            if ring_names is not None:
                fail(tok, "duplicate ring statement")
            if rec_parsed or seq_name is not None:
                fail(tok, "ring statement must come first")
            pos += 1
            names = []
            while tokens[pos].kind == "name":
                name = tokens[pos].value
                if name == "n":
                    fail(tokens[pos], "n is reserved and cannot be a ring variable")
                if name in names:
                    fail(tokens[pos], f"duplicate ring variable {name!r}")
                names.append(name)
                pos += 1
            if not names:
                fail(tokens[pos], "ring statement needs at least one variable")
            if tokens[pos].kind != "op" or tokens[pos].value != ";":
                fail(tokens[pos], "expected ';'")
            pos += 1
            ring_names = names
        elif tok.value == "seq":
            if seq_name is not None:
                fail(tok, "duplicate seq statement")
            pos += 1
            nametok = tokens[pos]
            if nametok.kind != "name":
                fail(nametok, "expected a sequence name")
            if nametok.value == "n" or (ring_names and nametok.value in ring_names):
                fail(nametok, f"sequence name {nametok.value!r} collides with a variable")
            seq_name = nametok.value
            pos += 1
            if tokens[pos].kind != "op" or tokens[pos].value != ";":
                fail(tokens[pos], "expected ';'")
            pos += 1
        elif tok.value == "rec":
            if rec_parsed:
                fail(tok, "duplicate rec statement")
            if seq_name is None:
                fail(tok, "rec statement requires a prior seq statement")
            pos += 1
            if tokens[pos].kind != "op" or tokens[pos].value != ":":
                fail(tokens[pos], "expected ':'")
            pos += 1
            sorted_ring = tuple(sorted(ring_names or []))
            vs = VarSet(sorted_ring + ("n",))
            parser = _Parser(tokens, allow_refs=True, vs=vs, seq_name=seq_name)
            parser.pos = pos
            # left side: n[^k]*seq[n]
            ntok = parser.next()
            if ntok.kind != "name" or ntok.value != "n":
                parser.fail(ntok, "left side must start with n")
            if parser.peek().kind == "op" and parser.peek().value == "^":
                parser.next()
                ptok = parser.next()
                if ptok.kind != "int" or int(ptok.value) < 1:
                    parser.fail(ptok, "leading power must be a positive integer")
                lead_power = int(ptok.value)
            parser.expect_op("*")
            nametok = parser.next()
            if nametok.kind != "name" or nametok.value != seq_name:
                parser.fail(nametok, f"left side must use the declared sequence {seq_name!r}")
            parser.expect_op("[")
            idx = parser.next()
            if idx.kind != "name" or idx.value != "n":
                parser.fail(idx, "left side index must be exactly [n]")
            parser.expect_op("]")
            parser.expect_op("=")
            value = parser.parse_expr()
            parser.expect_op(";")
            pos = parser.pos
            pure = value.pop(None, None)
            if pure is not None and not pure.is_zero():
                fail(tok, "every term on the right side needs a sequence reference")
            if not value:
                fail(tok, "right side has no sequence references")
            coeffs = value
            rec_parsed = True
        else:
            fail(tok, f"unknown statement {tok.value!r}")

    end = tokens[-1]
    if seq_name is None:
        raise SpecSyntaxError(end.line, end.col, "missing seq statement")
    if not rec_parsed:
        raise SpecSyntaxError(end.line, end.col, "missing rec statement")
    r = max(coeffs)
    zero = MultiPoly.zero(vs)
    q = tuple(coeffs.get(i, zero) for i in range(1, r + 1))
    return RecurrenceSpec(
        ring_vars=tuple(sorted(ring_names or [])),
        seq_name=seq_name,
        lead_power=lead_power,
        q=q,
    )


def parse_poly_list(text: str, varnames: tuple[str, ...]) -> list[MultiPoly]:
    """Comma-separated polynomial expressions via the same sub-grammar
    (integer literals, + - * ^, parentheses); used for CLI tuple input."""
    tokens = _tokenize(text)
    vs = VarSet(varnames)
    parser = _Parser(tokens, allow_refs=False, vs=vs, seq_name=None)
    polys = []
    while True:
        value = parser.parse_expr()
        polys.append(value[None])
        tok = parser.next()
        if tok.kind == "end":
            return polys
        if tok.kind != "op" or tok.value != ",":
            parser.fail(tok, f"expected ',' or end of input, found {tok.value!r}")


# -- canonical printing ---------------------------------------------------------------


def pretty_print(spec: RecurrenceSpec) -> str:
    """Canonical text: sorted ring variables, expanded coefficients.

    parse(pretty_print(parse(text))) == parse(text) for all valid input.
    """
    lines = []
    if spec.ring_vars:
        lines.append(f"ring {' '.join(spec.ring_vars)};")
    lines.append(f"seq {spec.seq_name};")
    head = "n" if spec.lead_power == 1 else f"n^{spec.lead_power}"
    terms = []
    for i, qi in enumerate(spec.q, start=1):
        if qi.is_zero():
            continue
        terms.append(f"({qi.text()})*{spec.seq_name}[n-{i}]")
    lines.append(f"rec: {head}*{spec.seq_name}[n] = {' + '.join(terms)};")
    return "\n".join(lines) + "\n"


def spec_hash(spec: RecurrenceSpec) -> str:
    return hashlib.sha256(pretty_print(spec).encode()).hexdigest()


# -- odd form ----------------------------------------------------------------------------


@dataclass
class OddFormReport:
    """Outcome of the half-shift reindexing p_i(t) = q_i(t + i/2).

    applicable is True when every p_i is odd; offenders lists (i, even part)
    for the p_i that are not.  For recurrences with a higher leading power
    of n the analysis does not apply at all and reason says so.
    """

    applicable: bool
    p: tuple[UPoly, ...] | None
    offenders: tuple[tuple[int, UPoly], ...]
    reason: str = ""


def to_odd_form(spec: RecurrenceSpec) -> OddFormReport:
    if spec.lead_power != 1:
        return OddFormReport(
            applicable=False,
            p=None,
            offenders=(),
            reason=f"leading coefficient n^{spec.lead_power} is outside the odd-form regime",
        )
    ps = []
    offenders = []
    for i in range(1, spec.order + 1):
        p = spec.q_upoly(i).compose_affine(Fraction(i, 2))
        ps.append(p)
        if not p.is_odd():
            offenders.append((i, p.even_part()))
    if offenders:
        return OddFormReport(applicable=False, p=tuple(ps), offenders=tuple(offenders))
    return OddFormReport(applicable=True, p=tuple(ps), offenders=())


# -- running ------------------------------------------------------------------------------


def run_spec(spec: RecurrenceSpec, n: int) -> ParamSeq:
    """Generate seq[0..n] over the fraction field of the ring.

    seq[0] = 1; each later term divides by n^lead_power exactly (the division
    is by a scalar, so it always succeeds over rationals; integrality is the
    certifier's question, not the runner's).
    """
    if n < 0:
        raise ValueError("negative length")
    ring = spec.ring
    qs = [spec.q_upoly(i) for i in range(1, spec.order + 1)]
    terms = [MultiPoly.one(ring)]
    for k in range(1, n + 1):
        acc = MultiPoly.zero(ring)
        for i, qi in enumerate(qs, start=1):
            if i > k:
                break
            if qi.is_zero():
                continue
            acc = acc + qi.eval_scalar(k) * terms[k - i]
        terms.append(acc / Fraction(k) ** spec.lead_power)
    return ParamSeq(ring, terms, "spec")
