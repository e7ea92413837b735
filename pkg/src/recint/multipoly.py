"""Sparse multivariate polynomials over exact rationals.

MultiPoly is the workhorse: a map from exponent vectors to nonzero Fraction
coefficients, keyed to an ordered VarSet.  UPoly layers a dense univariate
polynomial (in an auxiliary indeterminate) over MultiPoly coefficients; it
carries the parity predicates and affine reindexing used by the odd-form
machinery.  Everything is immutable by convention and arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import val2


class InexactDivisionError(ArithmeticError):
    """A division that had to be exact left a remainder."""

    def __init__(self, message: str, remainder=None):
        super().__init__(message)
        self.remainder = remainder


@dataclass(frozen=True)
class VarSet:
    """Ordered, immutable tuple of variable names.

    The order fixes the exponent-vector layout and the canonical printing of
    every polynomial built over it.  Two polynomials interoperate only when
    their VarSets compare equal.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names: {self.names}")
        for name in self.names:
            if not name.isidentifier():
                raise ValueError(f"invalid variable name: {name!r}")

    @classmethod
    def of(cls, *names: str) -> "VarSet":
        return cls(tuple(names))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in {self.names}") from None

    def without(self, name: str) -> "VarSet":
        i = self.index(name)
        return VarSet(self.names[:i] + self.names[i + 1 :])

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)


def _grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial with rational coefficients over a fixed VarSet.

    Zero coefficients are never stored; the zero polynomial has an empty
    term map.  Monomials print in descending graded-lexicographic order,
    which makes text() a canonical form.
    """

    __slots__ = ("vs", "terms")

    def __init__(self, vs: VarSet, terms: Mapping[tuple[int, ...], Fraction | int] | None = None):
        nvars = len(vs)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for variables {vs.names}")
            c = Fraction(coef)
            if c:
                clean[exps] = c
        self.vs = vs
        self.terms = clean

    # -- construction ------------------------------------------------------

    @classmethod
    def _raw(cls, vs: VarSet, terms: dict[tuple[int, ...], Fraction]) -> "MultiPoly":
        # Internal fast path: caller guarantees normalized terms.
        self = cls.__new__(cls)
        self.vs = vs
        self.terms = terms
        return self

    @classmethod
    def zero(cls, vs: VarSet) -> "MultiPoly":
        return cls._raw(vs, {})

    @classmethod
    def const(cls, vs: VarSet, value) -> "MultiPoly":
        c = Fraction(value)
        if not c:
            return cls.zero(vs)
        return cls._raw(vs, {(0,) * len(vs): c})

    @classmethod
    def one(cls, vs: VarSet) -> "MultiPoly":
        return cls.const(vs, 1)

    @classmethod
    def variable(cls, vs: VarSet, name: str) -> "MultiPoly":
        exps = [0] * len(vs)
        exps[vs.index(name)] = 1
        return cls._raw(vs, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, vs: VarSet, exps: Sequence[int], coef) -> "MultiPoly":
        return cls(vs, {tuple(exps): coef})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self.text()}")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vs != self.vs:
                raise ValueError(f"variable-set mismatch: {self.vs.names} vs {other.vs.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.vs, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.vs, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vs, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MultiPoly.zero(self.vs)
            return MultiPoly._raw(self.vs, {e: k * c for e, k in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.vs, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        c = Fraction(scalar)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"polynomial power must be a nonnegative integer, got {k}")
        result = MultiPoly.one(self.vs)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                return self.is_constant() and self.constant_value() == Fraction(other)
            return NotImplemented
        return self.vs == other.vs and self.terms == other.terms

    def __hash__(self):
        return hash((self.vs, frozenset(self.terms.items())))

    # -- evaluation and substitution -----------------------------------------

    def eval(self, point: Mapping[str, Fraction | int]) -> Fraction:
        """Evaluate at a full assignment of rationals to the variables."""
        vals = []
        for name in self.vs.names:
            if name not in point:
                raise ValueError(f"missing assignment for variable {name!r}")
            vals.append(Fraction(point[name]))
        total = Fraction(0)
        for exps, coef in self.terms.items():
            term = coef
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def subst_value(self, name: str, value: Fraction | int) -> "MultiPoly":
        """Substitute a rational value for one variable; VarSet is unchanged."""
        i = self.vs.index(name)
        value = Fraction(value)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in self.terms.items():
            c = coef * value ** exps[i]
            if not c:
                continue
            e = exps[:i] + (0,) + exps[i + 1 :]
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.vs, out)

    def cast(self, vs: VarSet) -> "MultiPoly":
        """Reinterpret over another VarSet, matching variables by name.

        Every variable actually used must exist in the target VarSet.
        """
        positions = []
        for i, name in enumerate(self.vs.names):
            try:
                positions.append(vs.index(name))
            except KeyError:
                if any(e[i] for e in self.terms):
                    raise
                positions.append(None)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in self.terms.items():
            e = [0] * len(vs)
            for i, p in enumerate(positions):
                if exps[i]:
                    e[p] = exps[i]
            out[tuple(e)] = coef
        return MultiPoly._raw(vs, out)

    # -- canonical text -------------------------------------------------------

    def text(self) -> str:
        """Canonical form: monomials in descending graded-lex order, explicit
        * and ^, rational coefficients as p/q.  Round-trips through parse_poly.
        """
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            coef = self.terms[exps]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.vs.names, exps)
                if e
            )
            mag = abs(coef)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if coef < 0 else "+", body))
        sign, body = pieces[0]
        out = body if sign == "+" else f"-{body}"
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.text()!r} over {self.vs.names})"


def linear_form(vs: VarSet, coeffs: Sequence[Fraction | int]) -> MultiPoly:
    """The linear polynomial sum(coeffs[i] * vs[i])."""
    if len(coeffs) != len(vs):
        raise ValueError("coefficient count does not match variable count")
    terms = {}
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        if c:
            e = [0] * len(vs)
            e[i] = 1
            terms[tuple(e)] = c
    return MultiPoly._raw(vs, terms)


# -- canonical text parser ----------------------------------------------------


class _PolyParser:
    """Recursive-descent parser for canonical polynomial text.

    Grammar: sums/differences of products of powers, integer and p/q rational
    literals, parentheses.  Division is accepted only by a constant.
    """

    def __init__(self, text: str, vs: VarSet):
        self.text = text
        self.vs = vs
        self.pos = 0

    def fail(self, msg: str):
        raise ValueError(f"polynomial parse error at char {self.pos}: {msg}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected integer")
        return int(self.text[start : self.pos])

    def take_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start : self.pos]

    def parse(self) -> MultiPoly:
        p = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail(f"unexpected trailing input {self.text[self.pos:]!r}")
        return p

    def expr(self) -> MultiPoly:
        ch = self.peek()
        sign = 1
        while ch in "+-":
            self.pos += 1
            if ch == "-":
                sign = -sign
            ch = self.peek()
        total = self.term() * sign
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                total = total + self.term()
            elif ch == "-":
                self.pos += 1
                total = total - self.term()
            else:
                return total

    def term(self) -> MultiPoly:
        p = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                p = p * self.factor()
            elif ch == "/":
                self.pos += 1
                d = self.factor()
                if not (isinstance(d, MultiPoly) and d.is_constant()):
                    self.fail("division only by a nonzero constant")
                c = d.constant_value()
                if not c:
                    self.fail("division by zero")
                p = p * (1 / c)
            else:
                return p

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return base ** self.take_int()
        return base

    def atom(self) -> MultiPoly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return p
        if ch == "-":
            self.pos += 1
            return -self.atom()
        if ch.isdigit():
            return MultiPoly.const(self.vs, self.take_int())
        if ch.isalpha() or ch == "_":
            name = self.take_name()
            if name not in self.vs.names:
                self.fail(f"unknown variable {name!r}")
            return MultiPoly.variable(self.vs, name)
        self.fail(f"unexpected character {ch!r}")


def parse_poly(text: str, vs: VarSet) -> MultiPoly:
    """Parse canonical polynomial text back into a MultiPoly."""
    return _PolyParser(text, vs).parse()


# -- univariate layer ----------------------------------------------------------


class UPoly:
    """Dense univariate polynomial in an auxiliary indeterminate, with
    MultiPoly coefficients over a shared VarSet.  coeffs[k] multiplies the
    k-th power; trailing zeros are trimmed, so the zero polynomial has an
    empty coefficient list and degree -1.
    """

    __slots__ = ("vs", "coeffs")

    def __init__(self, vs: VarSet, coeffs: Iterable):
        cs = []
        for c in coeffs:
            if not isinstance(c, MultiPoly):
                c = MultiPoly.const(vs, c)
            elif c.vs != vs:
                raise ValueError("coefficient VarSet mismatch")
            cs.append(c)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.vs = vs
        self.coeffs = cs

    @classmethod
    def zero(cls, vs: VarSet) -> "UPoly":
        return cls(vs, [])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> MultiPoly:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return MultiPoly.zero(self.vs)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.vs == other.vs and self.coeffs == other.coeffs

    def __add__(self, other: "UPoly") -> "UPoly":
        if self.vs != other.vs:
            raise ValueError("VarSet mismatch")
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self.vs, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self):
        return UPoly(self.vs, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "UPoly":
        return UPoly(self.vs, [c * factor for c in self.coeffs])

    def compose_affine(self, shift: Fraction | int) -> "UPoly":
        """Return q(t) = self(t + shift), by Horner over t + shift."""
        shift = Fraction(shift)
        res: list[MultiPoly] = []
        for coef in reversed(self.coeffs):
            new = [MultiPoly.zero(self.vs) for _ in range(len(res) + 1)]
            for k, ck in enumerate(res):
                new[k + 1] = new[k + 1] + ck
                new[k] = new[k] + ck * shift
            new[0] = new[0] + coef
            res = new
        return UPoly(self.vs, res)

    def is_odd(self) -> bool:
        """True when only odd powers of the indeterminate occur."""
        return all(c.is_zero() for c in self.coeffs[0::2])

    def even_part(self) -> "UPoly":
        cs = [c if k % 2 == 0 else MultiPoly.zero(self.vs) for k, c in enumerate(self.coeffs)]
        return UPoly(self.vs, cs)

    def eval_scalar(self, x: Fraction | int) -> MultiPoly:
        """Evaluate the indeterminate at a rational; coefficients survive."""
        x = Fraction(x)
        acc = MultiPoly.zero(self.vs)
        for coef in reversed(self.coeffs):
            acc = acc * x + coef
        return acc

    def eval_poly(self, arg: MultiPoly) -> MultiPoly:
        """Evaluate the indeterminate at a polynomial (Horner).  Coefficients
        are cast into the argument's VarSet, so they must only use variables
        available there (constants always work)."""
        acc = MultiPoly.zero(arg.vs)
        for coef in reversed(self.coeffs):
            acc = acc * arg + coef.cast(arg.vs)
        return acc

    def to_multipoly(self, indet: str) -> MultiPoly:
        """Flatten into a MultiPoly over vs + (indet,), indet appended last."""
        full = VarSet(self.vs.names + (indet,))
        out: dict[tuple[int, ...], Fraction] = {}
        for k, coef in enumerate(self.coeffs):
            for exps, c in coef.terms.items():
                out[exps + (k,)] = c
        return MultiPoly._raw(full, out)

    def text(self, indet: str = "t") -> str:
        return self.to_multipoly(indet).text()

    def __repr__(self):
        return f"UPoly({self.text()!r})"


def to_upoly(p: MultiPoly, var: str) -> UPoly:
    """View a MultiPoly as univariate in `var` with coefficients over the
    remaining variables."""
    i = p.vs.index(var)
    sub = p.vs.without(var)
    buckets: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for exps, c in p.terms.items():
        k = exps[i]
        buckets.setdefault(k, {})[exps[:i] + exps[i + 1 :]] = c
    deg = max(buckets, default=-1)
    return UPoly(sub, [MultiPoly._raw(sub, buckets.get(k, {})) for k in range(deg + 1)])


# -- denominator profile and exact division ------------------------------------


@dataclass(frozen=True)
class DenomProfile:
    """Summary of a polynomial's coefficient denominators.

    lcm_denominator: lcm of all coefficient denominators (1 for the zero
    polynomial); two_adic_only: that lcm is a power of 2; max_neg_v2: the
    largest 2-adic defect max(0, -val2(coefficient)).
    """

    lcm_denominator: int
    two_adic_only: bool
    max_neg_v2: int


def denom_profile(p: MultiPoly) -> DenomProfile:
    lcm = 1
    worst = 0
    for coef in p.terms.values():
        d = coef.denominator
        lcm = lcm * d // _gcd(lcm, d)
        v = val2(coef)
        if -v > worst:
            worst = int(-v)
    return DenomProfile(lcm, lcm & (lcm - 1) == 0, worst)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def exact_div_linear(p: MultiPoly, m: Sequence[int]) -> MultiPoly:
    """Divide p exactly by the linear form sum(m[i] * x_i).

    Synthetic division on the first variable with a nonzero weight; raises
    InexactDivisionError carrying the remainder when the division is not
    exact.  At least one weight must be nonzero.
    """
    if len(m) != len(p.vs):
        raise ValueError("weight vector length does not match variable count")
    pivot = next((i for i, w in enumerate(m) if w), None)
    if pivot is None:
        raise ValueError("all-zero weight vector")
    if p.is_zero():
        return p

    mp = Fraction(m[pivot])
    rest = linear_form(p.vs, [0 if i == pivot else w for i, w in enumerate(m)])

    # split p by pivot exponent, zeroing the pivot slot in each part
    parts: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for exps, c in p.terms.items():
        k = exps[pivot]
        stripped = exps[:pivot] + (0,) + exps[pivot + 1 :]
        parts.setdefault(k, {})[stripped] = c
    polys = {k: MultiPoly._raw(p.vs, t) for k, t in parts.items()}
    deg = max(polys)

    zero = MultiPoly.zero(p.vs)
    quot: dict[tuple[int, ...], Fraction] = {}
    cur = polys.get(deg, zero)
    for k in range(deg, 0, -1):
        qk = cur * (1 / mp)
        for exps, c in qk.terms.items():
            e = exps[:pivot] + (k - 1,) + exps[pivot + 1 :]
            quot[e] = c
        cur = polys.get(k - 1, zero) - qk * rest
    if not cur.is_zero():
        raise InexactDivisionError(
            f"linear division by weights {tuple(m)} leaves remainder {cur.text()}",
            remainder=cur,
        )
    return MultiPoly._raw(p.vs, quot)
