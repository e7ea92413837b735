"""Multivariate bracket tables and their integrality certification.

For a tuple Q = (Q_1, ..., Q_d) of integer polynomials and a lattice point
m in Z_{>=0}^d, the bracket <Q>_m is defined by <Q>_0 = 1 and

    <Q>_m = ( sum_i Q_i(<m, x> - x_i/2) * <Q>_{m - e_i} ) / <m, x>

where <m, x> = sum_j m_j x_j, entries at points with a negative coordinate
are 0, and the division by the linear form must be exact.  For tuples of odd
polynomials every entry is a polynomial whose coefficient denominators are
pure powers of 2; certify_table checks exactly that, entry by entry.

The same tables drive the expansion of odd-form recurrence terms: each
monomial in the recurrence's atom coefficients is weighted by a bracket of
the corresponding monomial tuple, evaluated at the integer weights.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .multipoly import (
    InexactDivisionError,
    MultiPoly,
    UPoly,
    VarSet,
    denom_profile,
    exact_div_linear,
    linear_form,
)
from .scalars import binomial, factorial

#: Coefficient ring of the Q polynomials themselves: plain integers.
SCALARS = VarSet.of()


class BracketDivisionError(ArithmeticError):
    """Bracket construction hit an inexact division at a lattice point."""

    def __init__(self, point: tuple[int, ...], remainder: MultiPoly):
        super().__init__(
            f"inexact division at m={point}: remainder {remainder.text()}"
        )
        self.point = point
        self.remainder = remainder


class Theorem3ViolationError(ArithmeticError):
    """An odd tuple produced a non-2-power denominator; this disproves the
    integrality guarantee and must never fire."""


def x_varset(d: int) -> VarSet:
    return VarSet.of(*(f"x{i}" for i in range(1, d + 1)))


class QTuple:
    """Validated tuple of univariate integer polynomials.

    Odd tuples (only odd powers of t) are the certified regime; permissive
    mode admits arbitrary integer polynomials for exploration.
    """

    def __init__(self, polys: Sequence[UPoly], permissive: bool = False):
        if not polys:
            raise ValueError("empty tuple")
        ps = []
        for p in polys:
            if p.vs != SCALARS:
                raise ValueError("Q polynomials must have plain integer coefficients")
            for c in p.coeffs:
                if not c.is_constant() or c.constant_value().denominator != 1:
                    raise ValueError(f"non-integer coefficient in {p.text()}")
            ps.append(p)
        self.polys = tuple(ps)
        self.permissive = permissive
        if not permissive and not self.is_odd():
            raise ValueError(
                "tuple contains a non-odd polynomial; pass permissive=True to explore"
            )

    @property
    def d(self) -> int:
        return len(self.polys)

    def is_odd(self) -> bool:
        return all(p.is_odd() for p in self.polys)

    def text(self) -> str:
        return ", ".join(p.text() for p in self.polys)


def q_monomial(halfdeg: int) -> UPoly:
    """The canonical odd atom t^(2*halfdeg + 1)."""
    if halfdeg < 0:
        raise ValueError("negative half-degree")
    coeffs = [0] * (2 * halfdeg + 1) + [1]
    return UPoly(SCALARS, coeffs)


def q_from_coeffs(coeffs: Sequence[int]) -> UPoly:
    return UPoly(SCALARS, coeffs)


class BracketTable:
    """Lazily built table of bracket entries for one Q tuple.

    Entries are memoized over the full dependency cone of every queried
    point; construction is by level |m|, and within a level the points are
    independent, so they may be computed by a small thread pool without
    affecting the results.
    """

    def __init__(self, q: QTuple):
        self.q = q
        self.vs = x_varset(q.d)
        self.entries: dict[tuple[int, ...], MultiPoly] = {
            (0,) * q.d: MultiPoly.one(self.vs)
        }
        self.levels_done = 0

    # -- access --------------------------------------------------------------

    def entry(self, m: Sequence[int]) -> MultiPoly:
        """The bracket at m; points with a negative coordinate give 0."""
        m = tuple(m)
        if len(m) != self.q.d:
            raise ValueError("lattice point has wrong dimension")
        if any(c < 0 for c in m):
            return MultiPoly.zero(self.vs)
        if m not in self.entries:
            self._ensure_box(m)
        return self.entries[m]

    def _ensure_box(self, m: tuple[int, ...]):
        # every point p <= m (componentwise), in level order
        for level in range(1, sum(m) + 1):
            for p in _box_level(m, level):
                if p not in self.entries:
                    self.entries[p] = self._compute(p)

    def _compute(self, m: tuple[int, ...]) -> MultiPoly:
        num = MultiPoly.zero(self.vs)
        half = Fraction(1, 2)
        for i in range(self.q.d):
            if m[i] == 0:
                continue
            prev = self.entries[m[:i] + (m[i] - 1,) + m[i + 1 :]]
            if prev.is_zero():
                continue
            arg = linear_form(self.vs, [Fraction(w) - (half if j == i else 0) for j, w in enumerate(m)])
            num = num + self.q.polys[i].eval_poly(arg) * prev
        try:
            return exact_div_linear(num, m)
        except InexactDivisionError as e:
            raise BracketDivisionError(m, e.remainder) from e

    def extend_to_level(self, bound: int, jobs: int = 1):
        """Complete all levels |m| <= bound; deterministic regardless of jobs."""
        while self.levels_done < bound:
            level = self.levels_done + 1
            points = [p for p in _simplex_level(self.q.d, level) if p not in self.entries]
            if jobs > 1 and len(points) > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    values = list(pool.map(self._compute, points))
            else:
                values = [self._compute(p) for p in points]
            for p, v in zip(points, values):
                self.entries[p] = v
            self.levels_done = level

    # -- export ----------------------------------------------------------------

    def export(self) -> list[dict]:
        """Sorted records (by level, then lexicographically): point, canonical
        text, 2-adic defect."""
        out = []
        for m in sorted(self.entries, key=lambda p: (sum(p), p)):
            poly = self.entries[m]
            prof = denom_profile(poly)
            out.append(
                {
                    "m": list(m),
                    "poly": poly.text(),
                    "denominator": prof.lcm_denominator,
                    "v2_defect": prof.max_neg_v2,
                }
            )
        return out


def _simplex_level(d: int, level: int) -> list[tuple[int, ...]]:
    """All points of Z_{>=0}^d with coordinate sum == level, sorted."""
    if d == 1:
        return [(level,)]
    out = []
    for first in range(level, -1, -1):
        for rest in _simplex_level(d - 1, level - first):
            out.append((first,) + rest)
    return sorted(out)


def _box_level(m: tuple[int, ...], level: int) -> Iterable[tuple[int, ...]]:
    """Points p <= m componentwise with |p| == level, sorted."""
    return sorted(p for p in _simplex_level(len(m), level) if all(a <= b for a, b in zip(p, m)))


def bracket(q: QTuple, m: Sequence[int], table: BracketTable | None = None) -> MultiPoly:
    """One-shot bracket evaluation (builds a throwaway table unless given one)."""
    if table is None:
        table = BracketTable(q)
    return table.entry(m)


def r3_closed_form(m: Sequence[int]) -> Fraction:
    """Closed form for the all-t tuple: the bracket collapses to the constant

        binomial(2|m|, |m|) / 4^|m| * multinomial(|m|; m)

    i.e. the z^m coefficient of (1 - z_1 - ... - z_d)^(-1/2).
    """
    m = tuple(m)
    if any(c < 0 for c in m):
        return Fraction(0)
    s = sum(m)
    multi = factorial(s)
    for c in m:
        multi //= factorial(c)
    return Fraction(binomial(2 * s, s) * multi, 4**s)


# -- certification ------------------------------------------------------------------


@dataclass
class BracketCertification:
    """Outcome of sweeping a bracket table up to a level bound."""

    tuple_text: str
    odd_tuple: bool
    bound: int
    entry_count: int
    level_max_defect: list[int]
    slope: float
    all_pow2: bool
    even_degree_ok: bool
    inexact_at: list[int] | None
    inexact_remainder: str | None
    violations: list[dict]
    certified: bool

    def to_dict(self) -> dict:
        return {
            "tuple": self.tuple_text,
            "odd_tuple": self.odd_tuple,
            "bound": self.bound,
            "entry_count": self.entry_count,
            "level_max_defect": self.level_max_defect,
            "slope": self.slope,
            "all_pow2": self.all_pow2,
            "even_degree_ok": self.even_degree_ok,
            "inexact_at": self.inexact_at,
            "inexact_remainder": self.inexact_remainder,
            "violations": self.violations,
            "certified": self.certified,
        }


def certify_table(q: QTuple, bound: int, jobs: int = 1, table: BracketTable | None = None) -> BracketCertification:
    """Build levels 0..bound and check the power-of-2 denominator guarantee.

    For odd tuples a violation (non-2-power denominator or inexact division)
    raises Theorem3ViolationError: it would be a counterexample, not a report.
    For permissive tuples the first failure is recorded and certification is
    marked failed.  The observed defect-growth slope is reported but never
    asserted against.
    """
    if table is None:
        table = BracketTable(q)
    inexact_at = None
    inexact_rem = None
    try:
        table.extend_to_level(bound, jobs=jobs)
    except BracketDivisionError as e:
        if q.is_odd():
            raise Theorem3ViolationError(str(e)) from e
        inexact_at = list(e.point)
        inexact_rem = e.remainder.text()

    violations = []
    level_max = [0] * (bound + 1)
    even_ok = True
    count = 0
    for m, poly in sorted(table.entries.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        level = sum(m)
        if level > bound:
            continue
        count += 1
        prof = denom_profile(poly)
        if prof.max_neg_v2 > level_max[level]:
            level_max[level] = prof.max_neg_v2
        if not prof.two_adic_only:
            violations.append(
                {"m": list(m), "denominator": prof.lcm_denominator, "poly": poly.text()}
            )
        if any(sum(e) % 2 for e in poly.terms):
            even_ok = False
    if violations and q.is_odd():
        worst = violations[0]
        raise Theorem3ViolationError(
            f"odd tuple ({q.text()}) produced denominator {worst['denominator']} at m={worst['m']}"
        )

    slope = _fit_slope(level_max)
    certified = q.is_odd() and not violations and inexact_at is None
    return BracketCertification(
        tuple_text=q.text(),
        odd_tuple=q.is_odd(),
        bound=bound,
        entry_count=count,
        level_max_defect=level_max,
        slope=slope,
        all_pow2=not violations,
        even_degree_ok=even_ok,
        inexact_at=inexact_at,
        inexact_remainder=inexact_rem,
        violations=violations,
        certified=certified,
    )


def _fit_slope(level_max: list[int]) -> float:
    """Least-squares slope of max defect against level; 0 for a single level."""
    n = len(level_max)
    if n < 2:
        return 0.0
    xs = range(n)
    xbar = Fraction(sum(xs), n)
    ybar = Fraction(sum(level_max), n)
    num = sum((Fraction(x) - xbar) * (Fraction(y) - ybar) for x, y in zip(xs, level_max))
    den = sum((Fraction(x) - xbar) ** 2 for x in xs)
    return float(num / den)


# -- odd-form expansion ----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """One monomial a * t^(2j+1) of an odd-form recurrence polynomial p_i."""

    weight: int  # i: how far back the recurrence term reaches
    halfdeg: int  # j: the monomial is t^(2j+1)
    coeff: MultiPoly  # a: coefficient in the recurrence's parameter ring


@dataclass
class OddFormExpansion:
    """All atoms of an odd-form recurrence, in canonical (weight, halfdeg) order."""

    ring: VarSet
    atoms: tuple[Atom, ...]


def decompose_odd(p: UPoly) -> list[tuple[int, MultiPoly]]:
    """Split an odd polynomial into canonical atoms (halfdeg, coefficient)."""
    if not p.is_odd():
        raise ValueError(f"not an odd polynomial: {p.text()}")
    out = []
    for k, c in enumerate(p.coeffs):
        if k % 2 and not c.is_zero():
            out.append(((k - 1) // 2, c))
    return out


def build_expansion(odd_polys: Sequence[UPoly], ring: VarSet) -> OddFormExpansion:
    """Atoms of the full odd form p_1, ..., p_r (index i = position + 1)."""
    atoms = []
    for i, p in enumerate(odd_polys, start=1):
        if p.vs != ring:
            raise ValueError("odd-form polynomial ring mismatch")
        for j, coeff in decompose_odd(p):
            atoms.append(Atom(i, j, coeff))
    atoms.sort(key=lambda a: (a.weight, a.halfdeg))
    return OddFormExpansion(ring, tuple(atoms))


def _multisets(atoms: Sequence[Atom], n: int) -> list[list[tuple[Atom, int]]]:
    """All multiplicity assignments with total weight n, deterministic order."""
    out: list[list[tuple[Atom, int]]] = []

    def rec(idx: int, remaining: int, chosen: list[tuple[Atom, int]]):
        if remaining == 0:
            out.append(list(chosen))
            return
        if idx == len(atoms):
            return
        atom = atoms[idx]
        for mult in range(remaining // atom.weight, -1, -1):
            if mult:
                chosen.append((atom, mult))
            rec(idx + 1, remaining - mult * atom.weight, chosen)
            if mult:
                chosen.pop()

    rec(0, n, [])
    return out


class _TableCache:
    """Bracket tables shared across multisets, keyed by the Q monomial tuple."""

    def __init__(self):
        self.tables: dict[tuple[int, ...], BracketTable] = {}

    def get(self, halfdegs: tuple[int, ...]) -> BracketTable:
        if halfdegs not in self.tables:
            q = QTuple([q_monomial(j) for j in halfdegs])
            self.tables[halfdegs] = BracketTable(q)
        return self.tables[halfdegs]


@dataclass
class ExpansionTerm:
    """One multiset's contribution to the expansion of u[n]."""

    multiset: list[tuple[int, int, int]]  # (weight, halfdeg, multiplicity)
    bracket_value: Fraction
    contribution: MultiPoly


def expand_terms(
    expansion: OddFormExpansion, n: int, cache: _TableCache | None = None
) -> list[ExpansionTerm]:
    """All bracket-weighted contributions to u[n], in deterministic order."""
    if n < 0:
        raise ValueError("negative index")
    cache = cache or _TableCache()
    terms = []
    for multiset in _multisets(expansion.atoms, n):
        halfdegs = tuple(atom.halfdeg for atom, _ in multiset)
        point = tuple(mult for _, mult in multiset)
        weights = tuple(atom.weight for atom, _ in multiset)
        if multiset:
            table = cache.get(halfdegs)
            poly = table.entry(point)
            value = poly.eval({f"x{k + 1}": w for k, w in enumerate(weights)})
        else:
            value = Fraction(1)  # empty product: u[0] = 1
        contrib = MultiPoly.const(expansion.ring, value)
        for atom, mult in multiset:
            contrib = contrib * atom.coeff**mult
        terms.append(
            ExpansionTerm(
                multiset=[(a.weight, a.halfdeg, mult) for a, mult in multiset],
                bracket_value=value,
                contribution=contrib,
            )
        )
    return terms


def expand_via_brackets(
    expansion: OddFormExpansion, n: int, cache: _TableCache | None = None
) -> MultiPoly:
    """u[n] reconstructed purely from bracket tables and atom coefficients."""
    total = MultiPoly.zero(expansion.ring)
    for term in expand_terms(expansion, n, cache):
        total = total + term.contribution
    return total


def expansion_cache() -> _TableCache:
    return _TableCache()
