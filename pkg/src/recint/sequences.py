"""Parametric sequence generators and the exact transforms between them.

The two core families live over the ring Z[b, c]:

  w: n*w[n] + (n*(n-1) - b)*w[n-1] - c*w[n-3] = 0,  w[0] = 1
  u: n*u[n] - 2*(2*n-1)*(n*(n-1) - b)*u[n-1] + 4*c*(n-1)*u[n-2] = 0,  u[0] = 1

u is the coefficient sequence of the even product series built from the
w-generating series; u_conv, u_bin and w_inv are the independent routes
between the two families that the test suite plays against each other.
Apery's integer sequence rides along as the classical stress case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .multipoly import MultiPoly, VarSet, denom_profile
from .scalars import binomial, factorial

RING_BC = VarSet.of("b", "c")
RING_B = VarSet.of("b")
#: Square-root cover of RING_BC used by w_inv: s stands in for sqrt(c).
RING_BS = VarSet.of("b", "s")

_B = MultiPoly.variable(RING_BC, "b")
_C = MultiPoly.variable(RING_BC, "c")


class IntegralityViolationError(ArithmeticError):
    """An exact integer division demanded by a recurrence failed."""


class IdentityViolationError(ArithmeticError):
    """A structural cancellation demanded by a closed formula failed."""


@dataclass
class ParamSeq:
    """A finite prefix of a parametric sequence: one MultiPoly per index."""

    ring: VarSet
    terms: list[MultiPoly]
    provenance: str

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, n: int) -> MultiPoly:
        return self.terms[n]


class _SeqCache:
    """Incremental generator cache: terms are computed once, on demand."""

    def __init__(self, first: MultiPoly, step):
        self.terms = [first]
        self.step = step

    def upto(self, n: int) -> list[MultiPoly]:
        while len(self.terms) <= n:
            self.terms.append(self.step(len(self.terms), self.terms))
        return self.terms[: n + 1]


def _w_step(n: int, w: list[MultiPoly]) -> MultiPoly:
    acc = (_B - n * (n - 1)) * w[n - 1]
    if n >= 3:
        acc = acc + _C * w[n - 3]
    return acc / n


def _u_step(n: int, u: list[MultiPoly]) -> MultiPoly:
    acc = (_B - n * (n - 1)) * u[n - 1] * (-2 * (2 * n - 1))
    if n >= 2:
        acc = acc - _C * u[n - 2] * (4 * (n - 1))
    return acc / n


_W_CACHE = _SeqCache(MultiPoly.one(RING_BC), _w_step)
_U_CACHE = _SeqCache(MultiPoly.one(RING_BC), _u_step)


def gen_w(n: int) -> ParamSeq:
    """w[0..n] from the three-term recurrence."""
    if n < 0:
        raise ValueError("negative length")
    return ParamSeq(RING_BC, _W_CACHE.upto(n), "recurrence")


def gen_u(n: int) -> ParamSeq:
    """u[0..n] from the two-term recurrence."""
    if n < 0:
        raise ValueError("negative length")
    return ParamSeq(RING_BC, _U_CACHE.upto(n), "recurrence")


def gen_apery(n: int) -> list[int]:
    """Apery's sequence 1, 5, 73, 1445, ... via its three-term recurrence.

    Each step divides by n^3; inexactness would disprove integrality and
    raises IntegralityViolationError.
    """
    if n < 0:
        raise ValueError("negative length")
    terms = [1]
    for k in range(1, n + 1):
        acc = (2 * k - 1) * (17 * k * k - 17 * k + 5) * terms[k - 1]
        if k >= 2:
            acc -= (k - 1) ** 3 * terms[k - 2]
        q, r = divmod(acc, k**3)
        if r:
            raise IntegralityViolationError(f"apery step {k}: remainder {r} after /{k**3}")
        terms.append(q)
    return terms


def apery_closed_form(n: int) -> int:
    """Independent oracle: sum of binomial(n+k, k)^2 * binomial(n, k)^2."""
    return sum(binomial(n + k, k) ** 2 * binomial(n, k) ** 2 for k in range(n + 1))


# -- transforms between the families -------------------------------------------


def u_conv(n: int, w: ParamSeq) -> ParamSeq:
    """u via the alternating self-convolution of w.

    u[m] = sum_{k=0}^{2m} (-1)^k w[k] w[2m-k]; needs w up to index 2n.

    Evaluated over the integer rescaling W[k] = k! w[k], with the mirror
    pair (k, 2m-k) collapsed (both carry sign (-1)^k), so that every
    intermediate coefficient stays an integer:

        u[m] = ( (-1)^m binom(2m,m) W[m]^2
                 + 2 sum_{k<m} (-1)^k binom(2m,k) W[k] W[2m-k] ) / (2m)!
    """
    if len(w) < 2 * n + 1:
        raise ValueError(f"need w terms up to index {2 * n}, have {len(w) - 1}")
    scaled = [term * factorial(k) for k, term in enumerate(w.terms[: 2 * n + 1])]
    terms = []
    for m in range(n + 1):
        acc = scaled[m] * scaled[m] * ((-1) ** m * binomial(2 * m, m))
        for k in range(m):
            prod = scaled[k] * scaled[2 * m - k] * (2 * binomial(2 * m, k))
            acc = acc - prod if k % 2 else acc + prod
        terms.append(acc / factorial(2 * m))
    return ParamSeq(w.ring, terms, "convolution")


def u_bin(n: int, w: ParamSeq) -> ParamSeq:
    """u via the single binomial sum.

    u[m] = (-1)^m sum_{k=0}^{floor(m/2)} (-1)^k c^k (m-2k)! w[m-2k]
                   * binomial(m-k, k) * binomial(2m-2k, m-k)
    """
    if len(w) < n + 1:
        raise ValueError(f"need w terms up to index {n}, have {len(w) - 1}")
    ck = [MultiPoly.one(RING_BC)]
    for _ in range(n // 2):
        ck.append(ck[-1] * _C)
    terms = []
    for m in range(n + 1):
        acc = MultiPoly.zero(RING_BC)
        for k in range(m // 2 + 1):
            coef = factorial(m - 2 * k) * binomial(m - k, k) * binomial(2 * m - 2 * k, m - k)
            piece = ck[k] * w[m - 2 * k] * coef
            acc = acc - piece if k % 2 else acc + piece
        terms.append(acc if m % 2 == 0 else -acc)
    return ParamSeq(RING_BC, terms, "binomial-formula")


def _embed_sqrt(p: MultiPoly) -> MultiPoly:
    """Map Z[b, c] into Z[b, s] by c -> s^2."""
    if p.vs != RING_BC:
        raise ValueError("expected a polynomial over (b, c)")
    return MultiPoly(RING_BS, {(i, 2 * j): coef for (i, j), coef in p.terms.items()})


def split_sqrt_parity(p: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Split a Z[b, s] polynomial into its even-in-s and odd-in-s parts."""
    even: dict[tuple[int, int], Fraction] = {}
    odd: dict[tuple[int, int], Fraction] = {}
    for (i, j), coef in p.terms.items():
        (odd if j % 2 else even)[(i, j)] = coef
    return MultiPoly(RING_BS, even), MultiPoly(RING_BS, odd)


def inv_formula_sum(n: int, u: ParamSeq) -> MultiPoly:
    """Raw inversion sum for n! * w[n], over Z[b, s] with s^2 = c.

    sum_{m=0}^{n} binomial(n,m)/binomial(2m,m)
      * sum_{k=0}^{m} (-1)^(n+m+k) (binomial(2m,m-k) - binomial(2m,m-k-1))
                      * 2^(m-k) * s^(n-k) * u[k](b, s^2)

    The half-integer powers of c appear as odd powers of s; they must cancel
    identically in the total (checked by the caller).
    """
    us = [_embed_sqrt(u[k]) for k in range(n + 1)]
    total = MultiPoly.zero(RING_BS)
    for m in range(n + 1):
        pref = Fraction(binomial(n, m), binomial(2 * m, m))
        inner = MultiPoly.zero(RING_BS)
        for k in range(m + 1):
            c = (binomial(2 * m, m - k) - binomial(2 * m, m - k - 1)) * 2 ** (m - k)
            if (n + m + k) % 2:
                c = -c
            spow = MultiPoly.monomial(RING_BS, (0, n - k), 1)
            inner = inner + us[k] * spow * c
        total = total + inner * pref
    return total


def w_inv(n: int, u: ParamSeq) -> ParamSeq:
    """n! * w[n] recovered from u alone, via the inversion sum.

    Raises IdentityViolationError if any odd power of s survives; otherwise
    reduces s^2 -> c and returns the factorial-scaled w prefix.
    """
    if len(u) < n + 1:
        raise ValueError(f"need u terms up to index {n}, have {len(u) - 1}")
    terms = []
    for m in range(n + 1):
        raw = inv_formula_sum(m, u)
        even, odd = split_sqrt_parity(raw)
        if not odd.is_zero():
            raise IdentityViolationError(
                f"inversion sum at n={m}: odd sqrt powers survive: {odd.text()}"
            )
        reduced = MultiPoly(
            RING_BC, {(i, j // 2): coef for (i, j), coef in even.terms.items()}
        )
        terms.append(reduced)
    return ParamSeq(RING_BC, terms, "inversion-formula")


# -- specializations -------------------------------------------------------------


def poch_product(n: int) -> MultiPoly:
    """prod_{i=0}^{n-1} (i*(i+1) - b) over Z[b]: the collapsed Pochhammer pair."""
    acc = MultiPoly.one(RING_B)
    bvar = MultiPoly.variable(RING_B, "b")
    for i in range(n):
        acc = acc * (MultiPoly.const(RING_B, i * (i + 1)) - bvar)
    return acc


def u_c0(n: int) -> MultiPoly:
    """Closed form of u[n] at c = 0: binomial(2n, n) * poch_product(n)."""
    return poch_product(n) * binomial(2 * n, n)


# -- structured dumps ------------------------------------------------------------


def seq_records(seq: ParamSeq) -> list[dict]:
    """One record per term: index, canonical text, denominator profile."""
    out = []
    for i, term in enumerate(seq.terms):
        prof = denom_profile(term)
        out.append(
            {
                "n": i,
                "poly": term.text(),
                "denominator": prof.lcm_denominator,
                "v2_defect": prof.max_neg_v2,
            }
        )
    return out
