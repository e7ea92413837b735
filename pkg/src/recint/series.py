"""Truncated power series in t with MultiPoly coefficients, the two pinned
differential operators, and the identity battery that plays the series
routes against the recurrence routes.

Truncation discipline: arithmetic keeps a fixed order N; differentiation is
the only lossy step, so a k-th order operator applied to an order-N series
is trustworthy through order N - k and the residual is truncated there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .multipoly import MultiPoly, UPoly, VarSet
from .scalars import binomial, factorial
from .sequences import RING_B, RING_BC, gen_u, gen_w, poch_product


class TruncSeries:
    """Power series truncated at a fixed order; coeffs[k] multiplies t^k."""

    __slots__ = ("vs", "order", "coeffs")

    def __init__(self, vs: VarSet, order: int, coeffs: Sequence = ()):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        cs = []
        for c in list(coeffs)[: order + 1]:
            if not isinstance(c, MultiPoly):
                c = MultiPoly.const(vs, c)
            elif c.vs != vs:
                raise ValueError("coefficient VarSet mismatch")
            cs.append(c)
        zero = MultiPoly.zero(vs)
        while len(cs) < order + 1:
            cs.append(zero)
        self.vs = vs
        self.order = order
        self.coeffs = cs

    @classmethod
    def zeros(cls, vs: VarSet, order: int) -> "TruncSeries":
        return cls(vs, order)

    @classmethod
    def one(cls, vs: VarSet, order: int) -> "TruncSeries":
        return cls(vs, order, [MultiPoly.one(vs)])

    def _check(self, other: "TruncSeries"):
        if self.vs != other.vs:
            raise ValueError("VarSet mismatch")
        if self.order != other.order:
            raise ValueError(f"truncation order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(
            self.vs, self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(
            self.vs, self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.vs, self.order, [-a for a in self.coeffs])

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        zero = MultiPoly.zero(self.vs)
        out = [zero] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(self.order + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(self.vs, self.order, out)

    def scale(self, factor) -> "TruncSeries":
        """Coefficientwise multiplication by a scalar or MultiPoly."""
        return TruncSeries(self.vs, self.order, [c * factor for c in self.coeffs])

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k, dropping what overflows the truncation order."""
        if k < 0:
            raise ValueError("negative shift")
        zero = MultiPoly.zero(self.vs)
        return TruncSeries(self.vs, self.order, [zero] * k + self.coeffs[: self.order + 1 - k])

    def reflect(self) -> "TruncSeries":
        """t -> -t: negate the odd coefficients."""
        return TruncSeries(
            self.vs,
            self.order,
            [-c if k % 2 else c for k, c in enumerate(self.coeffs)],
        )

    def diff(self) -> "TruncSeries":
        """d/dt; the result's trustworthy order drops by one."""
        if self.order == 0:
            return TruncSeries(self.vs, 0)
        return TruncSeries(
            self.vs,
            self.order - 1,
            [(k + 1) * self.coeffs[k + 1] for k in range(self.order)],
        )

    def theta(self) -> "TruncSeries":
        """t * d/dt, degree-preserving: coefficient k picks up a factor k."""
        return TruncSeries(self.vs, self.order, [k * c for k, c in enumerate(self.coeffs)])

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.vs, order, self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.vs == other.vs and self.order == other.order and self.coeffs == other.coeffs

    def first_mismatch(self, other: "TruncSeries") -> tuple[int, str, str] | None:
        self._check(other)
        for k, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return (k, a.text(), b.text())
        return None

    def __repr__(self):
        parts = [f"({c.text()})*t^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"TruncSeries[{' + '.join(parts) or '0'} + O(t^{self.order + 1})]"


def inv_sqrt(a: TruncSeries) -> TruncSeries:
    """S with S^2 * a = 1 through the truncation order; a must start at 1.

    Computed by first inverting a (standard reciprocal recurrence), then
    taking the coefficientwise square root recurrence.
    """
    one = MultiPoly.one(a.vs)
    if a.coeffs[0] != one:
        raise ValueError("inv_sqrt requires constant term exactly 1")
    n = a.order
    zero = MultiPoly.zero(a.vs)
    # reciprocal r of a
    r = [one] + [zero] * n
    for k in range(1, n + 1):
        acc = zero
        for j in range(1, k + 1):
            if not a.coeffs[j].is_zero():
                acc = acc + a.coeffs[j] * r[k - j]
        r[k] = -acc
    # square root s of r
    s = [one] + [zero] * n
    for k in range(1, n + 1):
        acc = r[k]
        for i in range(1, k):
            acc = acc - s[i] * s[k - i]
        s[k] = acc / 2
    return TruncSeries(a.vs, n, s)


# -- pinned differential operators -----------------------------------------------


@dataclass(frozen=True)
class OdeOperator:
    """Linear differential operator sum_k p_k(t) * D^k with polynomial
    coefficients; p_k is a UPoly in t.  Applying an operator of maximal
    derivative order k to an order-N series yields a residual trustworthy
    through order N - k.
    """

    vs: VarSet
    terms: tuple[tuple[int, UPoly], ...]

    @property
    def max_order(self) -> int:
        return max((k for k, _ in self.terms), default=0)

    def apply(self, y: TruncSeries) -> TruncSeries:
        if y.vs != self.vs:
            raise ValueError("VarSet mismatch")
        n = y.order
        kmax = self.max_order
        if n < kmax:
            raise ValueError("series order too small for this operator")
        zero = MultiPoly.zero(self.vs)
        out = [zero] * (n + 1)
        for k, poly in self.terms:
            # k-th derivative coefficients, exact through index n - k
            dk = list(y.coeffs)
            for _ in range(k):
                dk = [(i + 1) * dk[i + 1] for i in range(len(dk) - 1)]
            for j, cj in enumerate(poly.coeffs):
                if cj.is_zero():
                    continue
                for i, di in enumerate(dk):
                    if i + j <= n and not di.is_zero():
                        out[i + j] = out[i + j] + cj * di
        return TruncSeries(self.vs, n - kmax, out[: n - kmax + 1])


def base_ode(vs: VarSet = RING_BC) -> OdeOperator:
    """t^2 y'' + (1 + 2t) y' - (c t^2 + b) y, the second-order operator whose
    coefficient recursion is exactly the three-term w recurrence."""
    b = MultiPoly.variable(vs, "b")
    c = MultiPoly.variable(vs, "c")
    zero = MultiPoly.zero(vs)
    one = MultiPoly.one(vs)
    return OdeOperator(
        vs,
        (
            (2, UPoly(vs, [zero, zero, one])),
            (1, UPoly(vs, [one, MultiPoly.const(vs, 2)])),
            (0, UPoly(vs, [-b, zero, -c])),
        ),
    )


def symmetric_square_ode(vs: VarSet = RING_BC) -> OdeOperator:
    """t^4 Y''' + 6 t^3 Y'' - (4c t^4 - (6 - 4b) t^2 + 1) Y' - 4t (2c t^2 + b) Y.

    Third-order operator annihilating the even product series; its odd-index
    coefficient recursion is exactly the two-term u recurrence.
    """
    b = MultiPoly.variable(vs, "b")
    c = MultiPoly.variable(vs, "c")
    zero = MultiPoly.zero(vs)
    one = MultiPoly.one(vs)
    return OdeOperator(
        vs,
        (
            (3, UPoly(vs, [zero, zero, zero, zero, one])),
            (2, UPoly(vs, [zero, zero, zero, MultiPoly.const(vs, 6)])),
            (1, UPoly(vs, [-one, zero, MultiPoly.const(vs, 6) - b * 4, zero, -c * 4])),
            (0, UPoly(vs, [zero, -b * 4, zero, -c * 8])),
        ),
    )


def ode_residual(op: OdeOperator, y: TruncSeries) -> TruncSeries:
    """Apply the operator and truncate to the trustworthy order."""
    return op.apply(y)


# -- series built from the sequences ----------------------------------------------


def base_series(order: int) -> TruncSeries:
    """g(t) = sum w[n] t^n through the truncation order."""
    w = gen_w(order)
    return TruncSeries(RING_BC, order, w.terms)


def product_series(order: int) -> TruncSeries:
    """G(t) = g(t) g(-t) = sum u[n] t^(2n) through the truncation order."""
    u = gen_u(order // 2)
    zero = MultiPoly.zero(RING_BC)
    coeffs = [zero] * (order + 1)
    for n in range(order // 2 + 1):
        coeffs[2 * n] = u[n]
    return TruncSeries(RING_BC, order, coeffs)


# -- identity battery --------------------------------------------------------------


@dataclass
class IdentityReport:
    """Structured outcome of one identity check."""

    name: str
    order: int
    passed: bool
    first_mismatch: tuple[int, str, str] | None = None
    note: str = ""

    def to_dict(self) -> dict:
        mismatch = None
        if self.first_mismatch is not None:
            k, lhs, rhs = self.first_mismatch
            mismatch = {"degree": k, "lhs": lhs, "rhs": rhs}
        return {
            "identity": self.name,
            "order": self.order,
            "passed": self.passed,
            "first_mismatch": mismatch,
            "note": self.note,
        }


def _report(name: str, order: int, lhs: TruncSeries, rhs: TruncSeries, note: str = "") -> IdentityReport:
    mismatch = lhs.first_mismatch(rhs)
    return IdentityReport(name, order, mismatch is None, mismatch, note)


def verify_id3(order: int) -> IdentityReport:
    """Quartic-deformation transform of the even product series.

    sum u[n] t^(2n) = sum_k (-1)^k c^k t^(4k)
                      * sum_n n! w[n] binomial(n+k, k) binomial(2n+2k, n+k) (-1)^n t^(2n)
    """
    lhs = product_series(order)
    w = gen_w(order // 2)
    c = MultiPoly.variable(RING_BC, "c")
    zero = MultiPoly.zero(RING_BC)
    coeffs = [zero] * (order + 1)
    ck = MultiPoly.one(RING_BC)
    for k in range(order // 4 + 1):
        sign_k = -1 if k % 2 else 1
        for n in range((order - 4 * k) // 2 + 1):
            deg = 2 * n + 4 * k
            scal = factorial(n) * binomial(n + k, k) * binomial(2 * n + 2 * k, n + k)
            if n % 2:
                scal = -scal
            coeffs[deg] = coeffs[deg] + ck * w[n] * (sign_k * scal)
        ck = ck * c
    rhs = TruncSeries(RING_BC, order, coeffs)
    return _report("id3", order, lhs, rhs)


def verify_r2(order: int) -> IdentityReport:
    """Inverse-square-root form of the quartic-deformation transform.

    sum u[n] t^(2n) = (1 + 4c t^4)^(-1/2)
                      * sum_n binomial(2n, n) n! w[n] (-t^2 / (1 + 4c t^4))^n
    """
    lhs = product_series(order)
    c = MultiPoly.variable(RING_BC, "c")
    quartic = TruncSeries(
        RING_BC, order, [MultiPoly.one(RING_BC)] + [MultiPoly.zero(RING_BC)] * 3 + [c * 4]
    )
    s = inv_sqrt(quartic)
    # x = -t^2 / (1 + 4c t^4), built as (-t^2) * s^2
    x = (s * s).shift(2).scale(-1)
    w = gen_w(order // 2)
    acc = TruncSeries.zeros(RING_BC, order)
    xpow = TruncSeries.one(RING_BC, order)
    for n in range(order // 2 + 1):
        acc = acc + xpow.scale(w[n] * (binomial(2 * n, n) * factorial(n)))
        if 2 * (n + 1) <= order:
            xpow = xpow * x
    rhs = s * acc
    return _report("r2", order, lhs, rhs)


def verify_hg_c0(order: int) -> IdentityReport:
    """c = 0 collapse: with P[n] = poch_product(n),

    (sum P[n] t^n / n!) * (sum P[n] (-t)^n / n!) = sum P[n] binomial(2n, n) t^(2n)
    """
    pochs = [poch_product(n) for n in range(order + 1)]
    a = TruncSeries(
        RING_B, order, [p * Fraction(1, factorial(n)) for n, p in enumerate(pochs)]
    )
    lhs = a * a.reflect()
    zero = MultiPoly.zero(RING_B)
    coeffs = [zero] * (order + 1)
    for n in range(order // 2 + 1):
        coeffs[2 * n] = pochs[n] * binomial(2 * n, n)
    rhs = TruncSeries(RING_B, order, coeffs)
    return _report("hg-c0", order, lhs, rhs)


def verify_clausen(order: int) -> IdentityReport:
    """Clausen-type square: (sum P[n] t^n / n!^2)^2
    = sum P[n] binomial(2n, n) (t (1 - t))^n / n!^2."""
    pochs = [poch_product(n) for n in range(order + 1)]
    f = TruncSeries(
        RING_B, order, [p * Fraction(1, factorial(n) ** 2) for n, p in enumerate(pochs)]
    )
    lhs = f * f
    tm1t = TruncSeries(
        RING_B, order, [MultiPoly.zero(RING_B), MultiPoly.one(RING_B), MultiPoly.const(RING_B, -1)]
    )
    acc = TruncSeries.zeros(RING_B, order)
    xpow = TruncSeries.one(RING_B, order)
    for n in range(order + 1):
        scal = pochs[n] * Fraction(binomial(2 * n, n), factorial(n) ** 2)
        acc = acc + xpow.scale(scal)
        if n < order:
            xpow = xpow * tm1t
    return _report("clausen", order, lhs, acc)


def derivation_identity_check(f: TruncSeries, k: int) -> IdentityReport:
    """Telescoping identity for the derivation theta = t d/dt:

    f * theta^(2k+1)(f) = (1/2) theta( sum_{j=0}^{2k} (-1)^j theta^j(f) theta^(2k-j)(f) )

    theta is degree-preserving, so both sides are exact at the full order.
    """
    if k < 0:
        raise ValueError("negative order")
    powers = [f]
    for _ in range(2 * k + 1):
        powers.append(powers[-1].theta())
    lhs = f * powers[2 * k + 1]
    acc = TruncSeries.zeros(f.vs, f.order)
    for j in range(2 * k + 1):
        prod = powers[j] * powers[2 * k - j]
        acc = acc - prod if j % 2 else acc + prod
    rhs = acc.theta().scale(Fraction(1, 2))
    return _report("derivation", f.order, lhs, rhs, note=f"k={k}")


def verify_ode_g(order: int) -> IdentityReport:
    """Residual of the pinned second-order operator on the base series."""
    res = ode_residual(base_ode(), base_series(order))
    zero = TruncSeries.zeros(RING_BC, res.order)
    return _report("ode-g", res.order, res, zero, note=f"series order {order}")


def verify_ode_product(order: int) -> IdentityReport:
    """Residual of the pinned third-order operator on the product series."""
    res = ode_residual(symmetric_square_ode(), product_series(order))
    zero = TruncSeries.zeros(RING_BC, res.order)
    return _report("ode-G", res.order, res, zero, note=f"series order {order}")
