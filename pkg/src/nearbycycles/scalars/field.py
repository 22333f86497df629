"""Exact scalars: the tower Q ⊂ Q(ζ_N) ⊂ Q(ζ_N)(τ).

τ is a formal transcendental standing for 2πi.  An element of Q(ζ_N) is a
rational polynomial reduced modulo the N-th cyclotomic polynomial; a tower
element is a quotient of two polynomials in τ over Q(ζ_N), stored with
coprime numerator and monic denominator so that equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Union

import flint

Number = Union[int, Fraction]

# A polynomial in τ is a tuple of Q(ζ_N) coefficients (fmpq_poly), lowest
# degree first, without trailing zeros.  The zero polynomial is ().
TauPoly = tuple


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, flint.fmpz):
        return flint.fmpq(x)
    raise TypeError(f"not a rational number: {x!r}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, Scalar) and x.is_rational():
        return x.to_fraction()
    raise TypeError(f"not a rational number: {x!r}")


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> flint.fmpq_poly:
    return flint.fmpq_poly([int(c) for c in flint.fmpz_poly.cyclotomic(n).coeffs()])


@lru_cache(maxsize=None)
def _cy_one(n: int) -> flint.fmpq_poly:
    return flint.fmpq_poly([1])


def _cy_inv(a: flint.fmpq_poly, n: int) -> flint.fmpq_poly:
    g, s, _ = a.xgcd(cyclotomic_poly(n))
    if g.degree() != 0:
        raise ZeroDivisionError("non-invertible cyclotomic element")
    return (s / g.coeffs()[0]) % cyclotomic_poly(n)


def _cy_lift(a: flint.fmpq_poly, n: int, m: int) -> flint.fmpq_poly:
    """Image of a ∈ Q(ζ_n) in Q(ζ_m) for n | m, via ζ_n = ζ_m^(m/n)."""
    if n == m:
        return a
    step = m // n
    coeffs = a.coeffs()
    spread = [0] * (step * (len(coeffs) - 1) + 1) if coeffs else []
    for j, c in enumerate(coeffs):
        spread[step * j] = c
    return flint.fmpq_poly(spread) % cyclotomic_poly(m)


# -- polynomials in τ over Q(ζ_n) -------------------------------------------


def _trim(c: list) -> TauPoly:
    while c and c[-1].is_zero():
        c.pop()
    return tuple(c)


def _p_add(a: TauPoly, b: TauPoly) -> TauPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)


def _p_neg(a: TauPoly) -> TauPoly:
    return tuple(-c for c in a)


def _p_mul(a: TauPoly, b: TauPoly, n: int) -> TauPoly:
    if not a or not b:
        return ()
    phi = cyclotomic_poly(n)
    out = [flint.fmpq_poly() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] += x * y
    return _trim([c % phi for c in out])


def _p_scale(a: TauPoly, c: flint.fmpq_poly, n: int) -> TauPoly:
    if c.is_zero():
        return ()
    phi = cyclotomic_poly(n)
    return _trim([(x * c) % phi for x in a])


def _p_divmod(a: TauPoly, b: TauPoly, n: int) -> tuple[TauPoly, TauPoly]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    phi = cyclotomic_poly(n)
    inv_lead = _cy_inv(b[-1], n)
    rem = list(a)
    quo = [flint.fmpq_poly() for _ in range(max(len(a) - len(b) + 1, 0))]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = (rem[-1] * inv_lead) % phi
        quo[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * y) % phi
        rem = list(_trim(rem))
    return _trim(quo), _trim(rem)


def _p_monic(a: TauPoly, n: int) -> TauPoly:
    if not a or a[-1].is_one():
        return a
    return _p_scale(a, _cy_inv(a[-1], n), n)


def _p_gcd(a: TauPoly, b: TauPoly, n: int) -> TauPoly:
    while b:
        a, b = b, _p_divmod(a, b, n)[1]
    return _p_monic(a, n)


def _p_lift(a: TauPoly, n: int, m: int) -> TauPoly:
    return tuple(_cy_lift(c, n, m) for c in a) if n != m else a


def _p_is_one(a: TauPoly) -> bool:
    return len(a) == 1 and a[0].is_one()


class Scalar:
    """Immutable element of Q(ζ_N)(τ).

    Build elements through :class:`ScalarField`; arithmetic with ``int`` and
    ``Fraction`` operands is supported, and operands of different cyclotomic
    orders are lifted to the lcm of the two orders.
    """

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num: TauPoly, den: TauPoly | None = None):
        self.order = order
        if den is None or _p_is_one(den):
            self.num = num
            self.den = (_cy_one(order),)
            return
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (_cy_one(order),)
            return
        g = _p_gcd(num, den, order)
        if not _p_is_one(g):
            num = _p_divmod(num, g, order)[0]
            den = _p_divmod(den, g, order)[0]
        if not den[-1].is_one():
            inv = _cy_inv(den[-1], order)
            num = _p_scale(num, inv, order)
            den = _p_scale(den, inv, order)
        self.num = num
        self.den = den

    # -- coercion -----------------------------------------------------------

    def lift(self, m: int) -> Scalar:
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"cannot lift order {self.order} to {m}")
        out = Scalar.__new__(Scalar)
        out.order = m
        out.num = _p_lift(self.num, self.order, m)
        out.den = _p_lift(self.den, self.order, m)
        return out

    def _pair(self, other) -> tuple[Scalar, Scalar] | None:
        if isinstance(other, Scalar):
            if other.order == self.order:
                return self, other
            m = lcm(self.order, other.order)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self, Scalar.rational(self.order, other)
        return None

    @staticmethod
    def rational(order: int, x) -> Scalar:
        q = to_fmpq(x)
        if q == 0:
            return Scalar(order, ())
        return Scalar(order, (flint.fmpq_poly([q]),))

    # -- predicates ---------------------------------------------------------

    def is_polynomial(self) -> bool:
        return _p_is_one(self.den)

    def is_rational(self) -> bool:
        return self.is_polynomial() and len(self.num) <= 1 and (
            not self.num or self.num[0].degree() <= 0
        )

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if not self.num:
            return Fraction(0)
        return to_fraction(self.num[0].coeffs()[0])

    def at_tau(self, c) -> Scalar:
        """Specialize τ to the rational c (the denominator must not vanish)."""
        q = to_fmpq(c)
        n = self.order
        phi = cyclotomic_poly(n)

        def ev(poly):
            acc = flint.fmpq_poly()
            for coeff in reversed(poly):
                acc = (acc * q + coeff) % phi
            return acc

        den = ev(self.den)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes at this value of tau")
        return Scalar(n, _trim([(ev(self.num) * _cy_inv(den, n)) % phi]))

    def tau_degree(self) -> int:
        return len(self.num) - 1

    def __bool__(self) -> bool:
        return bool(self.num)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.order
        if a.is_polynomial() and b.is_polynomial():
            return Scalar(n, _p_add(a.num, b.num))
        num = _p_add(_p_mul(a.num, b.den, n), _p_mul(b.num, a.den, n))
        return Scalar(n, num, _p_mul(a.den, b.den, n))

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        out = Scalar.__new__(Scalar)
        out.order, out.num, out.den = self.order, _p_neg(self.num), self.den
        return out

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[1] + (-pair[0])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            q = to_fmpq(other)
            if q == 0:
                return Scalar(self.order, ())
            out = Scalar.__new__(Scalar)
            out.order, out.den = self.order, self.den
            out.num = tuple(c * q for c in self.num)
            return out
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.order
        if a.is_polynomial() and b.is_polynomial():
            return Scalar(n, _p_mul(a.num, b.num, n))
        return Scalar(n, _p_mul(a.num, b.num, n), _p_mul(a.den, b.den, n))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return Scalar(self.order, self.den, self.num)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1].inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[1] * pair[0].inverse()

    def __pow__(self, e: int) -> Scalar:
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        out = Scalar.rational(self.order, 1)
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.num == b.num and a.den == b.den

    def __hash__(self) -> int:
        # Coarse but order-independent: equal elements share τ-degrees.
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((len(self.num), len(self.den)))

    # -- display ------------------------------------------------------------

    def to_expr(self) -> str:
        num = _poly_expr(self.num)
        if self.is_polynomial():
            return num
        return f"({num})/({_poly_expr(self.den)})"

    def __str__(self) -> str:
        return self.to_expr()

    def __repr__(self) -> str:
        return f"Scalar[{self.order}]({self.to_expr()})"


def _monomial(j: int, m: int) -> str:
    parts = []
    if j:
        parts.append("zeta" if j == 1 else f"zeta^{j}")
    if m:
        parts.append("tau" if m == 1 else f"tau^{m}")
    return "*".join(parts)


def _poly_expr(p: TauPoly) -> str:
    terms = []
    for m, c in enumerate(p):
        for j, q in enumerate(c.coeffs()):
            if q == 0:
                continue
            q = to_fraction(q)
            mono = _monomial(j, m)
            if not mono:
                terms.append(str(q))
            elif q == 1:
                terms.append(mono)
            elif q == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{q}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


@dataclass(frozen=True)
class ScalarField:
    """The tower Q(ζ_N)(τ) for a fixed cyclotomic order N."""

    cyclotomic_order: int = 1

    def __post_init__(self):
        if self.cyclotomic_order < 1:
            raise ValueError("cyclotomic order must be positive")

    @property
    def zero(self) -> Scalar:
        return Scalar(self.cyclotomic_order, ())

    @property
    def one(self) -> Scalar:
        return Scalar.rational(self.cyclotomic_order, 1)

    @property
    def tau(self) -> Scalar:
        n = self.cyclotomic_order
        return Scalar(n, (flint.fmpq_poly(), _cy_one(n)))

    def zeta(self, power: int = 1) -> Scalar:
        n = self.cyclotomic_order
        x = flint.fmpq_poly([0] * (power % n) + [1]) % cyclotomic_poly(n)
        return Scalar(n, _trim([x]))

    def root_of_unity(self, q) -> Scalar:
        """exp(2πi·q) for rational q with N·q integral."""
        q = to_fraction(q)
        k = q * self.cyclotomic_order
        if k.denominator != 1:
            raise ValueError(f"exp(2πi·{q}) is not in Q(ζ_{self.cyclotomic_order})")
        return self.zeta(int(k))

    def __call__(self, x) -> Scalar:
        n = self.cyclotomic_order
        if isinstance(x, Scalar):
            if n % x.order:
                raise ValueError(f"order {x.order} does not divide {n}")
            return x.lift(n)
        if isinstance(x, str):
            from .serial import parse_scalar

            return parse_scalar(x, self)
        return Scalar.rational(n, x)

    def contains(self, q) -> bool:
        return (to_fraction(q) * self.cyclotomic_order).denominator == 1
