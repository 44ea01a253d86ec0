"""The field K = Q(x) of univariate rational functions, exactly.

Elements are kept in canonical form: numerator and denominator coprime, the
denominator monic, zero as 0/1.  Equality is therefore structural.  Dense
coefficient tuples (index = power of x) are enough for the sizes localization
produces; growth is controlled by the gcd reduction after every operation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import ParseError
from .rings import Polynomial, VariableTable, format_polynomial, parse_polynomial

UPoly = tuple  # tuple[Fraction, ...], trailing zeros trimmed, () is zero

_X_TABLE = VariableTable(["x"])


def _trim(cs: list) -> UPoly:
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


def upoly(*coeffs) -> UPoly:
    """Build a univariate polynomial from low-to-high coefficients."""
    return _trim([Fraction(c) for c in coeffs])


def _uadd(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _uneg(a: UPoly) -> UPoly:
    return tuple(-c for c in a)


def _umul(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim(out)


def _uscale(a: UPoly, s: Fraction) -> UPoly:
    if not s:
        return ()
    return tuple(c * s for c in a)


def _udivmod(a: UPoly, b: UPoly) -> tuple:
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = rem[i + len(b) - 1] / lead
        if c:
            quo[i] = c
            for j, cb in enumerate(b):
                rem[i + j] -= c * cb
    return _trim(quo), _trim(rem)


def _ugcd(a: UPoly, b: UPoly) -> UPoly:
    while b:
        a, b = b, _udivmod(a, b)[1]
        if b:
            b = _uscale(b, 1 / b[-1])  # keep intermediate results monic
    if not a:
        return ()
    return _uscale(a, 1 / a[-1])


class RationalFunction:
    """Element of Q(x) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num = _as_upoly(num)
        den = _as_upoly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            den = (Fraction(1),)
        else:
            g = _ugcd(num, den)
            if len(g) > 1:
                num = _udivmod(num, g)[0]
                den = _udivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num = _uscale(num, 1 / lead)
                den = _uscale(den, 1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(())

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls((Fraction(1),))

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def from_polynomial(cls, p: Polynomial, xname: str = "x") -> "RationalFunction":
        """Restrict a multivariate polynomial supported only on powers of x."""
        xi = p.table.index(xname)
        coeffs: list = []
        for exps, coef in p.terms:
            if any(e and i != xi for i, e in enumerate(exps)):
                raise ValueError(f"{p} involves variables besides {xname}")
            k = exps[xi]
            if len(coeffs) <= k:
                coeffs.extend([Fraction(0)] * (k + 1 - len(coeffs)))
            coeffs[k] += coef
        return cls(_trim(coeffs))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == (Fraction(1),)

    def polynomial_coeffs(self) -> UPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial in x")
        return self.num

    def to_polynomial(self, table: VariableTable, xname: str = "x") -> Polynomial:
        xi = table.index(xname)
        terms = []
        for k, c in enumerate(self.polynomial_coeffs()):
            if c:
                e = [0] * len(table)
                e[xi] = k
                terms.append((tuple(e), c))
        return Polynomial(table, terms)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction | None":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction((Fraction(other),) if other else ())
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(
            _uadd(_umul(self.num, o.den), _umul(o.num, self.den)),
            _umul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(_uneg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(_umul(self.num, o.num), _umul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(_umul(self.num, o.den), _umul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def inverse(self) -> "RationalFunction":
        return 1 / self

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        return format_rational_function(self)

    def __repr__(self) -> str:
        return f"<{self}>"


ScalarLike = Union[RationalFunction, Fraction, int]


def _as_upoly(value) -> UPoly:
    if isinstance(value, tuple):
        return _trim([Fraction(c) for c in value])
    if isinstance(value, list):
        return _trim([Fraction(c) for c in value])
    if isinstance(value, (int, Fraction)):
        return (Fraction(value),) if value else ()
    if isinstance(value, Polynomial):
        return RationalFunction.from_polynomial(value).num
    raise TypeError(f"cannot interpret {value!r} as a univariate polynomial")


def _upoly_to_poly(cs: UPoly) -> Polynomial:
    return Polynomial(_X_TABLE, [((k,), c) for k, c in enumerate(cs) if c])


def format_rational_function(r: RationalFunction) -> str:
    """Canonical text: `num` when the denominator is 1, else `(num)/(den)`."""
    num = format_polynomial(_upoly_to_poly(r.num))
    if r.is_polynomial():
        return num
    den = format_polynomial(_upoly_to_poly(r.den))
    return f"({num})/({den})"


def parse_rational_function(text: str) -> RationalFunction:
    s = text.strip()
    if s.startswith("(") and ")/(" in s:
        if not s.endswith(")"):
            raise ParseError(f"malformed rational function {text!r}")
        left, right = s.split(")/(", 1)
        num = parse_polynomial(_X_TABLE, left[1:])
        den = parse_polynomial(_X_TABLE, right[:-1])
        return RationalFunction(
            RationalFunction.from_polynomial(num).num,
            RationalFunction.from_polynomial(den).num,
        )
    p = parse_polynomial(_X_TABLE, s)
    return RationalFunction.from_polynomial(p)
