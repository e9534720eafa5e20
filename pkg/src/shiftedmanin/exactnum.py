"""Exact scalars: rationals, hbar-truncated polynomials, windowed Laurent polynomials."""

from fractions import Fraction
from math import comb

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class ExactArithmeticError(ValueError):
    pass


def rational(value):
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ExactArithmeticError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactArithmeticError(f"bad rational literal {value!r}") from exc
    raise ExactArithmeticError(f"cannot read {value!r} as an exact rational")


def rational_arith(a, b, op):
    a, b = rational(a), rational(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if b == 0:
            raise ZeroDivisionError("exact division by zero")
        return a / b
    raise ExactArithmeticError(f"unknown operation {op!r}")


def fmt(q):
    """Canonical string for a rational: "3", "-1/2"."""
    q = rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class HbarPoly:
    """Element of Q[hbar]/hbar^H, stored as a tuple of H coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order=None):
        cs = tuple(rational(c) for c in coeffs)
        if order is not None:
            if len(cs) > order:
                cs = cs[:order]
            cs = cs + (ZERO,) * (order - len(cs))
        if not cs:
            raise ExactArithmeticError("truncation order must be positive")
        self.coeffs = cs

    @classmethod
    def const(cls, c, order):
        return cls((rational(c),), order)

    @classmethod
    def hbar_power(cls, k, order, c=1):
        cs = [ZERO] * order
        if k < order:
            cs[k] = rational(c)
        return cls(cs)

    @property
    def order(self):
        return len(self.coeffs)

    def _check(self, other):
        if not isinstance(other, HbarPoly):
            raise TypeError("expected HbarPoly")
        if other.order != self.order:
            raise ExactArithmeticError(
                f"hbar truncation mismatch: H={self.order} vs H={other.order}")

    def __add__(self, other):
        self._check(other)
        return HbarPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return HbarPoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return HbarPoly(tuple(-a for a in self.coeffs))

    def scale(self, q):
        q = rational(q)
        return HbarPoly(tuple(q * a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, HbarPoly):
            return self.scale(other)
        self._check(other)
        return hbar_mul(self, other)

    __rmul__ = __mul__

    def shift(self, k=1):
        """Multiply by hbar^k."""
        H = self.order
        return HbarPoly((ZERO,) * min(k, H) + self.coeffs[: max(H - k, 0)])

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, HbarPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def to_json(self):
        return [fmt(c) for c in self.coeffs]

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(fmt(c) if i == 0 else f"{fmt(c)}*h^{i}")
        return " + ".join(parts) if parts else "0"


def hbar_mul(a, b):
    a._check(b)
    H = a.order
    out = [ZERO] * H
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j in range(H - i):
            y = b.coeffs[j]
            if y:
                out[i + j] += x * y
    return HbarPoly(out)


class LaurentPoly:
    """Finite Laurent polynomial in one variable with HbarPoly coefficients.

    Exponents are confined to [min_exp, max_exp]; a product landing outside
    the window raises instead of being dropped.
    """

    __slots__ = ("var", "terms", "min_exp", "max_exp", "order")

    def __init__(self, var, terms, min_exp, max_exp, order):
        self.var = var
        self.min_exp = min_exp
        self.max_exp = max_exp
        self.order = order
        clean = {}
        for e, c in terms.items():
            if not isinstance(c, HbarPoly):
                c = HbarPoly.const(c, order)
            if c.order != order:
                raise ExactArithmeticError("hbar truncation mismatch in Laurent coefficient")
            if c.is_zero():
                continue
            if not min_exp <= e <= max_exp:
                raise ExactArithmeticError(
                    f"{var}^{e} outside window [{min_exp}, {max_exp}]")
            clean[e] = c
        self.terms = clean

    @classmethod
    def monomial(cls, var, e, c, min_exp, max_exp, order):
        return cls(var, {e: c}, min_exp, max_exp, order)

    def _like(self, terms):
        return LaurentPoly(self.var, terms, self.min_exp, self.max_exp, self.order)

    def _check(self, other):
        if (self.var, self.min_exp, self.max_exp, self.order) != (
                other.var, other.min_exp, other.max_exp, other.order):
            raise ExactArithmeticError("Laurent window or variable mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._like(out)

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self._like({e: c * other for e, c in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return self._like(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var == other.var and self.terms == other.terms

    def __hash__(self):
        return hash((self.var, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{self.var}^{e}" for e, c in sorted(self.terms.items()))


def expand_inverse_shift(k_max):
    """Templates for 1/(t1 + z - t2) = sum_k (t2 - t1)^k z^(-k-1), |z| large.

    Each entry is (poly, z_exponent) where poly maps (i, j) to the integer
    coefficient of t1^i t2^j in (t2 - t1)^k.
    """
    if k_max < 0:
        raise ExactArithmeticError("k_max must be non-negative")
    out = []
    for k in range(k_max + 1):
        poly = {(k - j, j): comb(k, j) * (-1) ** (k - j) for j in range(k + 1)}
        out.append((poly, -k - 1))
    return out
