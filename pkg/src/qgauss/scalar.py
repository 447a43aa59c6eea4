"""Exact coefficients: Laurent polynomials in ``q`` and their fractions.

Every coefficient that appears in an R-matrix, a relation or a Gauss factor
is an element of the rational function field Q(q).  Elements are kept in a
canonical reduced form so that structural equality is mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Tuple, Union

try:
    from flint import fmpz_poly
except ImportError:  # pure-Python gcd below
    fmpz_poly = None

__all__ = [
    "LaurentPoly",
    "QScalar",
    "Q",
    "ONE",
    "ZERO",
    "LAMBDA",
    "qpow",
    "qint",
    "qs_add",
    "qs_mul",
    "qs_eval",
]


class LaurentPoly:
    """Finite sum ``sum c_k q^k`` with integer ``c_k`` and integer ``k``.

    Instances are treated as immutable.  ``terms`` never stores a zero
    coefficient.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Union[Dict[int, int], Iterable[Tuple[int, int]], None] = None):
        clean: Dict[int, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                if c:
                    clean[k] = clean.get(k, 0) + c
                    if not clean[k]:
                        del clean[k]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, int]) -> "LaurentPoly":
        # trusted constructor: caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(0) == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """True for the units ``+-q^k`` of Z[q, 1/q]."""
        if len(self.terms) != 1:
            return False
        (c,) = self.terms.values()
        return c in (1, -1)

    @property
    def low(self) -> int:
        return min(self.terms)

    @property
    def high(self) -> int:
        return max(self.terms)

    def leading_coeff(self) -> int:
        return self.terms[max(self.terms)]

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -c for k, c in self.terms.items()})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPoly._raw({})
        if len(a) == 1 and len(b) == 1:
            (ka, ca), = a.items()
            (kb, cb), = b.items()
            return LaurentPoly._raw({ka + kb: ca * cb})
        out: Dict[int, int] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                out[k] = out.get(k, 0) + ca * cb
        return LaurentPoly._raw({k: c for k, c in out.items() if c})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q^k``."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self.terms.items()})

    def scale(self, c: int) -> "LaurentPoly":
        if c == 1:
            return self
        if not c:
            return LaurentPoly._raw({})
        return LaurentPoly._raw({e: v * c for e, v in self.terms.items()})

    def exact_div_int(self, c: int) -> "LaurentPoly":
        return LaurentPoly._raw({e: v // c for e, v in self.terms.items()})

    def substitute_inverse(self) -> "LaurentPoly":
        """The image under ``q -> 1/q``."""
        return LaurentPoly._raw({-e: c for e, c in self.terms.items()})

    def evaluate(self, q0) -> Fraction:
        q0 = Fraction(q0)
        total = Fraction(0)
        for k, c in self.terms.items():
            total += c * q0 ** k
        return total

    def __repr__(self) -> str:
        return f"LaurentPoly({self.terms!r})"

    def __str__(self) -> str:
        return format_laurent(self)


def _format_power(k: int) -> str:
    if k == 0:
        return "1"
    if k == 1:
        return "q"
    return f"q^{k}"


def format_laurent(p: LaurentPoly) -> str:
    """Render with descending exponents, e.g. ``q^2 - 2 + q^-2``."""
    if not p.terms:
        return "0"
    parts = []
    for k in sorted(p.terms, reverse=True):
        c = p.terms[k]
        mag = abs(c)
        if k == 0:
            body = str(mag)
        elif mag == 1:
            body = _format_power(k)
        else:
            body = f"{mag}*{_format_power(k)}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# -- univariate integer polynomial helpers (dense, ascending coefficients) --

def _to_dense(p: LaurentPoly) -> Tuple[int, list]:
    low = p.low
    out = [0] * (p.high - low + 1)
    for k, c in p.terms.items():
        out[k - low] = c
    return low, out


def _from_dense(coeffs: list, shift: int = 0) -> LaurentPoly:
    return LaurentPoly._raw({i + shift: c for i, c in enumerate(coeffs) if c})


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _primitive(p: list) -> list:
    g = 0
    for c in p:
        g = gcd(g, c)
    if g == 0:
        return p
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def _divmod_frac(a: list, b: list) -> Tuple[list, list]:
    """Polynomial division over Q; lists of Fractions, ascending order."""
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lb = b[-1]
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / lb
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a.pop()
        _trim(a)
    return q, a


def _poly_gcd(a: list, b: list) -> list:
    """Primitive gcd in Z[q] of two nonzero dense polynomials."""
    fa = [Fraction(c) for c in a]
    fb = [Fraction(c) for c in b]
    while fb and any(fb):
        _, r = _divmod_frac(fa, fb)
        fa, fb = fb, _trim(r)
    # clear denominators, make primitive with positive leading coefficient
    den = 1
    for c in fa:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fa]
    return _primitive(ints)


def _exact_div(a: list, b: list) -> list:
    fa = [Fraction(c) for c in a]
    fb = [Fraction(c) for c in b]
    quo, rem = _divmod_frac(fa, fb)
    if rem and any(rem):
        raise ArithmeticError("inexact polynomial division")
    return [int(c) for c in _trim(quo)]


ONE_POLY = LaurentPoly._raw({0: 1})


class QScalar:
    """Element of Q(q): ``numerator / denominator`` with Laurent polynomials.

    The canonical form has coprime numerator and denominator, and the
    denominator's lowest exponent is 0 with a positive leading coefficient.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if isinstance(num, int):
            num = LaurentPoly._raw({0: num} if num else {})
        elif isinstance(num, Fraction):
            if den is not None:
                raise TypeError("Fraction numerator with explicit denominator")
            num, den = LaurentPoly._raw({0: num.numerator} if num else {}), LaurentPoly._raw({0: num.denominator})
        if den is None:
            self.num, self.den = num, ONE_POLY
        else:
            if isinstance(den, int):
                den = LaurentPoly._raw({0: den} if den else {})
            self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly = ONE_POLY) -> "QScalar":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # -- predicates --
    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def monomial_exponent(self):
        """Return ``(c, k)`` if the value is ``c q^k``, else ``None``."""
        if self.den.is_one() and len(self.num.terms) == 1:
            (k, c), = self.num.terms.items()
            return c, k
        return None

    def q_exponent(self):
        """Return ``k`` if the value is exactly ``q^k``, else ``None``."""
        m = self.monomial_exponent()
        if m is not None and m[0] == 1:
            return m[1]
        return None

    # -- arithmetic --
    def __eq__(self, other) -> bool:
        if isinstance(other, QScalar):
            return self.num.terms == other.num.terms and self.den.terms == other.den.terms
        if isinstance(other, int):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self) -> "QScalar":
        return QScalar._raw(-self.num, self.den)

    def __add__(self, other) -> "QScalar":
        if not isinstance(other, QScalar):
            other = as_scalar(other)
        if self.den.is_one() and other.den.is_one():
            return QScalar._raw(self.num + other.num)
        if self.den == other.den:
            return QScalar(self.num + other.num, self.den)
        return QScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "QScalar":
        if not isinstance(other, QScalar):
            other = as_scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "QScalar":
        return as_scalar(other) - self

    def __mul__(self, other) -> "QScalar":
        if not isinstance(other, QScalar):
            other = as_scalar(other)
        if self.den.is_one() and other.den.is_one():
            return QScalar._raw(self.num * other.num)
        return QScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero QScalar")
        if self.den.is_one() and self.num.is_unit():
            (k, c), = self.num.terms.items()
            return QScalar._raw(LaurentPoly._raw({-k: c}))
        return QScalar(self.den, self.num)

    def __truediv__(self, other) -> "QScalar":
        if not isinstance(other, QScalar):
            other = as_scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QScalar":
        return as_scalar(other) * self.inverse()

    def __pow__(self, n: int) -> "QScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def evaluate(self, q0) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0:
            raise ZeroDivisionError("q0 = 0 is outside the domain of Laurent polynomials")
        d = self.den.evaluate(q0)
        if d == 0:
            raise ZeroDivisionError(f"pole at q = {q0}")
        return self.num.evaluate(q0) / d

    def substitute_inverse(self) -> "QScalar":
        """The image under ``q -> 1/q``."""
        return QScalar(self.num.substitute_inverse(), self.den.substitute_inverse())

    def __repr__(self) -> str:
        return f"QScalar({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return format_laurent(self.num)
        return f"({format_laurent(self.num)})/({format_laurent(self.den)})"

    def needs_parens(self) -> bool:
        """Whether the text form must be bracketed when used as a factor."""
        return not self.den.is_one() or len(self.num.terms) > 1


def _normalize(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if not den.terms:
        raise ZeroDivisionError("zero denominator")
    if not num.terms:
        return num, ONE_POLY
    if len(den.terms) == 1:
        (k, c), = den.terms.items()
        num = num.shift(-k)
        if c < 0:
            num, c = -num, -c
        if c == 1:
            return num, ONE_POLY
        g = gcd(num.content(), c)
        if g > 1:
            num, c = num.exact_div_int(g), c // g
        return num, LaurentPoly._raw({0: c})
    nlow, nd = _to_dense(num)
    dlow, dd = _to_dense(den)
    if fmpz_poly is not None:
        fn, fd = fmpz_poly(nd), fmpz_poly(dd)
        g = fn.gcd(fd)
        if g.degree() > 0:
            fn, fd = fn // g, fd // g
        nd = [int(c) for c in fn.coeffs()]
        dd = [int(c) for c in fd.coeffs()]
    else:
        g = _poly_gcd(nd, dd)
        if len(g) > 1:
            nd = _exact_div(nd, g)
            dd = _exact_div(dd, g)
    cg = gcd(_content(nd), _content(dd))
    if dd[-1] < 0:
        cg = -cg
    if cg != 1:
        nd = [c // cg for c in nd]
        dd = [c // cg for c in dd]
    # shift so the denominator's lowest exponent is 0
    dshift = next(i for i, c in enumerate(dd) if c)
    return _from_dense(nd, nlow - dlow - dshift), _from_dense(dd, -dshift)


def _content(p: list) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def as_scalar(x) -> QScalar:
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return QScalar(x)
    if isinstance(x, LaurentPoly):
        return QScalar._raw(x)
    raise TypeError(f"cannot convert {type(x).__name__} to QScalar")


def qpow(k: int, coeff: int = 1) -> QScalar:
    """``coeff * q^k``."""
    return QScalar._raw(LaurentPoly.monomial(coeff, k))


def qint(n: int) -> QScalar:
    """Symmetric q-integer ``[n]_q = (q^n - q^-n)/(q - q^-1)``."""
    if n <= 0:
        raise ValueError("qint expects a positive integer")
    return QScalar._raw(LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)}))


ZERO = QScalar._raw(LaurentPoly._raw({}))
ONE = QScalar._raw(ONE_POLY)
Q = qpow(1)
LAMBDA = QScalar._raw(LaurentPoly._raw({1: 1, -1: -1}))


def qs_add(a: QScalar, b: QScalar) -> QScalar:
    return a + b


def qs_mul(a: QScalar, b: QScalar) -> QScalar:
    return a * b


def qs_eval(a: QScalar, q0) -> Fraction:
    """Exact value at a nonzero rational ``q0``; raises on a pole."""
    return a.evaluate(q0)
