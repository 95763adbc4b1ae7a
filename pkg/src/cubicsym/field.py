"""Exact scalars and sparse multivariate polynomials.

Three kinds of coefficient field are supported:

* :class:`NumberField`, the quotient ``Q[w]/(m(w))`` for a monic squarefree
  ``m`` without rational roots (``RATIONALS`` is the degree-1 case);
* :class:`ParamField`, rational functions in named parameters over ``Q``;
* anything else exposing ``zero``, ``one`` and ``convert``.

:class:`MultiPoly` is a dictionary-backed polynomial over any such field.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NotDivisible,
    NotSquarefree,
    ParseError,
    RationalRootFound,
)

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    mpq = Fraction

ZERO = mpq(0)
ONE = mpq(1)
_RATIONAL_TYPES = (int, Fraction, type(ZERO))


def to_rational(value) -> mpq:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, _RATIONAL_TYPES):
        return mpq(value)
    if isinstance(value, str):
        try:
            return mpq(value.strip())
        except ValueError as exc:
            raise ParseError(f"not a rational number: {value!r}") from exc
    if isinstance(value, NFElement) and value.is_rational():
        return value.c[0]
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# univariate helpers over Q, coefficient lists ordered low -> high


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _usub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else ZERO) - (b[i] if i < len(b) else ZERO) for i in range(n)]
    return _trim(out)


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _udivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        coef = a[-1] / lead
        q[k] = coef
        for i, y in enumerate(b):
            a[i + k] -= coef * y
        _trim(a)
    return _trim(q), a


def _ugcdex(a: list, b: list) -> tuple[list, list, list]:
    """Return ``(s, t, g)`` with ``s*a + t*b = g``."""
    r0, r1 = _trim(list(a)), _trim(list(b))
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        q, r = _udivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _usub(s0, _umul(q, s1))
        t0, t1 = t1, _usub(t0, _umul(q, t1))
    return s0, t0, r0


def _uderiv(a: list) -> list:
    return _trim([a[i] * i for i in range(1, len(a))])


def _has_rational_root(low: list) -> mpq | None:
    from sympy import divisors

    den = 1
    for c in low:
        den = math.lcm(den, int(c.denominator))
    ints = [int(c * den) for c in low]
    if ints[0] == 0:
        return ZERO
    lead, const = abs(ints[-1]), abs(ints[0])
    for p in divisors(const):
        for q in divisors(lead):
            for cand in (mpq(p, q), mpq(-p, q)):
                acc = ZERO
                for c in reversed(low):
                    acc = acc * cand + c
                if not acc:
                    return cand
    return None


# ---------------------------------------------------------------------------
# number fields


class NumberField:
    """``Q[w]/(m)`` with ``m`` given high -> low and monic."""

    def __init__(self, minpoly: Sequence, generator_name: str = "w"):
        coeffs = [to_rational(c) for c in minpoly]
        if len(coeffs) < 2 or not coeffs[0]:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[0] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.generator_name = generator_name
        self.minpoly = tuple(coeffs)
        self.degree = d = len(coeffs) - 1
        low = coeffs[::-1]
        if d >= 2:
            g = _ugcdex(low, _uderiv(low))[2]
            if len(g) > 1:
                raise NotSquarefree(f"minimal polynomial {self.minpoly_str()} is not squarefree")
            root = _has_rational_root(low)
            if root is not None:
                raise RationalRootFound(
                    f"minimal polynomial {self.minpoly_str()} has the rational root {format_rational(root)}"
                )
        self._low = tuple(low[:d])
        self._key = (generator_name, self.minpoly)
        self.zero = NFElement(self, (ZERO,) * d)
        self.one = NFElement(self, (ONE,) + (ZERO,) * (d - 1))
        if d == 1:
            self.gen = NFElement(self, (-low[0],))
        else:
            self.gen = NFElement(self, (ZERO, ONE) + (ZERO,) * (d - 2))

    def minpoly_str(self, var: str = "t") -> str:
        return _format_univariate([c for c in self.minpoly[::-1]], var)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.degree == 1:
            return "NumberField(Q)"
        return f"NumberField({self.generator_name}: {self.minpoly_str()})"

    def __reduce__(self):
        return (NumberField, (self.minpoly, self.generator_name))

    # element construction

    def __call__(self, value) -> "NFElement":
        return self.convert(value)

    def convert(self, value) -> "NFElement":
        if isinstance(value, NFElement):
            if value.field == self:
                return value
            if value.field.degree == 1:
                return self._rational(value.c[0])
            raise FieldMismatch(f"element of {value.field!r} used in {self!r}")
        if isinstance(value, str):
            return self.parse(value)
        return self._rational(to_rational(value))

    def _rational(self, q) -> "NFElement":
        if self.degree == 1:
            return NFElement(self, (mpq(q),))
        return NFElement(self, (mpq(q),) + (ZERO,) * (self.degree - 1))

    def from_coeffs(self, coeffs: Iterable) -> "NFElement":
        """Element from coefficients of ``1, w, w^2, ...`` (any length)."""
        return NFElement(self, self._reduce([to_rational(c) for c in coeffs]))

    def parse(self, text: str) -> "NFElement":
        return eval_expr(text, {self.generator_name: self.gen}, self.convert)

    def _reduce(self, coeffs: list) -> tuple:
        d = self.degree
        low = self._low
        if d == 1:
            if len(coeffs) == 1:
                return (coeffs[0],)
            root = -low[0]
            acc = ZERO
            for c in reversed(coeffs):
                acc = acc * root + c
            return (acc,)
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c:
                base = k - d
                for j in range(d):
                    if low[j]:
                        coeffs[base + j] -= c * low[j]
        if len(coeffs) < d:
            coeffs = coeffs + [ZERO] * (d - len(coeffs))
        return tuple(coeffs[:d])

    def format(self, elem) -> str:
        return str(elem)

    def normalize(self, vec: Sequence) -> tuple:
        """Scale a nonzero vector so its first nonzero entry is 1."""
        for v in vec:
            if v:
                inv = v.inverse()
                return tuple(x * inv for x in vec)
        raise ValueError("zero vector has no projective normalization")

    def random_element(self, rng, bound: int = 10) -> "NFElement":
        return self.from_coeffs(rng.randint(-bound, bound) for _ in range(self.degree))


def _format_univariate(low: Sequence, var: str) -> str:
    parts = []
    for k in range(len(low) - 1, -1, -1):
        c = low[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        parts.append((c, mono))
    return _join_terms(parts)


def _join_terms(parts: list) -> str:
    """Join ``(rational coefficient, monomial string)`` pairs."""
    if not parts:
        return "0"
    out = []
    for i, (c, mono) in enumerate(parts):
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{format_rational(a)}*{mono}"
        else:
            body = format_rational(a)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


class NFElement:
    """Residue class in a :class:`NumberField`; ``c`` holds the coefficients
    of ``1, w, ..., w^(d-1)``."""

    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.c = coeffs

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field is self.field or other.field == self.field:
                return other
            if other.field.degree == 1:
                return self.field._rational(other.c[0])
            if self.field.degree == 1:
                return NotImplemented
            raise FieldMismatch(f"cannot combine elements of {self.field!r} and {other.field!r}")
        if isinstance(other, _RATIONAL_TYPES) and not isinstance(other, bool):
            return self.field._rational(mpq(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            if isinstance(other, NFElement):
                return other.__radd__(self)
            return o
        return NFElement(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            if isinstance(other, NFElement):
                return other.__rsub__(self)
            return o
        return NFElement(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, tuple(b - a for a, b in zip(self.c, o.c)))

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.c))

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            if isinstance(other, NFElement):
                return other.__rmul__(self)
            return o
        a, b = self.c, o.c
        d = len(a)
        if d == 1:
            return NFElement(self.field, (a[0] * b[0],))
        if not any(b[1:]):
            s = b[0]
            return NFElement(self.field, tuple(x * s for x in a))
        if not any(a[1:]):
            s = a[0]
            return NFElement(self.field, tuple(x * s for x in b))
        prod = [ZERO] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return NFElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if not self:
            raise DivisionByZero("division by zero in " + repr(self.field))
        d = len(self.c)
        if d == 1 or not any(self.c[1:]):
            inv = 1 / self.c[0]
            return NFElement(self.field, (inv,) + (ZERO,) * (d - 1))
        modulus = list(self.field._low) + [ONE]
        s, _, g = _ugcdex(_trim(list(self.c)), modulus)
        scale = 1 / g[0]
        return NFElement(self.field, self.field._reduce([x * scale for x in s]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            if isinstance(other, NFElement):
                return other.__rtruediv__(self)
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, NFElement):
            if other.field == self.field:
                return self.c == other.c
            if other.field.degree == 1 or self.field.degree == 1:
                return self.is_rational() and other.is_rational() and self.c[0] == other.c[0]
            return False
        if isinstance(other, _RATIONAL_TYPES) and not isinstance(other, bool):
            return self.is_rational() and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __str__(self):
        return _format_univariate(self.c, self.field.generator_name)

    def __repr__(self):
        return f"NFElement({self})"

    def __reduce__(self):
        return (NFElement, (self.field, self.c))


RATIONALS = NumberField([1, 0], "w")


def nf_create(generator_name: str, minpoly: Sequence) -> NumberField:
    return NumberField(minpoly, generator_name)


# ---------------------------------------------------------------------------
# parameter fields (rational functions over Q)


def _fmpq(q):
    import flint

    q = mpq(q)
    return flint.fmpq(int(q.numerator), int(q.denominator))


def _from_fmpq(q) -> mpq:
    return mpq(int(q.p), int(q.q))


class ParamField:
    """Field of rational functions ``Q(p1, ..., pk)``.

    Elements are :class:`RatFunc` values over a python-flint multivariate
    polynomial ring, kept with coprime numerator and monic denominator so
    equality is representational.
    """

    def __init__(self, names: Sequence[str]):
        import flint

        self.names = tuple(names)
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "lex")
        one = self.ctx.constant(1)
        self._one_poly = one
        self.zero = RatFunc(self, self.ctx.constant(0), one)
        self.one = RatFunc(self, one, one)
        self.gens = {n: RatFunc(self, g, one) for n, g in zip(self.names, self.ctx.gens())}

    def __eq__(self, other):
        return isinstance(other, ParamField) and self.names == other.names

    def __hash__(self):
        return hash(("ParamField", self.names))

    def __repr__(self):
        return f"ParamField({', '.join(self.names)})"

    def __reduce__(self):
        return (ParamField, (self.names,))

    def _poly_type(self):
        return type(self._one_poly)

    def convert(self, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            if value.field is self or value.field == self:
                return value
            raise FieldMismatch(f"element of {value.field!r} used in {self!r}")
        if isinstance(value, NFElement):
            if not value.is_rational():
                raise FieldMismatch("parameter fields are defined over Q only")
            return self.constant(value.c[0])
        if isinstance(value, str):
            return eval_expr(value, self.gens, self.convert)
        if isinstance(value, _RATIONAL_TYPES) and not isinstance(value, bool):
            return self.constant(value)
        if isinstance(value, self._poly_type()) and value.context() == self.ctx:
            return RatFunc(self, value, self._one_poly)
        raise FieldMismatch(f"cannot convert {value!r} into {self!r}")

    __call__ = convert

    def constant(self, q) -> "RatFunc":
        return RatFunc(self, self.ctx.constant(_fmpq(q)), self._one_poly)

    def fraction(self, num, den) -> "RatFunc":
        """Canonical element ``num / den`` from two ring elements."""
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        return RatFunc._canonical(self, num, den)

    def format(self, elem) -> str:
        return str(elem)

    def poly_to_multipoly(self, p) -> "MultiPoly":
        return MultiPoly(RATIONALS, self.names, {tuple(int(k) for k in m): RATIONALS._rational(_from_fmpq(c)) for m, c in p.terms()})

    def multipoly_to_poly(self, poly: "MultiPoly"):
        poly = poly.with_vars(sort_vars(set(poly.vars) | set(self.names)))
        idx = [poly.vars.index(n) for n in self.names]
        if set(poly.used_vars()) - set(self.names):
            raise ValueError("polynomial uses variables outside the parameter set")
        return self.ctx.from_dict({tuple(e[i] for i in idx): _fmpq(to_rational(c)) for e, c in poly.terms.items()})

    def numer_denom(self, elem) -> tuple["MultiPoly", "MultiPoly"]:
        return self.poly_to_multipoly(elem.num), self.poly_to_multipoly(elem.den)

    def from_multipoly(self, poly: "MultiPoly") -> "RatFunc":
        """Evaluate a polynomial whose variables are among the parameters."""
        return RatFunc(self, self.multipoly_to_poly(poly), self._one_poly)

    def normalize(self, vec: Sequence) -> tuple:
        """Clear denominators and content; make the leading coefficient of the
        first nonzero entry positive."""
        entries = [self.convert(v) for v in vec]
        if not any(entries):
            raise ValueError("zero vector has no projective normalization")
        den = self._one_poly
        for v in entries:
            if not v.den.is_one():
                den = den * v.den / den.gcd(v.den)
        nums = [v.num * (den / v.den) if v else v.num for v in entries]
        g = None
        for n in nums:
            if not n.is_zero():
                g = n if g is None else g.gcd(n)
                if g.is_constant():
                    break
        if not g.is_constant():
            nums = [n / g for n in nums]
        coeffs = [_from_fmpq(c) for n in nums for c in n.coeffs()]
        den_l = 1
        for c in coeffs:
            den_l = math.lcm(den_l, int(c.denominator))
        num_g = 0
        for c in coeffs:
            num_g = math.gcd(num_g, int(c * den_l))
        first = next(n for n in nums if not n.is_zero())
        sign = 1 if _from_fmpq(first.leading_coefficient()) > 0 else -1
        factor = _fmpq(mpq(sign * den_l, num_g))
        return tuple(RatFunc(self, n * factor, self._one_poly) for n in nums)

    def evaluate(self, elem: "RatFunc", values: Mapping[str, object], field) -> object:
        """Specialize the parameters to elements of ``field``."""
        num = self.poly_to_multipoly(elem.num).eval(values, field)
        den = self.poly_to_multipoly(elem.den).eval(values, field)
        if not den:
            raise DivisionByZero("denominator vanishes under specialization")
        return num / den

    def gcd(self, elems: Iterable["RatFunc"]) -> "RatFunc":
        """Monic gcd of the numerators of the nonzero entries."""
        g = None
        for v in elems:
            v = self.convert(v)
            if v:
                g = v.num if g is None else g.gcd(v.num)
        if g is None:
            return self.zero
        return RatFunc(self, g / g.leading_coefficient(), self._one_poly)

    def factor(self, elem: "RatFunc") -> list[tuple["MultiPoly", int]]:
        """Irreducible factors of the numerator over Q."""
        _, facs = elem.num.factor()
        return [(self.poly_to_multipoly(f), int(k)) for f, k in facs]


class RatFunc:
    """Quotient of two polynomials with coprime parts and monic denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: ParamField, num, den):
        self.field = field
        self.num = num
        self.den = den

    @staticmethod
    def _canonical(field, num, den) -> "RatFunc":
        one = field._one_poly
        if num.is_zero():
            return RatFunc(field, num, one)
        if den.is_constant():
            return RatFunc(field, num / den, one)
        g = num.gcd(den)
        if not g.is_constant():
            num, den = num / g, den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc(field, num, den)

    @property
    def numer(self):
        return self.num

    @property
    def denom(self):
        return self.den

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatch("rational functions over different parameter sets")
        try:
            return self.field.convert(other)
        except (FieldMismatch, TypeError):
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RatFunc(self.field, self.num + o.num, self.den)
        if self.den == o.den:
            return RatFunc._canonical(self.field, self.num + o.num, self.den)
        return RatFunc._canonical(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RatFunc(self.field, self.num * o.num, self.den)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if n1.is_zero() or n2.is_zero():
            return self.field.zero
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_constant():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_constant():
                n2, d1 = n2 / g, d1 / g
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc(self.field, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("division by zero rational function")
        lc = self.num.leading_coefficient()
        return RatFunc(self.field, self.den / lc, self.num / lc)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.field, self.num**n, self.den**n)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.is_one() and self.num.is_constant():
            return hash(_from_fmpq(self.num.leading_coefficient())) if not self.num.is_zero() else 0
        return hash((str(self.num), str(self.den)))

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def as_expr(self):
        import sympy

        return sympy.sympify(str(self.num).replace("^", "**")) / sympy.sympify(str(self.den).replace("^", "**"))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"

    def __reduce__(self):
        return (_rebuild_ratfunc, (self.field, str(self.num), str(self.den)))


def _rebuild_ratfunc(field, num, den):
    return field.fraction(
        field.multipoly_to_poly(MultiPoly.parse(num, RATIONALS, field.names)),
        field.multipoly_to_poly(MultiPoly.parse(den, RATIONALS, field.names)),
    )


# ---------------------------------------------------------------------------
# expression parsing


def eval_expr(text: str, names: Mapping[str, object], convert: Callable):
    """Evaluate an arithmetic expression with ``+ - * / ^`` and parentheses.

    Integer literals pass through ``convert``; identifiers are looked up in
    ``names``. Nothing else is accepted.
    """
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return convert(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ParseError(f"unknown symbol {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = _int_literal(node.right)
                if exp is None:
                    raise ParseError(f"exponents must be integer literals in {text!r}")
                return ev(node.left) ** exp
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right:
                    raise DivisionByZero(f"division by zero in {text!r}")
                return left / right
        raise ParseError(f"unsupported syntax in {text!r}")

    return ev(tree)


def _int_literal(node) -> int | None:
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = _int_literal(node.operand)
        return None if inner is None else -inner
    return None


# ---------------------------------------------------------------------------
# multivariate polynomials

GLOBAL_ORDER = ("x", "y", "z", "t", "b", "c", "d", "e", "f")
_ORDER_INDEX = {v: i for i, v in enumerate(GLOBAL_ORDER)}


def var_key(name: str):
    return (_ORDER_INDEX.get(name, len(GLOBAL_ORDER)), name)


def sort_vars(names: Iterable[str]) -> tuple:
    return tuple(sorted(set(names), key=var_key))


class MultiPoly:
    """Sparse polynomial: a map from exponent tuples to nonzero coefficients.

    Variables are kept sorted by the global order ``x > y > z > t > b > c >
    d > e > f`` (others after, alphabetically); terms print in degree
    lexicographic order.
    """

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field, vars: Sequence[str], terms: Mapping | None = None, *, _trusted: bool = False):
        self.field = field
        if _trusted:
            self.vars = vars
            self.terms = terms
            return
        vars = tuple(vars)
        target = sort_vars(vars)
        if len(target) != len(vars):
            raise ValueError("duplicate variable names")
        clean = {}
        if terms:
            perm = None if target == vars else [vars.index(v) for v in target]
            conv = field.convert
            for exps, coeff in terms.items():
                if len(exps) != len(vars):
                    raise ValueError("exponent length does not match variables")
                c = conv(coeff)
                if not c:
                    continue
                e = tuple(exps) if perm is None else tuple(exps[i] for i in perm)
                if e in clean:
                    c = clean[e] + c
                    if not c:
                        del clean[e]
                        continue
                clean[e] = c
        self.vars = target
        self.terms = clean

    # constructors

    @classmethod
    def gen(cls, field, name: str, vars: Sequence[str] | None = None) -> "MultiPoly":
        vars = sort_vars(vars if vars is not None else (name,))
        e = tuple(1 if v == name else 0 for v in vars)
        return cls(field, vars, {e: field.one}, _trusted=True)

    @classmethod
    def constant(cls, field, value, vars: Sequence[str] = ()) -> "MultiPoly":
        vars = sort_vars(vars)
        c = field.convert(value)
        terms = {(0,) * len(vars): c} if c else {}
        return cls(field, vars, terms, _trusted=True)

    @classmethod
    def parse(cls, text: str, field=None, vars: Sequence[str] | None = None, constants: Mapping | None = None):
        """Parse an expression; identifiers not in ``constants`` become variables."""
        field = RATIONALS if field is None else field
        constants = dict(constants or {})
        if isinstance(field, NumberField) and field.degree > 1:
            constants.setdefault(field.generator_name, field.gen)
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse {text!r}") from exc
        found = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)} - set(constants)
        allvars = sort_vars(set(vars or ()) | found)
        names = {v: cls.gen(field, v, allvars) for v in found}
        for k, val in constants.items():
            names[k] = cls.constant(field, val, allvars)
        res = eval_expr(text, names, lambda n: cls.constant(field, n, allvars))
        if not isinstance(res, MultiPoly):
            res = cls.constant(field, res, allvars)
        return res.with_vars(allvars)

    # structure

    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        """Re-express over a superset of the current variables."""
        vars = sort_vars(vars)
        if vars == self.vars:
            return self
        missing = set(self.vars) - set(vars)
        if missing:
            used = {v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)}
            if used & missing:
                raise ValueError(f"variables {sorted(used & missing)} are in use")
        pos = [self.vars.index(v) if v in self.vars else None for v in vars]
        terms = {tuple(0 if p is None else e[p] for p in pos): c for e, c in self.terms.items()}
        return MultiPoly(self.field, vars, terms, _trusted=True)

    def used_vars(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def _unify(self, other: "MultiPoly"):
        if self.field != other.field:
            raise FieldMismatch(f"polynomials over {self.field!r} and {other.field!r}")
        if self.vars == other.vars:
            return self, other
        vars = sort_vars(self.vars + other.vars)
        return self.with_vars(vars), other.with_vars(vars)

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            return self._unify(other)
        try:
            c = self.field.convert(other)
        except (TypeError, FieldMismatch):
            return None
        return self, MultiPoly.constant(self.field, c, self.vars)

    # arithmetic

    def __add__(self, other):
        pair = self._lift(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms = dict(a.terms)
        for e, c in b.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return MultiPoly(a.field, a.vars, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.field, self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        pair = self._lift(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                s = self.field.convert(other)
            except (TypeError, FieldMismatch):
                return NotImplemented
            return self.scale(s)
        a, b = self._unify(other)
        out: dict = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return MultiPoly(a.field, a.vars, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def scale(self, s) -> "MultiPoly":
        s = self.field.convert(s)
        if not s:
            return MultiPoly(self.field, self.vars, {}, _trusted=True)
        return MultiPoly(self.field, self.vars, {e: c * s for e, c in self.terms.items()}, _trusted=True)

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            return self.exact_div(other)
        s = self.field.convert(other)
        if not s:
            raise DivisionByZero("polynomial divided by zero scalar")
        return self.scale(1 / s if not hasattr(s, "inverse") else s.inverse())

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(self.field, 1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.constant(self.field, other, self.vars)
            except (TypeError, FieldMismatch):
                return NotImplemented
        if self.field != other.field:
            return False
        try:
            a, b = self._unify(other)
        except FieldMismatch:
            return False
        return a.terms == b.terms

    def __hash__(self):
        used = self.used_vars()
        a = self.with_vars(used) if used != self.vars else self
        return hash((a.vars, frozenset(a.terms.items())))

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self, vars: Sequence[str] | None = None) -> bool:
        idx = range(len(self.vars)) if vars is None else [self.vars.index(v) for v in vars if v in self.vars]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        return len(degs) <= 1

    def check_homogeneous(self, degree: int, vars: Sequence[str] | None = None) -> None:
        idx = range(len(self.vars)) if vars is None else [self.vars.index(v) for v in vars if v in self.vars]
        for e in self.terms:
            if sum(e[i] for i in idx) != degree:
                raise ValueError(f"polynomial is not homogeneous of degree {degree}")

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    def coefficient(self, monomial: Mapping[str, int]):
        e = tuple(monomial.get(v, 0) for v in self.vars)
        extra = set(monomial) - set(self.vars)
        if any(monomial[v] for v in extra):
            return self.field.zero
        return self.terms.get(e, self.field.zero)

    def coefficients_in(self, outer: Sequence[str]) -> dict:
        """Split as a polynomial in ``outer`` whose coefficients are
        polynomials in the remaining variables."""
        outer = sort_vars(outer)
        inner = tuple(v for v in self.vars if v not in outer)
        oi = [self.vars.index(v) if v in self.vars else None for v in outer]
        ii = [self.vars.index(v) for v in inner]
        groups: dict = {}
        for e, c in self.terms.items():
            ko = tuple(0 if i is None else e[i] for i in oi)
            groups.setdefault(ko, {})[tuple(e[i] for i in ii)] = c
        return {k: MultiPoly(self.field, inner, t, _trusted=True) for k, t in groups.items()}

    def map_coefficients(self, fn: Callable, field=None) -> "MultiPoly":
        field = self.field if field is None else field
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                terms[e] = v
        return MultiPoly(field, self.vars, terms, _trusted=True)

    # division

    def exact_div(self, q: "MultiPoly") -> "MultiPoly":
        """Return ``r`` with ``self == q * r``; raise :class:`NotDivisible`."""
        if not isinstance(q, MultiPoly):
            return self / q
        if not q:
            raise DivisionByZero("division by the zero polynomial")
        p, q = self._unify(q)
        key = lambda e: (sum(e), e)  # noqa: E731
        lq, cq = q.leading_term()
        inv = 1 / cq if not hasattr(cq, "inverse") else cq.inverse()
        rem = dict(p.terms)
        quot = {}
        q_rest = [(e, c) for e, c in q.terms.items() if e != lq]
        while rem:
            lr = max(rem, key=key)
            diff = tuple(a - b for a, b in zip(lr, lq))
            if any(x < 0 for x in diff):
                raise NotDivisible("polynomial division is not exact")
            coef = rem.pop(lr) * inv
            quot[diff] = coef
            for e, c in q_rest:
                m = tuple(a + b for a, b in zip(e, diff))
                v = rem.get(m)
                v = -(c * coef) if v is None else v - c * coef
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return MultiPoly(p.field, p.vars, quot, _trusted=True)

    def try_exact_div(self, q: "MultiPoly") -> "MultiPoly | None":
        try:
            return self.exact_div(q)
        except NotDivisible:
            return None

    def is_proportional(self, other: "MultiPoly") -> bool:
        """True iff ``self == lam * other`` for a nonzero scalar ``lam``."""
        a, b = self._unify(other)
        if not a.terms or not b.terms:
            return not a.terms and not b.terms
        if a.terms.keys() != b.terms.keys():
            return False
        e0 = next(iter(a.terms))
        a0, b0 = a.terms[e0], b.terms[e0]
        return all(a.terms[e] * b0 == b.terms[e] * a0 for e in a.terms)

    def proportional_over(self, other: "MultiPoly", outer: Sequence[str]) -> bool:
        """Proportionality as polynomials in ``outer`` whose scalar ratio may
        depend rationally on the remaining variables."""
        ca, cb = self.coefficients_in(outer), other.coefficients_in(outer)
        if ca.keys() != cb.keys():
            return False
        if not ca:
            return True
        k0 = next(iter(ca))
        a0, b0 = ca[k0], cb[k0]
        return all(ca[k] * b0 == cb[k] * a0 for k in ca)

    # substitution and evaluation

    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Substitute polynomials or scalars for variables."""
        mapping = {k: v for k, v in mapping.items() if k in self.vars}
        if not mapping:
            return self
        keep = [v for v in self.vars if v not in mapping]
        vals = {}
        allvars = set(keep)
        for k, v in mapping.items():
            if isinstance(v, MultiPoly):
                if v.field != self.field:
                    raise FieldMismatch("substituted polynomial lives over a different field")
                allvars |= set(v.used_vars())
        allvars = sort_vars(allvars)
        for k, v in mapping.items():
            if isinstance(v, MultiPoly):
                vals[k] = v.with_vars(sort_vars(set(v.used_vars()) | set(allvars))).with_vars(allvars)
            else:
                vals[k] = MultiPoly.constant(self.field, v, allvars)
        keep_pos = [(allvars.index(v), self.vars.index(v)) for v in keep]
        sub_pos = [(self.vars.index(k), vals[k]) for k in mapping]
        powers: dict = {}

        def power(name_idx, poly, n):
            key = (name_idx, n)
            if key not in powers:
                powers[key] = poly ** n
            return powers[key]

        result = MultiPoly(self.field, allvars, {}, _trusted=True)
        zero_e = [0] * len(allvars)
        for e, c in self.terms.items():
            mono = list(zero_e)
            for ai, si in keep_pos:
                mono[ai] = e[si]
            term = MultiPoly(self.field, allvars, {tuple(mono): c}, _trusted=True)
            for si, poly in sub_pos:
                if e[si]:
                    term = term * power(si, poly, e[si])
            result = result + term
        return result

    def eval(self, values: Mapping[str, object], field=None):
        """Evaluate at scalars; every used variable must be given.

        ``field`` (default: the coefficient field) receives the result and
        converts the coefficients.
        """
        field = self.field if field is None else field
        conv = field.convert
        idx = [(i, values[v]) for i, v in enumerate(self.vars) if v in values]
        missing = [v for v in self.used_vars() if v not in values]
        if missing:
            raise KeyError(f"no value for {missing}")
        pw: dict = {}
        total = field.zero
        for e, c in self.terms.items():
            acc = conv(c)
            for i, val in idx:
                k = e[i]
                if k:
                    key = (i, k)
                    p = pw.get(key)
                    if p is None:
                        p = pw[key] = val ** k
                    acc = acc * p
            total = total + acc
        return total

    def partial_eval(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute scalars for some variables; they remain as dummy vars."""
        return self.subs(values)

    def derivative(self, var: str) -> "MultiPoly":
        if var not in self.vars:
            return MultiPoly(self.field, self.vars, {}, _trusted=True)
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                terms[ne] = c * e[i]
        return MultiPoly(self.field, self.vars, terms, _trusted=True)

    # output

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            parts.append(_term_string(c, mono, self.field))
        text = "".join(parts)
        return text[3:] if text.startswith(" + ") else ("-" + text[3:] if text.startswith(" - ") else text)

    def __repr__(self):
        return f"MultiPoly({self})"

    def to_sympy(self):
        import sympy

        syms = sympy.symbols(self.vars) if self.vars else ()
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            expr += scalar_to_sympy(c, self.field) * sympy.Mul(*[s**k for s, k in zip(syms, e)])
        return expr


def _term_string(c, mono: str, field) -> str:
    if isinstance(c, NFElement) and c.is_rational():
        q = c.c[0]
        neg = q < 0
        a = -q if neg else q
        body = (mono if a == 1 else f"{format_rational(a)}*{mono}") if mono else format_rational(a)
        return (" - " if neg else " + ") + body
    text = field.format(c) if hasattr(field, "format") else str(c)
    simple = not any(op in text[1:] for op in "+-")
    if simple and text.startswith("-"):
        body = text[1:]
        return " - " + (f"{body}*{mono}" if mono else body)
    body = text if simple else f"({text})"
    return " + " + (f"{body}*{mono}" if mono else body)


def scalar_to_sympy(c, field=None):
    import sympy

    if isinstance(c, NFElement):
        w = sympy.Symbol(c.field.generator_name)
        return sum(
            (sympy.Rational(int(q.numerator), int(q.denominator)) * w**k for k, q in enumerate(c.c)),
            sympy.Integer(0),
        )
    if isinstance(c, _RATIONAL_TYPES):
        q = mpq(c)
        return sympy.Rational(int(q.numerator), int(q.denominator))
    return sympy.sympify(c.as_expr())


def poly_exact_div(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p.exact_div(q)


def poly_proportional(p: MultiPoly, q: MultiPoly) -> bool:
    return p.is_proportional(q)


def primitive_rational(poly: MultiPoly) -> MultiPoly:
    """Scale a polynomial with rational coefficients to integer coefficients
    with content 1 and positive leading coefficient."""
    if not poly.terms:
        return poly
    den, num = 1, 0
    for c in poly.terms.values():
        q = to_rational(c)
        den = math.lcm(den, int(q.denominator))
    for c in poly.terms.values():
        num = math.gcd(num, int(to_rational(c) * den))
    _, lc = poly.leading_term()
    sign = -1 if to_rational(lc) < 0 else 1
    return poly.scale(mpq(sign * den, num))
