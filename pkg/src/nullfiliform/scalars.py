"""Exact scalar arithmetic: rationals, prime fields, polynomials, rational functions.

Rationals are plain :class:`fractions.Fraction` values.  Prime-field elements
are :class:`Fp`.  :class:`Poly` is a sparse multivariate polynomial whose
coefficients are rationals or prime-field elements, and :class:`RatFunc` is a
quotient of two polynomials.  All of them support the usual operators, so the
rest of the package writes arithmetic generically.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import (
    DivisionByZero,
    DomainMismatch,
    NonInvertible,
    SingularCoefficient,
)

# ---------------------------------------------------------------------------
# prime fields


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise DomainMismatch(f"F_{self.p} vs F_{other.p}")
            return other.v
        if isinstance(other, bool):
            return int(other)
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise DomainMismatch(f"rational {other} mixed with F_{self.p}")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


# ---------------------------------------------------------------------------
# polynomials

Monomial = tuple  # sorted tuple of (variable, exponent) pairs


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial):
    """a / b as a monomial, or None when b does not divide a."""
    d = dict(a)
    for v, e in b:
        if d.get(v, 0) < e:
            return None
        d[v] -= e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Sparse multivariate polynomial with exact coefficients.

    Terms are stored as ``{monomial: coefficient}`` with no zero coefficients.
    Output ordering is graded-lexicographic over the lexicographically sorted
    variable names.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, name: str, one=Fraction(1)) -> "Poly":
        return cls({((name, 1),): one})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            p = self._base_fp()
            return Poly.const(Fp(other, p) if p else Fraction(other))
        if isinstance(other, (Fraction, Fp)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise NonInvertible("negative power of a polynomial")
        result = Poly.const(Fraction(1)) if not self._base_fp() else Poly.const(Fp(1, self._base_fp()))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _base_fp(self):
        for c in self.terms.values():
            if isinstance(c, Fp):
                return c.p
        return 0

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Fp)):
            if not other:
                raise DivisionByZero("polynomial divided by zero")
            return Poly({m: _div(c, other) for m, c in self.terms.items()})
        if isinstance(other, Poly):
            if other.is_constant():
                return self / other.constant()
            return self.exact_div(other)
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def leading(self):
        """Leading (monomial, coefficient) in graded-lex order."""
        allv = sorted(self.variables())
        key = lambda m: (_mono_deg(m), tuple(dict(m).get(v, 0) for v in allv))
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def exact_div(self, g: "Poly") -> "Poly":
        if not g:
            raise DivisionByZero("polynomial divided by zero")
        allv = sorted(self.variables() | g.variables())
        key = lambda m: (_mono_deg(m), tuple(dict(m).get(v, 0) for v in allv))
        gm = max(g.terms, key=key)
        gc = g.terms[gm]
        r = Poly(self.terms)
        q: dict = {}
        while r:
            rm = max(r.terms, key=key)
            t = _mono_div(rm, gm)
            if t is None:
                raise NonInvertible("polynomial division is not exact")
            c = _div(r.terms[rm], gc)
            q[t] = q.get(t, 0) + c
            r = r - Poly({t: c}) * g
        return Poly(q)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self):
        return self.terms.get((), 0)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def coeff_in(self, name: str, k: int) -> "Poly":
        """Coefficient of name**k, as a polynomial in the other variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(name, 0) == k:
                d.pop(name, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(out)

    def subs(self, bindings: Mapping[str, object]):
        out = Poly()
        for m, c in self.terms.items():
            rest = tuple((v, e) for v, e in m if v not in bindings)
            term = Poly({rest: c})
            for v, e in m:
                if v in bindings:
                    term = term * (_lift_any(bindings[v]) ** e)
            out = out + term
        return out

    def sorted_terms(self):
        allv = sorted(self.variables())
        key = lambda m: (_mono_deg(m), tuple(dict(m).get(v, 0) for v in allv))
        return [(m, self.terms[m]) for m in sorted(self.terms, key=key, reverse=True)]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def _lift_any(x):
    if isinstance(x, (Poly, RatFunc)):
        return x
    return Poly.const(x)


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Quotient num/den of polynomials, compared by cross-multiplication."""

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=None):
        num = _lift_any(num)
        den = Poly.const(Fraction(1)) if den is None else _lift_any(den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if den.is_constant():
            num, den = num / den.constant(), Poly.const(Fraction(1))
        else:
            try:
                num, den = num.exact_div(den), Poly.const(Fraction(1))
            except NonInvertible:
                pass
        self.num = num
        self.den = den

    @staticmethod
    def _lift(o):
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, (Poly, int, Fraction, Fp)):
            return RatFunc(o)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise DivisionByZero("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(1) / (self ** (-k))
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __bool__(self):
        return bool(self.num)

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def subs(self, bindings):
        return substitute(self.num, bindings) / substitute(self.den, bindings)

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


Scalar = Union[Fraction, Fp, Poly, RatFunc]


# ---------------------------------------------------------------------------
# domains


class Domain:
    """A coefficient domain: conversion, constants and JSON naming."""

    name: str

    def zero(self):
        return self.convert(0)

    def one(self):
        return self.convert(1)

    def __eq__(self, other):
        return isinstance(other, Domain) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"Domain({self.name!r})"


class Rationals(Domain):
    name = "q"
    is_field = True

    def convert(self, x) -> Fraction:
        if isinstance(x, Fp):
            raise DomainMismatch("prime-field element used as a rational")
        if isinstance(x, Poly):
            if not x.is_constant():
                raise DomainMismatch(f"non-constant polynomial {x} used as a rational")
            return self.convert(x.constant())
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool)

    def sort_key(self, x):
        return Fraction(x)

    def nth_root(self, x, k: int):
        """A rational k-th root of x, or None.  Prefers the positive root."""
        x = Fraction(x)
        if k == 1:
            return x
        if x == 0:
            return Fraction(0)
        if x < 0 and k % 2 == 0:
            return None
        from sympy import integer_nthroot

        sign = -1 if x < 0 else 1
        rn, ok1 = integer_nthroot(abs(x.numerator), k)
        rd, ok2 = integer_nthroot(x.denominator, k)
        if ok1 and ok2:
            return sign * Fraction(int(rn), int(rd))
        return None

    def power_class(self, x, k: int):
        """Split x = rep * lam**k with rep a canonical representative.

        The representative is a positive integer with every prime exponent
        below k (times -1 where needed); the sign
        is kept only when k is even (odd powers reach both signs).
        """
        x = Fraction(x)
        if x == 0:
            raise DivisionByZero("zero has no power class")
        if k == 1:
            return Fraction(1), x
        from sympy import factorint

        exps = dict(factorint(abs(x.numerator)))
        for prime, e in factorint(x.denominator).items():
            exps[prime] = -e
        rep, lam = Fraction(1), Fraction(1)
        for prime, e in exps.items():
            r = e % k  # signed exponent, so 1/q and q^(k-1) share a class
            rep *= Fraction(prime) ** r
            lam *= Fraction(prime) ** ((e - r) // k)
        if x < 0:
            if k % 2:
                lam = -lam
            else:
                rep = -rep
        return rep, lam

    def roots_of_unity(self, k: int):
        return [Fraction(1), Fraction(-1)] if k % 2 == 0 else [Fraction(1)]

    def to_json(self, x):
        return scalar_to_json(Fraction(x))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


class PrimeField(Domain):
    is_field = True

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"

    def convert(self, x) -> Fp:
        if isinstance(x, Fp):
            if x.p != self.p:
                raise DomainMismatch(f"F_{x.p} element used in F_{self.p}")
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise DomainMismatch(f"rational {x} used in F_{self.p}")
            return Fp(x.numerator, self.p)
        if isinstance(x, str):
            return self.convert(Fraction(x))
        if isinstance(x, Poly):
            if not x.is_constant():
                raise DomainMismatch(f"non-constant polynomial {x} used in F_{self.p}")
            return self.convert(x.constant())
        return Fp(int(x), self.p)

    def contains(self, x) -> bool:
        return isinstance(x, Fp) and x.p == self.p

    def elements(self):
        return [Fp(v, self.p) for v in range(self.p)]

    def sort_key(self, x):
        return self.convert(x).v

    def nth_root(self, x, k: int):
        x = self.convert(x)
        for v in range(self.p):
            if pow(v, k, self.p) == x.v:
                return Fp(v, self.p)
        return None

    def power_class(self, x, k: int):
        """x = rep * lam**k with rep the least element of the coset x*(F_p^*)^k."""
        x = self.convert(x)
        if not x:
            raise DivisionByZero("zero has no power class")
        best = None
        for y in range(1, self.p):
            r = x.v * pow(pow(y, k, self.p), -1, self.p) % self.p
            if best is None or r < best[0]:
                best = (r, y)
        return Fp(best[0], self.p), Fp(best[1], self.p)

    def roots_of_unity(self, k: int):
        return [Fp(v, self.p) for v in range(1, self.p) if pow(v, k, self.p) == 1]

    def to_json(self, x):
        return scalar_to_json(self.convert(x))


class Polynomials(Domain):
    """Polynomials over a base field; ``variables`` is informational only."""

    is_field = False

    def __init__(self, variables=(), base: Domain | None = None):
        self.variables = tuple(sorted(variables))
        self.base = base or QQ
        suffix = "" if self.base == QQ else f"@{self.base.name}"
        self.name = "poly:" + ",".join(self.variables) + suffix

    def convert(self, x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, str) and x in self.variables:
            return Poly.var(x)
        return Poly.const(self.base.convert(x))

    def zero(self):
        return Poly()

    def one(self):
        return Poly.const(self.base.one())

    def gen(self, name: str) -> Poly:
        return Poly.var(name, self.base.one())

    def contains(self, x) -> bool:
        return isinstance(x, Poly)

    def to_json(self, x):
        return scalar_to_json(self.convert(x))


class RationalFunctions(Domain):
    is_field = True

    def __init__(self, variables=(), base: Domain | None = None):
        self.variables = tuple(sorted(variables))
        self.base = base or QQ
        self.name = "ratfunc:" + ",".join(self.variables)

    def convert(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, str) and x in self.variables:
            return RatFunc(Poly.var(x))
        return RatFunc(x if isinstance(x, Poly) else Poly.const(self.base.convert(x)))

    def gen(self, name: str) -> RatFunc:
        return RatFunc(Poly.var(name))

    def contains(self, x) -> bool:
        return isinstance(x, RatFunc)

    def to_json(self, x):
        return scalar_to_json(self.convert(x))


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_domain(text: str) -> Domain:
    """Parse ``q``, ``fp:<p>``, ``poly:<v1,v2,...>`` or ``ratfunc:<vars>``."""
    text = text.strip()
    if text in ("q", "Q", "qq"):
        return QQ
    kind, _, rest = text.partition(":")
    if kind == "fp":
        try:
            p = int(rest)
        except ValueError:
            raise ValueError(f"bad prime in domain {text!r}") from None
        return PrimeField(p)
    if kind in ("poly", "ratfunc"):
        names = [v for v in rest.split(",") if v]
        base = QQ
        if names and "@" in names[-1]:
            names[-1], _, b = names[-1].partition("@")
            base = parse_domain(b)
        cls = Polynomials if kind == "poly" else RationalFunctions
        return cls(names, base)
    raise ValueError(f"unknown domain {text!r}")


def domain_of(x) -> Domain:
    if isinstance(x, Fp):
        return PrimeField(x.p)
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, Poly):
        p = x._base_fp()
        return Polynomials(x.variables(), PrimeField(p) if p else QQ)
    if isinstance(x, RatFunc):
        return RationalFunctions(x.variables())
    raise DomainMismatch(f"not a scalar: {x!r}")


def _family(x) -> str:
    if isinstance(x, bool):
        return "int"
    if isinstance(x, int):
        return "int"
    if isinstance(x, Fraction):
        return "q"
    if isinstance(x, Fp):
        return f"fp:{x.p}"
    if isinstance(x, Poly):
        p = x._base_fp()
        return f"poly@fp:{p}" if p else "poly"
    if isinstance(x, RatFunc):
        return "ratfunc"
    raise DomainMismatch(f"not a scalar: {x!r}")


def _absorbs(sym: str, scalar: str) -> bool:
    """Polynomials and rational functions take scalars of their base ring."""
    if sym == "ratfunc":
        return scalar in ("q", "poly")
    return sym == "poly" and scalar == "q" or sym == f"poly@{scalar}"


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def ring_ops(a, b, op: str):
    """Apply ``op`` in {add, sub, mul, div} to two scalars of one domain.

    Plain integers are accepted alongside any domain.  Mixing domains raises
    DomainMismatch; division by zero raises DivisionByZero; inexact polynomial
    division raises NonInvertible.
    """
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    fa, fb = _family(a), _family(b)
    if "int" not in (fa, fb) and fa != fb and not _absorbs(fa, fb) and not _absorbs(fb, fa):
        raise DomainMismatch(f"{fa} vs {fb}")
    if op == "div" and not b:
        raise DivisionByZero(f"{a} / 0")
    if isinstance(a, int) and isinstance(b, int):
        a = Fraction(a)
    try:
        return _OPS[op](a, b)
    except ZeroDivisionError as e:
        raise DivisionByZero(str(e)) from e


def substitute(expr, bindings: Mapping[str, object]):
    """Bind variables in a polynomial or rational function.

    A fully bound polynomial collapses to its base scalar.
    """
    if isinstance(expr, RatFunc):
        num = substitute(expr.num, bindings)
        den = substitute(expr.den, bindings)
        if not den:
            raise DivisionByZero("denominator vanishes under substitution")
        if isinstance(num, (Poly,)) or isinstance(den, Poly):
            return RatFunc(num, den)
        return num / den
    if isinstance(expr, Poly):
        out = expr.subs(bindings)
        if isinstance(out, Poly) and out.is_constant():
            return out.constant()
        return out
    return expr


# ---------------------------------------------------------------------------
# affine equations


@dataclass(frozen=True)
class LinearEquation:
    """sum(coefficients[u] * u) + constant = 0."""

    coefficients: Mapping[str, object]
    constant: object = field(default=Fraction(0))

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a linear equation needs at least one unknown")


def affine_equation(expr, unknown: str) -> LinearEquation:
    """Read ``expr`` (a polynomial of degree <= 1 in ``unknown``) as an equation expr = 0."""
    p = _lift_any(expr)
    if isinstance(p, RatFunc):
        raise ValueError("rational function is not an affine expression")
    if p.degree_in(unknown) > 1:
        raise ValueError(f"expression is not affine in {unknown}: {p}")
    return LinearEquation({unknown: substitute(p.coeff_in(unknown, 1), {})},
                          substitute(p.coeff_in(unknown, 0), {}))


def solve_affine(eq: LinearEquation, unknown: str, bindings: Mapping | None = None):
    """Solve a single affine equation for ``unknown``; other unknowns must be bound."""
    bindings = dict(bindings or {})
    if unknown not in eq.coefficients:
        raise ValueError(f"{unknown} does not occur in the equation")
    const = substitute(eq.constant, bindings)
    for u, c in eq.coefficients.items():
        if u == unknown:
            continue
        if u not in bindings:
            raise ValueError(f"unknown {u} is not bound")
        const = const + substitute(c, bindings) * bindings[u]
    coeff = substitute(eq.coefficients[unknown], bindings)
    if not coeff:
        raise SingularCoefficient(f"coefficient of {unknown} vanishes")
    return ring_ops(-const, coeff, "div")


# ---------------------------------------------------------------------------
# JSON


def scalar_to_json(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Fp):
        return {"fp": x.p, "v": x.v}
    if isinstance(x, Poly):
        return {"terms": [{"c": scalar_to_json(c), "m": dict(m)} for m, c in x.sorted_terms()]}
    if isinstance(x, RatFunc):
        return {"num": scalar_to_json(x.num), "den": scalar_to_json(x.den)}
    raise TypeError(f"not a scalar: {x!r}")


def scalar_from_json(obj, domain: Domain | None = None):
    if isinstance(obj, bool):
        raise ValueError("bool is not a scalar")
    if isinstance(obj, (int, str)):
        x = Fraction(obj)
        return domain.convert(x) if domain is not None else x
    if isinstance(obj, dict):
        if "fp" in obj:
            x = Fp(int(obj["v"]), int(obj["fp"]))
        elif "terms" in obj:
            terms = {}
            for t in obj["terms"]:
                m = tuple(sorted((str(v), int(e)) for v, e in t["m"].items() if e))
                terms[m] = scalar_from_json(t["c"])
            x = Poly(terms)
        elif "num" in obj:
            x = RatFunc(scalar_from_json(obj["num"]), scalar_from_json(obj["den"]))
        else:
            raise ValueError(f"unrecognized scalar {obj!r}")
        return domain.convert(x) if domain is not None else x
    raise ValueError(f"unrecognized scalar {obj!r}")
