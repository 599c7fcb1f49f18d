from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullfiliform import GF, QQ, Fp, Poly, RatFunc, parse_domain, ring_ops, solve_affine, substitute
from nullfiliform.errors import DivisionByZero, DomainMismatch, NonInvertible, SingularCoefficient
from nullfiliform.scalars import (
    LinearEquation,
    Polynomials,
    RationalFunctions,
    affine_equation,
    domain_of,
    scalar_from_json,
    scalar_to_json,
)

primes = st.sampled_from([2, 3, 5, 7, 11, 13])
fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)


@given(primes, st.integers(), st.integers(), st.integers())
def test_fp_field_axioms(p, a, b, c):
    x, y, z = Fp(a, p), Fp(b, p), Fp(c, p)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if y:
        assert (x / y) * y == x
        assert y * y.inverse() == 1


def test_fp_mixing_rules():
    assert Fp(3, 7) + 5 == Fp(1, 7)
    assert 2 - Fp(3, 7) == Fp(6, 7)
    assert Fp(3, 7) ** -1 == Fp(5, 7)
    with pytest.raises(DomainMismatch):
        Fp(1, 7) + Fp(1, 5)
    with pytest.raises(DomainMismatch):
        Fp(1, 7) + Fraction(1, 2)
    with pytest.raises(DivisionByZero):
        Fp(1, 7) / Fp(7, 7)


def test_ring_ops_checks_domains():
    assert ring_ops(1, 2, "div") == Fraction(1, 2)
    assert ring_ops(Fp(2, 5), 3, "mul") == Fp(1, 5)
    with pytest.raises(DomainMismatch):
        ring_ops(Fraction(1, 2), Fp(1, 5), "add")
    with pytest.raises(DivisionByZero):
        ring_ops(Fraction(1), 0, "div")
    with pytest.raises(ValueError):
        ring_ops(1, 1, "pow")


def test_poly_arithmetic_and_exact_division():
    x, y = Poly.var("x"), Poly.var("y")
    f = (x + y) ** 3
    assert f.degree_in("x") == 3
    assert f.coeff_in("x", 1) == 3 * y**2
    assert f.exact_div(x + y) == (x + y) ** 2
    assert (x * y - y) / y == x - 1
    with pytest.raises(NonInvertible):
        (x + 1).exact_div(y)
    assert (x + y).subs({"x": 2}) == y + 2
    assert substitute(x * y, {"x": 2, "y": Fraction(1, 4)}) == Fraction(1, 2)


def test_poly_over_fp_keeps_field():
    dom = Polynomials(("t",), GF(5))
    t = dom.gen("t")
    f = 3 * t + 4
    assert substitute(f, {"t": Fp(2, 5)}) == Fp(0, 5)
    assert isinstance(substitute(t * t, {"t": Fp(3, 5)}), Fp)


def test_ratfunc_equality_by_cross_multiplication():
    x = Poly.var("x")
    a = RatFunc(x**2 - 1, x - 1)
    assert a == RatFunc(x + 1)
    assert a + RatFunc(1, x) == RatFunc(x**2 + x + 1, x)
    assert substitute(RatFunc(x, x + 1), {"x": 1}) == Fraction(1, 2)
    with pytest.raises(DivisionByZero):
        substitute(RatFunc(x, x + 1), {"x": -1})


@given(fractions, st.integers(2, 5))
def test_rational_power_class(x, k):
    if x == 0:
        return
    rep, lam = QQ.power_class(x, k)
    assert rep * lam**k == x
    # the representative is invariant under multiplication by k-th powers
    assert QQ.power_class(x * Fraction(6, 5) ** k, k)[0] == rep


def test_rational_roots():
    assert QQ.nth_root(Fraction(8, 27), 3) == Fraction(2, 3)
    assert QQ.nth_root(Fraction(-8), 3) == -2
    assert QQ.nth_root(Fraction(2), 2) is None
    assert QQ.nth_root(Fraction(-4), 2) is None
    assert QQ.roots_of_unity(4) == [1, -1]


@given(primes, st.integers(1, 100), st.integers(1, 4))
def test_prime_field_power_class(p, v, k):
    F = GF(p)
    x = F.convert(v)
    if not x:
        return
    rep, lam = F.power_class(x, k)
    assert rep * lam**k == x
    root = F.nth_root(x, k)
    assert (root is not None) == (rep == 1)


def test_parse_domain():
    assert parse_domain("q") is QQ
    assert parse_domain("fp:7") == GF(7)
    assert isinstance(parse_domain("poly:a,b"), Polynomials)
    assert isinstance(parse_domain("ratfunc:a"), RationalFunctions)
    with pytest.raises(ValueError):
        parse_domain("fp:8")
    with pytest.raises(ValueError):
        parse_domain("reals")
    assert domain_of(Fp(1, 3)) == GF(3)


def test_solve_affine():
    a, b = Poly.var("a"), Poly.var("b")
    # other unknowns folded into the constant stay symbolic
    eq = affine_equation(3 * a + 2 * b - 1, "a")
    assert solve_affine(eq, "a") == (1 - 2 * b) / 3
    with pytest.raises(ValueError):
        solve_affine(LinearEquation({"a": 3, "b": 2}, -1), "a")  # b is unbound
    eq = affine_equation(3 * a - 1, "a")
    assert solve_affine(eq, "a") == Fraction(1, 3)
    eq = LinearEquation({"a": 3, "b": 2}, -1)
    assert solve_affine(eq, "a", {"b": 2}) == -1
    with pytest.raises(SingularCoefficient):
        solve_affine(LinearEquation({"a": 0}, 1), "a")
    with pytest.raises(ValueError):
        affine_equation(a * a, "a")


@settings(max_examples=50)
@given(st.one_of(fractions, st.builds(Fp, st.integers(), primes)))
def test_scalar_json_roundtrip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_poly_json_roundtrip():
    x, y = Poly.var("x"), Poly.var("y")
    for v in (x * y - Fraction(1, 3), RatFunc(x, y + 1)):
        assert scalar_from_json(scalar_to_json(v)) == v
