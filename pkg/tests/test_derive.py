from fractions import Fraction

import numpy as np
import pytest

from nullfiliform import BiAlgebra, GF, check_identity, make_null_filiform
from nullfiliform.derive import (
    IdSeed,
    TwelveSeed,
    derive_12_star,
    derive_id_star,
    id_star,
    kernel_basis,
    linear_system,
    solution_space_dimension,
    twelve_star,
)
from nullfiliform.errors import InconsistentSeed
from nullfiliform.scalars import Polynomials


def test_id_star_table():
    star = id_star((1, 2, 3))
    # e_i * e_j = sum_{t >= i+j-1} alpha_{t-i-j+2} e_t
    assert star.row(1, 1) == {1: 1, 2: 2, 3: 3}
    assert star.row(1, 2) == {2: 1, 3: 2}
    assert star.row(2, 2) == {3: 1}
    assert star.row(2, 3) == {}
    assert derive_id_star(IdSeed((1, 2, 3))) == star


def test_twelve_star_table():
    star = twelve_star((1, 2), (5, 6, 7))
    assert star.row(1, 1) == {1: 1, 2: 2, 3: 5}
    assert star.row(1, 2) == {2: 1, 3: 6}
    assert star.row(2, 2) == {3: 7}
    assert star.row(1, 3) == {3: 7}


def test_twelve_branches():
    # beta_i = alpha_(n-i+1) for i = 2..n: the id branch, beta_1 becomes alpha_n
    res = derive_12_star(TwelveSeed((0, 5), (9, 5, 0)))
    assert res.branch == "id"
    assert res.id_params.alpha == (0, 5, 9)
    assert res.star == id_star((0, 5, 9))
    res = derive_12_star(TwelveSeed((1, 2), (3, 4, 0)))
    assert res.branch == "twelve" and res.twelve_params.beta == (3, 4)
    with pytest.raises(InconsistentSeed):
        derive_12_star(TwelveSeed((1, 2), (3, 4, 1)))
    with pytest.raises(ValueError):
        TwelveSeed((1, 2), (3, 4))


def test_symbolic_seed_keeps_constraints():
    dom = Polynomials(("a1", "a2", "b1", "b2", "b3"))
    a1, a2, b1, b2, b3 = (dom.gen(x) for x in ("a1", "a2", "b1", "b2", "b3"))
    res = derive_12_star(TwelveSeed((a1, a2), (b1, b2, b3)), dom)
    assert res.branch == "symbolic"
    assert res.constraints == (b3 * (b2 - a2), b3 * (b3 - a1))
    assert len(res.boundary) == 3


def test_twelve_members_satisfy_their_identities():
    for n in range(2, 7):
        alpha = tuple(Fraction(k, 3) for k in range(1, n))
        beta = tuple(Fraction(-k, 2) for k in range(1, n))
        alg = BiAlgebra(make_null_filiform(n), twelve_star(alpha, beta))
        assert check_identity(alg, "associativity")
        assert check_identity(alg, "twelve_matching")


@pytest.mark.parametrize("n", range(2, 7))
def test_dimensions(n):
    assert solution_space_dimension(n, "id_matching", 7) == n
    assert solution_space_dimension(n, "twelve_matching", 7) == 2 * n - 1
    assert solution_space_dimension(n, "interchangeable", 7) == n
    assert solution_space_dimension(n, "totally_compatible", 7) == n


@pytest.mark.parametrize("kind", ["id_matching", "twelve_matching", "compatible"])
def test_kernel_basis_solves_the_system(kind):
    for n in (2, 3, 4):
        M = linear_system(n, kind)
        B = kernel_basis(n, kind, 11)
        assert B.shape == (solution_space_dimension(n, kind, 11), n ** 3)
        assert not ((M @ B.T) % 11).any()


def test_kernel_members_are_family_tables():
    # the id-matching solution space is exactly the id family table
    F = GF(5)
    B = kernel_basis(3, "id_matching", 5)
    for coeffs in np.ndindex(*(5,) * B.shape[0]):
        S = (np.array(coeffs) @ B % 5).reshape(3, 3, 3)
        alpha = [F.convert(int(x)) for x in S[0, 0]]
        assert np.array_equal(id_star(alpha, F).to_int_array(5), S)


def test_twelve_products_vanish_beyond_the_boundary():
    for n in range(2, 7):
        alpha = tuple(Fraction(k, 2) for k in range(1, n))
        id_beta = (Fraction(7),) + tuple(alpha[n - i] for i in range(2, n + 1))  # beta_i = alpha_(n-i+1)
        twelve_beta = tuple(Fraction(-k) for k in range(1, n)) + (Fraction(0),)
        for beta in (id_beta, twelve_beta):
            star = derive_12_star(TwelveSeed(alpha, beta)).star
            for i in range(1, n + 1):
                for j in range(n + 2 - i, n + 1):
                    assert star.row(i, j) == {}
