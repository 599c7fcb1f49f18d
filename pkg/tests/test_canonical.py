import random
from fractions import Fraction

import pytest

from nullfiliform import (
    GF,
    QQ,
    AutoParams,
    BiAlgebra,
    IdParams,
    TwelveParams,
    check_identity,
    transform_12_params,
    transform_id_params,
)
from nullfiliform.canonical import (
    CanonicalForm,
    canonical_equal,
    form_params,
    normalize,
    normalize_12,
    normalize_id,
    realize,
    replay,
)
from nullfiliform.errors import DimensionMismatch, InvalidIndices, UnrecognizedFamily
from nullfiliform.sampling import id_tags, rand_auto, rand_form, rand_member, twelve_tags

DOMAINS = [QQ, GF(7), GF(11)]


def start_of(p, res):
    """Parameters the witness acts on: id-matching (12) members are handed to the id family."""
    if isinstance(p, TwelveParams) and not res.form.is_twelve:
        return IdParams(p.alpha + (p.beta[0],))
    return p


@pytest.mark.parametrize("dom", DOMAINS, ids=lambda d: d.name)
@pytest.mark.parametrize("n", range(2, 7))
def test_id_forms_are_invariant(dom, n):
    rng = random.Random(n)
    for tag, s in id_tags(n):
        for _ in range(4):
            p = rand_member(rng, n, tag, s, None, dom)
            res = normalize_id(p, dom)
            assert (res.form.tag, res.form.s) == (tag, s)
            assert normalize_id(transform_id_params(p, rand_auto(rng, n, dom)), dom).form == res.form
            assert replay(p, res.witness) == res.reached
            if res.witness.complete:
                assert res.reached == form_params(res.form, dom)


@pytest.mark.parametrize("dom", DOMAINS, ids=lambda d: d.name)
@pytest.mark.parametrize("n", range(3, 7))
def test_twelve_forms_are_invariant(dom, n):
    rng = random.Random(100 + n)
    for tag, s, r in twelve_tags(n):
        for _ in range(4):
            p = rand_member(rng, n, tag, s, r, dom)
            res = normalize_12(p, dom)
            assert (res.form.tag, res.form.s, res.form.r) == (tag, s, r)
            assert normalize_12(transform_12_params(p, rand_auto(rng, n, dom)), dom).form == res.form
            assert replay(start_of(p, res), res.witness) == res.reached
            if res.witness.complete:
                assert res.reached == form_params(res.form, dom)


@pytest.mark.parametrize("n", range(3, 7))
def test_realize_then_normalize_is_identity(n):
    rng = random.Random(7 * n)
    for tag, s, r in twelve_tags(n):
        form = rand_form(rng, n, tag, s, r, QQ)
        alg = realize(form)
        assert check_identity(alg, "associativity") and check_identity(alg, "twelve_matching")
        assert not check_identity(alg, "id_matching")
        got = normalize(form_params(form, QQ)).form
        if form.depends_on_choices:
            assert (got.tag, got.s, got.r) == (tag, s, r)
        else:
            assert got == form
    for tag, s in id_tags(n):
        form = rand_form(rng, n, tag, s, None, QQ)
        assert normalize(form_params(form, QQ)).form == form
        assert check_identity(realize(form), "id_matching")


def test_id_matching_twelve_members_route_to_id_forms():
    # alpha_1 = 0 and beta_i = alpha_(n-i+1): the structure is id-matching
    p = TwelveParams((0, 3, 5), (2, 5, 3))
    res = normalize_12(p)
    assert res.form.tag in ("B1", "B2", "Bs")
    assert res.form == normalize_id(IdParams((0, 3, 5, 2))).form


def test_missing_root_gives_partial_witness():
    # alpha_1 = 0, alpha_4 = 2 needs a square root of 2 to reach alpha_4 = 1
    res = normalize_id(IdParams((0, 1, 0, Fraction(2), 3)))
    assert res.form.tag == "Bs" and res.form.s == 4
    assert not res.witness.complete and "root" in res.witness.reason
    res = normalize_id(IdParams((0, 1, 0, Fraction(9, 4), 3)))
    assert res.witness.complete


def test_scale_parameter_over_q():
    # A4 at n = 5, s = 4: alpha_4 = 3 has no square root, so its square class is kept
    form = CanonicalForm("A4s", 5, s=4, params=(("alpha", Fraction(1)), ("beta_4", Fraction(2)), ("scale", Fraction(3))))
    p = form_params(form, QQ)
    got = normalize_12(transform_12_params(p, rand_auto(random.Random(0), 5))).form
    assert got.param("scale") == 3
    # and alpha_4 = 12 = 3 * 2^2 lands in the same class
    q = transform_12_params(p, AutoParams((Fraction(2), 0, 0, 0, 0)))
    assert normalize_12(q).form.param("scale") == 3


@pytest.mark.parametrize("form", [
    CanonicalForm("A3r", 5, r=4, params=(("alpha", 1),)),      # r = n - 1 is id-matching
    CanonicalForm("A3r", 5, r=1, params=(("alpha", 1),)),
    CanonicalForm("A2", 4, params=(("alpha", 2), ("beta", 2))),
    CanonicalForm("Bs", 3, s=4, params=(("alpha", 0),)),
    CanonicalForm("A5sr", 6, s=4, r=3, params=(("alpha", 0), ("beta_2", 1))),
    CanonicalForm("A4s", 5, s=5, params=(("alpha", 0), ("beta_4", 1))),
    CanonicalForm("B2", 4),
])
def test_invalid_forms(form):
    with pytest.raises(InvalidIndices):
        form_params(form, QQ)


def test_form_basics():
    with pytest.raises(UnrecognizedFamily):
        CanonicalForm("C9", 3)
    f = CanonicalForm("A5sr", 6, s=4, r=2, params=(("alpha", Fraction(1, 2)), ("beta_3", 1), ("beta_4", 2)))
    assert CanonicalForm.from_json(f.to_json()) == f
    assert f.label() == "A5sr[s=4, r=2](alpha=1/2, beta_3=1, beta_4=2)"
    with pytest.raises(DimensionMismatch):
        canonical_equal(f, CanonicalForm("B1", 3))
    assert isinstance(realize(f), BiAlgebra)
    assert normalize(IdParams((1, 2))).to_json()["form"]["tag"] == "B1"
