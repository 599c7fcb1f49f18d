import random

import numpy as np
import pytest

from nullfiliform import GF, BiAlgebra, make_null_filiform, transport
from nullfiliform.canonical import CanonicalForm, realize
from nullfiliform.derive import id_star, twelve_star
from nullfiliform.errors import DomainMismatch, SearchSpaceTooLarge
from nullfiliform.oracle import (
    FLAGGED_STEPS,
    ISO_BUDGET,
    all_automorphisms,
    audit_normalization_steps,
    brute_force_isomorphism,
    enumerate_structures,
    verify_classification,
)
from nullfiliform.sampling import rand_auto


def test_enumeration_sizes():
    assert enumerate_structures(3, "id_matching", 5).shape == (125, 3)
    # beta_n = 0 (p^(2n-2) rows) plus beta_n != 0 on the id branch ((p-1) p^(n-1) rows)
    rows = enumerate_structures(3, "twelve_matching", 5)
    assert len(rows) == 5 ** 4 + 4 * 5 ** 2
    codes = [tuple(r) for r in rows]
    assert codes == sorted(codes)
    with pytest.raises(SearchSpaceTooLarge):
        enumerate_structures(9, "id_matching", 7)
    with pytest.raises(ValueError):
        enumerate_structures(3, "compatible", 5)


def test_automorphism_count():
    assert len(all_automorphisms(3, 5)) == 4 * 25


def test_isomorphism_witness():
    F = GF(7)
    rng = random.Random(1)
    a = BiAlgebra(make_null_filiform(4, F), twelve_star([F.convert(v) for v in (1, 2, 3)],
                                                       [F.convert(v) for v in (4, 5, 6)], F))
    for _ in range(5):
        b = BiAlgebra(a.dot, transport(a.star, rand_auto(rng, 4, F)))
        W = brute_force_isomorphism(a, b)
        assert W is not None and transport(b.star, W) == a.star
    assert brute_force_isomorphism(a, a).A == (1, 0, 0, 0)


def test_isomorphism_none_and_errors():
    F = GF(5)
    b1 = realize(CanonicalForm("B1", 3), domain=F)
    b2 = realize(CanonicalForm("B2", 3, params=(("alpha", F.convert(1)),)), domain=F)
    assert brute_force_isomorphism(b1, b2) is None
    with pytest.raises(DomainMismatch):
        brute_force_isomorphism(realize(CanonicalForm("B1", 3)), b1)
    with pytest.raises(DomainMismatch):
        brute_force_isomorphism(b1, b2, p=7)
    big = GF(13)
    n = 6
    assert 12 * 13 ** 5 > ISO_BUDGET
    x = BiAlgebra(make_null_filiform(n, big), id_star([big.one()] * n, big))
    with pytest.raises(SearchSpaceTooLarge):
        brute_force_isomorphism(x, x)


@pytest.mark.parametrize("n,kind,p", [(2, "id_matching", 7), (3, "id_matching", 5), (3, "twelve_matching", 5),
                                      (4, "id_matching", 5)])
def test_census_has_no_anomalies(n, kind, p):
    rep = verify_classification(n, kind, p)
    assert rep.anomalies == []
    assert sum(o["size"] for o in rep.orbits) == rep.structures


def test_census_orbits_match_brute_force():
    # orbit count for the id family at n = 3 over F_3, checked pairwise with the search
    p, n = 3, 3
    F = GF(p)
    rows = enumerate_structures(n, "id_matching", p)
    algs = [BiAlgebra(make_null_filiform(n, F), id_star([F.convert(int(v)) for v in r], F)) for r in rows]
    reps = []
    for a in algs:
        if not any(brute_force_isomorphism(r, a) is not None for r in reps):
            reps.append(a)
    assert verify_classification(n, "id_matching", p).orbit_count == len(reps)


def test_findings_explain_missing_roots():
    rep = verify_classification(4, "id_matching", 5)
    assert rep.findings and not rep.anomalies
    assert all("root" in f["reason"] for f in rep.findings)


def test_audit_small_dimensions():
    rep = audit_normalization_steps(4, 5, seed=1)
    assert rep.entries and all(e.trials == 5 for e in rep.entries)
    assert [e.step for e in rep.disagreements] == ["id:alpha1!=0:A2"]
    flagged = next(e for e in rep.entries if e.step == FLAGGED_STEPS[0])
    assert flagged.resolution == "A2 = -alpha_2/alpha_1^2" and flagged.resolution_verified
    assert flagged.example["solved"] != flagged.example["displayed"]


def test_audit_reports_unflagged_disagreements_from_n5():
    rep = audit_normalization_steps(5, 5, seed=2)
    bad = [e for e in rep.disagreements if not e.flagged]
    assert bad and all(e.resolution_verified for e in bad)
    assert audit_normalization_steps(3, 0).entries == []


def test_report_json():
    rep = verify_classification(3, "id_matching", 3)
    out = rep.to_json()
    assert out["orbit_count"] == len(out["orbits"]) and np.isscalar(out["structures"])
