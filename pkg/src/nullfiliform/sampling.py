"""Seeded random generators for scalars, automorphisms and family members."""
from __future__ import annotations

import random
from fractions import Fraction

from .automorphism import AutoParams, IdParams, TwelveParams
from .canonical import CanonicalForm, form_params
from .errors import InvalidIndices
from .scalars import QQ, Domain, PrimeField


def rand_scalar(rng: random.Random, domain: Domain = QQ, nonzero: bool = False, bound: int = 6):
    while True:
        if isinstance(domain, PrimeField):
            x = domain.convert(rng.randrange(domain.p))
        else:
            x = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if x or not nonzero:
            return x


def rand_auto(rng: random.Random, n: int, domain: Domain = QQ) -> AutoParams:
    return AutoParams((rand_scalar(rng, domain, True),) + tuple(rand_scalar(rng, domain) for _ in range(n - 1)))


def rand_id_params(rng: random.Random, n: int, domain: Domain = QQ) -> IdParams:
    return IdParams(tuple(rand_scalar(rng, domain) for _ in range(n)))


def rand_twelve_params(rng: random.Random, n: int, domain: Domain = QQ) -> TwelveParams:
    return TwelveParams(tuple(rand_scalar(rng, domain) for _ in range(n - 1)),
                        tuple(rand_scalar(rng, domain) for _ in range(n - 1)))


def id_tags(n: int):
    """(tag, s) pairs available in dimension n."""
    return [("B1", None), ("B2", None)] + [("Bs", s) for s in range(3, n + 1)]


def twelve_tags(n: int):
    """(tag, s, r) triples available in dimension n."""
    out = [("A1", None, None), ("A2", None, None)]
    out += [("A3r", None, r) for r in range(2, n - 1)]
    for s in range(3, n):
        out += [("A4s", s, None), ("A6s", s, None), ("A7s", s, None)]
        out += [("A5sr", s, r) for r in range(2, s - 1)]
    return out


def _param_names(tag, n, s, r):
    if tag == "B1":
        return []
    if tag in ("B2", "Bs", "A3r"):
        return ["alpha"]
    if tag == "A1":
        return [f"beta_{i}" for i in range(2, n)]
    if tag == "A2":
        return ["alpha", "beta"]
    rng_ = {"A4s": range(s, n), "A5sr": range(s - r + 1, n - r + 1) if r else (),
            "A6s": range(2, n - s + 2), "A7s": range(1, n - s + 1)}[tag]
    return ["alpha"] + [f"beta_{i}" for i in rng_]


def rand_form(rng: random.Random, n: int, tag: str, s=None, r=None, domain: Domain = QQ,
              scale=None) -> CanonicalForm:
    """A random valid canonical form of the given type (retrying excluded parameter values)."""
    for _ in range(1000):
        params = [(k, rand_scalar(rng, domain)) for k in _param_names(tag, n, s, r)]
        if tag in ("A2", "A3r", "A5sr") and n == 2:
            params = [(k, domain.zero()) if k == "alpha" else (k, v) for k, v in params]
        if scale is not None:
            params.append(("scale", domain.convert(scale)))
        form = CanonicalForm(tag, n, s, r, tuple(params))
        try:
            form_params(form, domain)
        except InvalidIndices:
            continue
        return form
    raise RuntimeError(f"could not sample {tag}")


def rand_member(rng: random.Random, n: int, tag: str, s=None, r=None, domain: Domain = QQ):
    """A random structure of a given type: a representative moved by a random automorphism.

    For the families that depend on alpha_s the representative uses a random
    alpha_s, so roots may or may not exist in the domain.
    """
    from .automorphism import transform_12_params, transform_id_params

    form = rand_form(rng, n, tag, s, r, domain)
    params = form_params(form, domain)
    if tag in ("Bs",):
        al = list(params.alpha)
        al[s - 1] = rand_scalar(rng, domain, True)
        params = IdParams(tuple(al))
    A = rand_auto(rng, n, domain)
    if isinstance(params, IdParams):
        return transform_id_params(params, A)
    if tag in ("A4s", "A5sr", "A6s", "A7s"):
        # rescale alpha_s with a random torus element before mixing
        lam = rand_scalar(rng, domain, True)
        params = transform_12_params(params, AutoParams((lam,) + (domain.zero(),) * (n - 1)))
    return transform_12_params(params, A)
