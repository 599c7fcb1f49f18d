"""Normal forms for the id-matching and (12)-matching families.

Every normalization step is an automorphism whose single free coefficient
A_k is found by running the parameter transform with A_k left symbolic,
reading off the (affine) target coordinate and solving it with
:func:`solve_affine`.  The steps are kept as a witness chain that replays
the input onto the canonical representative.

Families (n = dimension):

* id-matching: ``B1``, ``B2(alpha)``, ``Bs(alpha)`` with 3 <= s <= n.
* (12)-matching, not id-matching: ``A1``, ``A2``, ``A3r`` (quotient of type
  B2) and ``A4s``, ``A5sr``, ``A6s``, ``A7s`` (quotient of type Bs).

For A4 to A7 the surviving beta parameters are only determined up to the
scaling t -> zeta t with zeta**(s-2) = 1, and up to the choice of an
(s-2)-th root of alpha_s.  Those forms pin both down inside the working
domain: alpha_s is reduced to a fixed representative of its class modulo
(s-2)-th powers (reported as ``scale`` when it is not 1) and zeta is chosen
to make the beta parameters lexicographically least.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .automorphism import (
    AutoParams,
    IdParams,
    TwelveParams,
    infer_domain,
    transform_12_params,
    transform_id_params,
)
from .derive import id_star, twelve_star
from .errors import DimensionMismatch, InvalidIndices, UnrecognizedFamily
from .scalars import Domain, Poly, affine_equation, scalar_from_json, scalar_to_json, solve_affine
from .tensor import BiAlgebra, make_null_filiform

ID_TAGS = ("B1", "B2", "Bs")
TWELVE_TAGS = ("A1", "A2", "A3r", "A4s", "A5sr", "A6s", "A7s")
#: forms whose parameters depend on a choice of root or of zeta
SCALED_TAGS = ("A4s", "A5sr", "A6s", "A7s")


@dataclass(frozen=True)
class CanonicalForm:
    tag: str
    n: int
    s: int | None = None
    r: int | None = None
    params: tuple = ()

    def __post_init__(self):
        if self.tag not in ID_TAGS + TWELVE_TAGS:
            raise UnrecognizedFamily(f"unknown tag {self.tag!r}")
        object.__setattr__(self, "params", tuple((str(k), v) for k, v in self.params))

    def param(self, name: str, default=None):
        for k, v in self.params:
            if k == name:
                return v
        return default

    @property
    def is_twelve(self) -> bool:
        return self.tag in TWELVE_TAGS

    @property
    def depends_on_choices(self) -> bool:
        """True for A4 to A7, whose parameters are pinned by a domain-specific choice."""
        return self.tag in SCALED_TAGS

    def label(self) -> str:
        idx = ", ".join(f"{k}={v}" for k, v in (("s", self.s), ("r", self.r)) if v is not None)
        ps = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.tag}[{idx}]({ps})" if idx else f"{self.tag}({ps})"

    def to_json(self) -> dict:
        out = {"tag": self.tag, "n": self.n}
        if self.s is not None:
            out["s"] = self.s
        if self.r is not None:
            out["r"] = self.r
        out["params"] = {k: scalar_to_json(v) for k, v in self.params}
        return out

    @classmethod
    def from_json(cls, obj, domain: Domain | None = None) -> "CanonicalForm":
        return cls(
            obj["tag"],
            int(obj["n"]),
            obj.get("s"),
            obj.get("r"),
            tuple((k, scalar_from_json(v, domain)) for k, v in obj.get("params", {}).items()),
        )


def canonical_equal(f: CanonicalForm, g: CanonicalForm) -> bool:
    if f.n != g.n:
        raise DimensionMismatch(f"forms of dimensions {f.n} and {g.n}")
    return f == g


@dataclass(frozen=True)
class WitnessChain:
    steps: tuple
    notes: tuple = ()
    complete: bool = True

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps], "notes": list(self.notes)}


@dataclass(frozen=True)
class PartialWitness:
    """Steps that could be carried out, and why the chain stops short."""

    steps: tuple
    reason: str
    notes: tuple = ()
    complete: bool = False

    def to_json(self) -> dict:
        return {"partial": self.reason, "steps": [s.to_json() for s in self.steps], "notes": list(self.notes)}


@dataclass(frozen=True)
class Normalization:
    form: CanonicalForm
    witness: WitnessChain | PartialWitness
    reached: IdParams | TwelveParams

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "witness": self.witness.to_json()}


def replay(params, witness):
    """Apply the witness steps to ``params`` in order."""
    fn = transform_12_params if isinstance(params, TwelveParams) else transform_id_params
    for A in witness.steps:
        params = fn(params, A)
    return params


# ---------------------------------------------------------------------------
# step machinery


class _Chain:
    def __init__(self, params, transform: Callable, dom: Domain):
        self.params = params
        self.transform = transform
        self.dom = dom
        self.one = dom.one()
        self.zero = dom.zero()
        self.steps: list = []
        self.notes: list = []

    @property
    def n(self) -> int:
        return self.params.n

    def apply(self, A: tuple, note: str | None = None):
        auto = AutoParams(tuple(A))
        if all(not a for a in A[1:]) and A[0] == self.one:
            return
        self.params = self.transform(self.params, auto)
        self.steps.append(auto)
        if note:
            self.notes.append(note)

    def solve(self, k: int, target: Callable, value=None, a1=None, note: str | None = None):
        """Solve for A_k (others zero, A_1 = a1) so that target(params') == value; apply it."""
        n = self.n
        a1 = self.one if a1 is None else a1
        value = self.zero if value is None else value
        name = f"A{k}"
        A = [a1] + [self.zero] * (n - 1)
        A[k - 1] = Poly.var(name, self.one)
        expr = target(self.transform(self.params, AutoParams(tuple(A)))) - value
        val = solve_affine(affine_equation(expr, name), name)
        A[k - 1] = self.dom.convert(val)
        self.apply(tuple(A), note)
        return A[k - 1]

    def scale(self, lam, note=None):
        self.apply((lam,) + (self.zero,) * (self.n - 1), note)

    def result(self, form, partial_reason=None):
        if partial_reason is None:
            w = WitnessChain(tuple(self.steps), tuple(self.notes))
        else:
            w = PartialWitness(tuple(self.steps), partial_reason, tuple(self.notes))
        return Normalization(form, w, self.params)


def _dom(values, domain):
    return domain if domain is not None else infer_domain(values)


# ---------------------------------------------------------------------------
# id-matching


def normalize_id(p: IdParams, domain: Domain | None = None) -> Normalization:
    n = p.n
    if n < 1:
        raise DimensionMismatch("empty parameter vector")
    dom = _dom(p.alpha, domain)
    ch = _Chain(IdParams(tuple(dom.convert(a) for a in p.alpha)), transform_id_params, dom)
    al = lambda k: (lambda q: q.alpha[k - 1])
    a = ch.params.alpha
    if a[0]:
        lam = ch.one / a[0]
        if n >= 2:
            ch.solve(2, al(2), a1=lam, note="A1 = 1/alpha_1 normalizes alpha_1; A2 clears alpha_2")
        else:
            ch.scale(lam)
        for k in range(3, n + 1):
            if ch.params.alpha[k - 1]:
                ch.solve(k, al(k))
        return ch.result(CanonicalForm("B1", n))
    alpha = a[1] if n >= 2 else ch.zero
    s = next((i for i in range(3, n + 1) if a[i - 1]), None)
    if s is None:
        return ch.result(CanonicalForm("B2", n, params=(("alpha", alpha),)))
    form = CanonicalForm("Bs", n, s=s, params=(("alpha", alpha),))
    root = dom.nth_root(a[s - 1], s - 2)
    reason = None
    start = 2
    if root is not None:
        if s + 1 <= n:
            ch.solve(2, al(s + 1), a1=root, note=f"A1 normalizes alpha_{s} to 1")
            start = 3
        else:
            ch.scale(root)
    else:
        reason = f"alpha_{s} = {a[s - 1]} has no {s - 2}-th root in {dom.name}"
    for k in range(start, n - s + 2):
        if ch.params.alpha[s + k - 2]:
            ch.solve(k, al(s + k - 1))
    return ch.result(form, reason)


# ---------------------------------------------------------------------------
# (12)-matching


def is_id_matching_twelve(p: TwelveParams) -> bool:
    n = p.n
    return not p.alpha[0] and all(p.beta[i - 1] == p.alpha[n - i] for i in range(2, n))


def normalize_12(p: TwelveParams, domain: Domain | None = None) -> Normalization:
    """Normal form of a (12)-family member.

    Members that are id-matching are sent to their id-matching normal form
    (tag B1/B2/Bs); the witness steps act on the same tensor either way.
    """
    n = p.n
    if n < 2:
        raise DimensionMismatch("(12) family needs n >= 2")
    dom = _dom(p.alpha + p.beta, domain)
    p = TwelveParams(tuple(dom.convert(a) for a in p.alpha), tuple(dom.convert(b) for b in p.beta))
    if is_id_matching_twelve(p):
        return normalize_id(IdParams(p.alpha + (p.beta[0],)), dom)
    ch = _Chain(p, transform_12_params, dom)
    A = lambda k: (lambda q: q.alpha[k - 1])
    B = lambda k: (lambda q: q.beta[k - 1])
    a = p.alpha
    m = n - 1  # dimension of the quotient

    # quotient of type B1
    if a[0]:
        lam = ch.one / a[0]
        if m >= 2:
            ch.solve(2, A(2), a1=lam, note="quotient: alpha_1 -> 1, alpha_2 -> 0")
        else:
            ch.scale(lam)
        for k in range(3, m + 1):
            if ch.params.alpha[k - 1]:
                ch.solve(k, A(k))
        if ch.params.beta[0]:
            ch.solve(n, B(1), note=f"A{n} clears beta_1")
        bs = ch.params.beta
        return ch.result(CanonicalForm("A1", n, params=tuple((f"beta_{i}", bs[i - 1]) for i in range(2, n))))

    alpha = a[1] if m >= 2 else ch.zero
    s = next((i for i in range(3, m + 1) if a[i - 1]), None)

    # quotient of type B2
    if s is None:
        c = ch.params.beta[n - 2] - alpha
        if c:
            for k in range(2, n):
                if ch.params.beta[n - k - 1]:
                    ch.solve(k, B(n - k))
            return ch.result(CanonicalForm("A2", n, params=(("alpha", alpha), ("beta", ch.params.beta[n - 2]))))
        r = next(r for r in range(2, n - 1) if ch.params.beta[n - r - 1])
        form = CanonicalForm("A3r", n, r=r, params=(("alpha", alpha),))
        lead = ch.params.beta[n - r - 1]
        root = dom.nth_root(lead, r - 1)
        reason = None
        j0 = 1
        if root is not None:
            if n - r - 1 >= 1:
                ch.solve(2, B(n - r - 1), a1=root, note=f"A1 normalizes beta_{n - r} to 1")
                j0 = 2
            else:
                ch.scale(root)
        else:
            reason = f"beta_{n - r} = {lead} has no {r - 1}-th root in {dom.name}"
        for j in range(j0, n - r):
            if ch.params.beta[n - r - j - 1]:
                ch.solve(j + 1, B(n - r - j))
        return ch.result(form, reason)

    # quotient of type Bs, 3 <= s <= n - 1
    x = a[s - 1]
    root = dom.nth_root(x, s - 2)
    if root is not None:
        rep, lam = ch.one, root
    else:
        rep, lam = dom.power_class(x, s - 2)
    reason = None if rep == ch.one else (
        f"alpha_{s} = {x} has no {s - 2}-th root in {dom.name}; reduced to the class representative {rep}")
    if s + 1 <= m:
        ch.solve(2, A(s + 1), a1=lam, note=f"A1 brings alpha_{s} to {rep}")
        start = 3
    else:
        ch.scale(lam)
        start = 2
    for k in range(start, m - s + 2):
        if ch.params.alpha[s + k - 2]:
            ch.solve(k, A(s + k - 1))

    cur = ch.params
    c = cur.beta[n - 2] - alpha
    if c:
        tag, r = "A4s", None
        for k in range(1, s):
            if ch.params.beta[s - k - 1]:
                ch.solve(n - s + k, B(s - k))
        survivors = range(s, n)
    else:
        r = next((r for r in range(2, s - 1) if cur.beta[n - r - 1]), None)
        if r is not None:
            tag = "A5sr"
            for k in range(1, s - r + 1):
                if ch.params.beta[s - r - k]:
                    ch.solve(n - s + k, B(s - r - k + 1))
            survivors = range(s - r + 1, n - r + 1)
        elif 2 * cur.beta[n - s] != s * rep:
            tag = "A6s"
            if ch.params.beta[0]:
                ch.solve(n - s + 1, B(1), note=f"A{n - s + 1} clears beta_1")
            survivors = range(2, n - s + 2)
        else:
            tag = "A7s"
            survivors = range(1, n - s + 1)

    # residual symmetry t -> zeta t, zeta**(s-2) = 1
    survivors = list(survivors)
    best = None
    for z in dom.roots_of_unity(s - 2):
        q = ch.params if z == ch.one else transform_12_params(ch.params, AutoParams((z,) + (ch.zero,) * (n - 1)))
        key = tuple(dom.sort_key(q.beta[i - 1]) for i in survivors)
        if best is None or key < best[0]:
            best = (key, z)
    if best[1] != ch.one:
        ch.scale(best[1], note="zeta picks the least beta vector")

    params = [("alpha", alpha)] + [(f"beta_{i}", ch.params.beta[i - 1]) for i in survivors]
    if rep != ch.one:
        params.append(("scale", rep))
    return ch.result(CanonicalForm(tag, n, s=s, r=r, params=tuple(params)), reason)


def normalize(params, domain: Domain | None = None) -> Normalization:
    if isinstance(params, TwelveParams):
        return normalize_12(params, domain)
    if isinstance(params, IdParams):
        return normalize_id(params, domain)
    raise TypeError(f"cannot normalize {type(params).__name__}")


# ---------------------------------------------------------------------------
# realization


def _need(form, *names):
    missing = [k for k in names if form.param(k) is None]
    if missing:
        raise InvalidIndices(f"{form.tag} needs parameters {missing}")


def form_params(form: CanonicalForm, domain: Domain | None = None):
    """Family parameters of the representative named by ``form``."""
    n, s, r, tag = form.n, form.s, form.r, form.tag
    vals = [v for _, v in form.params]
    dom = _dom(vals, domain) if vals else (domain or _dom([Fraction(0)], None))
    zero, one = dom.zero(), dom.one()
    cv = lambda k, default=None: dom.convert(form.param(k, default))
    if n < 1:
        raise InvalidIndices("n must be positive")

    if tag in ID_TAGS:
        al = [zero] * n
        if tag == "B1":
            al[0] = one
        else:
            _need(form, "alpha")
            if n >= 2:
                al[1] = cv("alpha")
            elif cv("alpha"):
                raise InvalidIndices("B2 in dimension 1 has alpha = 0")
            if tag == "Bs":
                if s is None or not 3 <= s <= n:
                    raise InvalidIndices(f"Bs needs 3 <= s <= n, got s={s}, n={n}")
                al[s - 1] = one
        return IdParams(tuple(al))

    if n < 3 and tag != "A1" and tag != "A2":
        raise InvalidIndices(f"{tag} needs n >= 3")
    m = n - 1
    al = [zero] * m
    be = [zero] * m
    if tag == "A1":
        al[0] = one
        for i in range(2, n):
            _need(form, f"beta_{i}")
            be[i - 1] = cv(f"beta_{i}")
        return TwelveParams(tuple(al), tuple(be))
    _need(form, "alpha")
    alpha = cv("alpha")
    if m >= 2:
        al[1] = alpha
    elif alpha:
        raise InvalidIndices("alpha must be 0 when n = 2")
    if tag == "A2":
        _need(form, "beta")
        b = cv("beta")
        if b == alpha:
            raise InvalidIndices("A2 requires beta != alpha")
        be[n - 2] = b
        return TwelveParams(tuple(al), tuple(be))
    if tag == "A3r":
        # r = n - 1 would put the lead on beta_1, which leaves the structure id-matching
        if r is None or not 2 <= r <= n - 2:
            raise InvalidIndices(f"A3r needs 2 <= r <= n-2, got r={r}")
        be[n - 2] = alpha
        be[n - r - 1] = one
        return TwelveParams(tuple(al), tuple(be))

    if s is None or not 3 <= s <= n - 1:
        raise InvalidIndices(f"{tag} needs 3 <= s <= n-1, got s={s}, n={n}")
    x = cv("scale", one)
    if not x:
        raise InvalidIndices("scale must be nonzero")
    al[s - 1] = x
    if tag == "A4s":
        for i in range(s, n):
            _need(form, f"beta_{i}")
            be[i - 1] = cv(f"beta_{i}")
        if be[n - 2] == alpha:
            raise InvalidIndices("A4s requires beta_(n-1) != alpha")
        return TwelveParams(tuple(al), tuple(be))
    be[n - 2] = alpha
    if tag == "A5sr":
        if r is None or not (2 <= r <= s - 2):
            raise InvalidIndices(f"A5sr needs 2 <= r <= s-2, got r={r}, s={s}")
        for i in range(s - r + 1, n - r + 1):
            _need(form, f"beta_{i}")
            be[i - 1] = cv(f"beta_{i}")
        if not be[n - r - 1]:
            raise InvalidIndices(f"A5sr requires beta_{n - r} != 0")
        return TwelveParams(tuple(al), tuple(be))
    if tag == "A6s":
        for i in range(2, n - s + 2):
            _need(form, f"beta_{i}")
            be[i - 1] = cv(f"beta_{i}")
        top = be[n - s]
        if 2 * top == s * x:
            raise InvalidIndices(f"A6s requires 2 beta_{n - s + 1} != s * alpha_s")
        if top == x and all(not be[i - 1] for i in range(2, n - s + 1)):
            raise InvalidIndices("these A6s parameters give an id-matching structure")
        return TwelveParams(tuple(al), tuple(be))
    if tag == "A7s":
        for i in range(1, n - s + 1):
            _need(form, f"beta_{i}")
            be[i - 1] = cv(f"beta_{i}")
        be[n - s] = dom.convert(s) * x / dom.convert(2)
        return TwelveParams(tuple(al), tuple(be))
    raise UnrecognizedFamily(tag)


def realize(form: CanonicalForm, n: int | None = None, domain: Domain | None = None) -> BiAlgebra:
    """The bialgebra (null-filiform dot, star) represented by ``form``."""
    if n is not None and n != form.n:
        form = CanonicalForm(form.tag, n, form.s, form.r, form.params)
    params = form_params(form, domain)
    if isinstance(params, IdParams):
        star = id_star(params.alpha, domain or infer_domain(params.alpha))
    else:
        star = twelve_star(params.alpha, params.beta, domain or infer_domain(params.alpha + params.beta))
    return BiAlgebra(make_null_filiform(form.n, star.domain), star)
