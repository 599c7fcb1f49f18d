"""Structure tensors, bialgebras and the identity checker.

Basis indices are 1-based throughout the public API: ``e_i * e_j = sum_k c[i,j,k] e_k``.
Tensors are stored sparsely as ``{(i, j): {k: c}}`` with no zero entries.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NotCentral
from .scalars import QQ, Domain, parse_domain, scalar_from_json, scalar_to_json, substitute


class StructureTensor:
    """Immutable bilinear product on an n-dimensional space."""

    __slots__ = ("dim", "domain", "_rows")
    __hash__ = None

    def __init__(self, dim: int, domain: Domain, entries: Mapping | Iterable = ()):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.domain = domain
        rows: dict = {}
        items = entries.items() if isinstance(entries, Mapping) else ((e[:3], e[3]) for e in entries)
        for (i, j, k), c in items:
            for idx in (i, j, k):
                if not 1 <= idx <= dim:
                    raise IndexOutOfRange(f"index {idx} outside 1..{dim}")
            if c:
                row = rows.setdefault((i, j), {})
                row[k] = row[k] + c if k in row else c
                if not row[k]:
                    del row[k]
                    if not row:
                        del rows[(i, j)]
        self._rows = rows

    @classmethod
    def _from_rows(cls, dim, domain, rows):
        t = cls.__new__(cls)
        t.dim, t.domain = dim, domain
        t._rows = {ij: {k: c for k, c in r.items() if c} for ij, r in rows.items()}
        t._rows = {ij: r for ij, r in t._rows.items() if r}
        return t

    def entry(self, i: int, j: int, k: int):
        for idx in (i, j, k):
            if not 1 <= idx <= self.dim:
                raise IndexOutOfRange(f"index {idx} outside 1..{self.dim}")
        return self._rows.get((i, j), {}).get(k, self.domain.zero())

    def row(self, i: int, j: int) -> dict:
        """The product e_i * e_j as a sparse ``{k: c}`` dict (a copy)."""
        return dict(self._rows.get((i, j), {}))

    @property
    def rows(self) -> Mapping:
        return self._rows

    def entries(self) -> list:
        """Nonzero entries as sorted ``(i, j, k, c)`` tuples."""
        return [(i, j, k, c) for (i, j), r in sorted(self._rows.items()) for k, c in sorted(r.items())]

    def to_array(self) -> np.ndarray:
        a = np.empty((self.dim,) * 3, dtype=object)
        a.fill(self.domain.zero())
        for i, j, k, c in self.entries():
            a[i - 1, j - 1, k - 1] = c
        return a

    def to_int_array(self, p: int) -> np.ndarray:
        """Entries as residues mod p (the tensor must live over F_p)."""
        a = np.zeros((self.dim,) * 3, dtype=np.int64)
        for i, j, k, c in self.entries():
            a[i - 1, j - 1, k - 1] = int(self.domain.convert(c)) % p
        return a

    @classmethod
    def from_int_array(cls, a: np.ndarray, domain: Domain) -> "StructureTensor":
        n = a.shape[0]
        idx = np.argwhere(a)
        return cls(n, domain, [(i + 1, j + 1, k + 1, domain.convert(int(a[i, j, k]))) for i, j, k in idx])

    def map(self, fn, domain: Domain | None = None) -> "StructureTensor":
        rows = {ij: {k: fn(c) for k, c in r.items()} for ij, r in self._rows.items()}
        return StructureTensor._from_rows(self.dim, domain or self.domain, rows)

    def substitute(self, bindings, domain: Domain | None = None) -> "StructureTensor":
        return self.map(lambda c: substitute(c, bindings), domain)

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    def __repr__(self):
        return f"StructureTensor(dim={self.dim}, domain={self.domain.name}, nnz={sum(map(len, self._rows.values()))})"

    def to_json(self) -> list:
        return [[i, j, k, scalar_to_json(c)] for i, j, k, c in self.entries()]

    @classmethod
    def from_json(cls, dim: int, domain: Domain, rows: list) -> "StructureTensor":
        return cls(dim, domain, [(int(i), int(j), int(k), scalar_from_json(c, domain)) for i, j, k, c in rows])


def make_null_filiform(n: int, domain: Domain = QQ) -> StructureTensor:
    """The dot product e_i e_j = e_{i+j} (i + j <= n)."""
    one = domain.one()
    return StructureTensor(n, domain, [(i, j, i + j, one) for i in range(1, n) for j in range(1, n - i + 1)])


def product(t: StructureTensor, x, y) -> list:
    """Product of two coordinate vectors (length-n sequences)."""
    n = t.dim
    if len(x) != n or len(y) != n:
        raise DimensionMismatch(f"vectors must have length {n}")
    out = [t.domain.zero()] * n
    for (i, j), r in t.rows.items():
        a, b = x[i - 1], y[j - 1]
        if a and b:
            ab = a * b
            for k, c in r.items():
                out[k - 1] = out[k - 1] + ab * c
    return out


def sparse_product(t: StructureTensor, x: Mapping, y: Mapping) -> dict:
    """Product of sparse vectors ``{index: coeff}``; zero entries dropped."""
    out: dict = {}
    rows = t.rows
    for i, a in x.items():
        for j, b in y.items():
            r = rows.get((i, j))
            if r:
                ab = a * b
                for k, c in r.items():
                    out[k] = out[k] + ab * c if k in out else ab * c
    return {k: c for k, c in out.items() if c}


class IdentityKind(str, enum.Enum):
    ASSOCIATIVITY = "associativity"
    COMPATIBLE = "compatible"
    ID_MATCHING = "id_matching"
    TWELVE_MATCHING = "twelve_matching"
    INTERCHANGEABLE = "interchangeable"
    TOTALLY_COMPATIBLE = "totally_compatible"

    @classmethod
    def parse(cls, s) -> "IdentityKind":
        if isinstance(s, cls):
            return s
        key = str(s).strip().lower().replace("-", "_")
        aliases = {"12_matching": "twelve_matching", "id": "id_matching", "twelve": "twelve_matching"}
        return cls(aliases.get(key, key))


# Terms of a triple (a, b, c), named by the products they use.
#   "i"  = (a.b)*c     "ii" = (a*b).c     "iii" = a.(b*c)     "iv" = a*(b.c)
_EQUATIONS = {
    IdentityKind.ASSOCIATIVITY: [
        ("(a.b).c = a.(b.c)", ("dd_l",), ("dd_r",)),
        ("(a*b)*c = a*(b*c)", ("ss_l",), ("ss_r",)),
    ],
    IdentityKind.COMPATIBLE: [("(a.b)*c + (a*b).c = a.(b*c) + a*(b.c)", ("i", "ii"), ("iii", "iv"))],
    IdentityKind.ID_MATCHING: [
        ("(a.b)*c = a.(b*c)", ("i",), ("iii",)),
        ("(a*b).c = a*(b.c)", ("ii",), ("iv",)),
    ],
    IdentityKind.TWELVE_MATCHING: [
        ("(a.b)*c = a*(b.c)", ("i",), ("iv",)),
        ("(a*b).c = a.(b*c)", ("ii",), ("iii",)),
    ],
    IdentityKind.INTERCHANGEABLE: [
        ("(a.b)*c = (a*b).c", ("i",), ("ii",)),
        ("a.(b*c) = a*(b.c)", ("iii",), ("iv",)),
    ],
    IdentityKind.TOTALLY_COMPATIBLE: [
        ("(a.b)*c = (a*b).c", ("i",), ("ii",)),
        ("(a.b)*c = a.(b*c)", ("i",), ("iii",)),
        ("(a.b)*c = a*(b.c)", ("i",), ("iv",)),
    ],
}


def _left(P: StructureTensor, Q: StructureTensor) -> dict:
    """(e_i P e_j) Q e_k for all triples, sparse."""
    n = P.dim
    out: dict = {}
    qrows = Q.rows
    for (i, j), r in P.rows.items():
        for m, c in r.items():
            for k in range(1, n + 1):
                qr = qrows.get((m, k))
                if qr:
                    acc = out.setdefault((i, j, k), {})
                    for l, d in qr.items():
                        acc[l] = acc[l] + c * d if l in acc else c * d
    return out


def _right(P: StructureTensor, Q: StructureTensor) -> dict:
    """e_i P (e_j Q e_k) for all triples, sparse."""
    n = P.dim
    out: dict = {}
    prows = P.rows
    for (j, k), r in Q.rows.items():
        for m, c in r.items():
            for i in range(1, n + 1):
                pr = prows.get((i, m))
                if pr:
                    acc = out.setdefault((i, j, k), {})
                    for l, d in pr.items():
                        acc[l] = acc[l] + c * d if l in acc else c * d
    return out


@dataclass(frozen=True, eq=False)
class BiAlgebra:
    """A pair of products (dot, star) on one space."""

    dot: StructureTensor
    star: StructureTensor
    _terms: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dot.dim != self.star.dim:
            raise DimensionMismatch(f"dot has dim {self.dot.dim}, star has dim {self.star.dim}")

    @property
    def dim(self) -> int:
        return self.dot.dim

    @property
    def domain(self) -> Domain:
        return self.star.domain

    def __eq__(self, other):
        if not isinstance(other, BiAlgebra):
            return NotImplemented
        return self.dot == other.dot and self.star == other.star

    __hash__ = None

    def term(self, name: str) -> dict:
        if name not in self._terms:
            d, s = self.dot, self.star
            fn = {
                "i": lambda: _left(d, s),
                "ii": lambda: _left(s, d),
                "iii": lambda: _right(d, s),
                "iv": lambda: _right(s, d),
                "dd_l": lambda: _left(d, d),
                "dd_r": lambda: _right(d, d),
                "ss_l": lambda: _left(s, s),
                "ss_r": lambda: _right(s, s),
            }[name]
            self._terms[name] = fn()
        return self._terms[name]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "domain": self.domain.name,
            "dot": self.dot.to_json(),
            "star": self.star.to_json(),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "BiAlgebra":
        n = int(obj["dim"])
        dom = parse_domain(obj.get("domain", "q"))
        dot = StructureTensor.from_json(n, dom, obj["dot"]) if "dot" in obj else make_null_filiform(n, dom)
        return cls(dot, StructureTensor.from_json(n, dom, obj["star"]))


@dataclass(frozen=True)
class Witness:
    triple: tuple
    equation: str
    lhs: list
    rhs: list

    def to_json(self) -> dict:
        return {
            "triple": list(self.triple),
            "equation": self.equation,
            "lhs": [scalar_to_json(c) for c in self.lhs],
            "rhs": [scalar_to_json(c) for c in self.rhs],
        }


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    kind: IdentityKind
    witness: Witness | None = None
    residuals: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.residuals:
            out["residuals"] = [
                {"equation": eq, "triple": list(t), "residual": {str(k): scalar_to_json(c) for k, c in sorted(r.items())}}
                for (eq, t), r in self.residuals.items()
            ]
        return out


def _sum_vecs(vecs) -> dict:
    out: dict = {}
    for v in vecs:
        for k, c in v.items():
            out[k] = out[k] + c if k in out else c
    return {k: c for k, c in out.items() if c}


def _dense(v: Mapping, n: int, zero) -> list:
    return [v.get(k, zero) for k in range(1, n + 1)]


def check_identity(alg: BiAlgebra, kind, *, all_residuals: bool = False) -> CheckResult:
    """Test one identity on every basis triple.

    Triples are scanned in lexicographic order, so the witness of a failure is
    the least failing triple.  With ``all_residuals`` every nonzero residual
    (lhs - rhs) is collected instead of stopping at the first failure; this is
    the useful mode for symbolic structure constants.
    """
    kind = IdentityKind.parse(kind)
    n = alg.dim
    eqs = [(name, [alg.term(t) for t in lhs], [alg.term(t) for t in rhs]) for name, lhs, rhs in _EQUATIONS[kind]]
    keys = sorted(set().union(*(t.keys() for _, l, r in eqs for t in (*l, *r))))
    zero = alg.domain.zero()
    witness = None
    residuals: dict = {}
    for triple in keys:
        for name, lhs, rhs in eqs:
            lv = _sum_vecs(t.get(triple, {}) for t in lhs)
            rv = _sum_vecs(t.get(triple, {}) for t in rhs)
            if lv == rv:
                continue
            diff = _sum_vecs([lv, {k: -c for k, c in rv.items()}])
            if not diff:
                continue
            if witness is None:
                witness = Witness(triple, name, _dense(lv, n, zero), _dense(rv, n, zero))
            if not all_residuals:
                return CheckResult(False, kind, witness)
            residuals[(name, triple)] = diff
    return CheckResult(witness is None, kind, witness, residuals)


def quotient_by_last(alg: BiAlgebra) -> BiAlgebra:
    """Pass to the quotient by span(e_n).

    e_n must annihilate both products on either side, which makes span(e_n)
    a central ideal.
    """
    n = alg.dim
    if n < 2:
        raise DimensionMismatch("cannot take a quotient of a 1-dimensional algebra")
    out = []
    for name, t in (("dot", alg.dot), ("star", alg.star)):
        for (i, j), r in sorted(t.rows.items()):
            if (i == n or j == n) and r:
                k = min(r)
                raise NotCentral(f"{name}: e_{i} e_{j} has e_{k} coefficient {r[k]}")
        rows = {(i, j): {k: c for k, c in r.items() if k < n} for (i, j), r in t.rows.items()}
        out.append(StructureTensor._from_rows(n - 1, t.domain, rows))
    return BiAlgebra(*out)
