"""Automorphisms of the null-filiform algebra and their action on star products.

An automorphism is fixed by the image of e_1, ``phi(e_1) = sum_k A_k e_k`` with
A_1 invertible.  Thinking of e_i as t**i, phi substitutes t -> a(t) = sum A_k t**k,
so ``phi(e_i) = a(t)**i`` and its coordinates are the composition sums
``G_m^(i) = [t**m] a(t)**i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NonUnit, SingularMap
from .scalars import domain_of, scalar_from_json, scalar_to_json
from .tensor import StructureTensor, sparse_product


def _check_seq(name, xs):
    return tuple(Fraction(x) if isinstance(x, int) and not isinstance(x, bool) else x for x in xs)


@dataclass(frozen=True)
class AutoParams:
    """Image of e_1 under an automorphism: ``A = (A_1, ..., A_n)``."""

    A: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", _check_seq("A", self.A))
        if not self.A:
            raise ValueError("AutoParams needs at least A_1")
        if not self.A[0]:
            raise NonUnit("A_1 must be invertible")

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, n: int, one=Fraction(1)) -> "AutoParams":
        zero = one * 0
        return cls((one,) + (zero,) * (n - 1))

    def to_json(self) -> dict:
        return {"A": [scalar_to_json(a) for a in self.A]}

    @classmethod
    def from_json(cls, obj, domain=None) -> "AutoParams":
        return cls(tuple(scalar_from_json(a, domain) for a in obj["A"]))


@dataclass(frozen=True)
class IdParams:
    """Parameters alpha_1..alpha_n of the id-matching family."""

    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_seq("alpha", self.alpha))

    @property
    def n(self) -> int:
        return len(self.alpha)

    def to_json(self) -> dict:
        return {"kind": "id", "alpha": [scalar_to_json(a) for a in self.alpha]}


@dataclass(frozen=True)
class TwelveParams:
    """Parameters of the (12)-matching family in dimension n.

    ``alpha`` has n - 1 entries and ``beta`` has n - 1 entries; beta_n is 0.
    """

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_seq("alpha", self.alpha))
        object.__setattr__(self, "beta", _check_seq("beta", self.beta))
        if len(self.alpha) != len(self.beta):
            raise DimensionMismatch("alpha and beta must both have n - 1 entries")

    @property
    def n(self) -> int:
        return len(self.alpha) + 1

    def to_json(self) -> dict:
        return {
            "kind": "twelve",
            "alpha": [scalar_to_json(a) for a in self.alpha],
            "beta": [scalar_to_json(b) for b in self.beta],
        }


def params_from_json(obj, domain=None):
    kind = obj.get("kind", "id")
    alpha = tuple(scalar_from_json(a, domain) for a in obj["alpha"])
    if kind == "id":
        return IdParams(alpha)
    if kind == "twelve":
        return TwelveParams(alpha, tuple(scalar_from_json(b, domain) for b in obj["beta"]))
    raise ValueError(f"unknown parameter kind {kind!r}")


def series_powers(A: Sequence, n: int) -> list:
    """``P[i][m] = [t**m] a(t)**i`` for 0 <= i, m <= n (a truncated at degree n)."""
    A = list(A)
    zero = A[0] * 0
    a = [zero] + A[:n] + [zero] * max(0, n - len(A))
    P = [[zero] * (n + 1) for _ in range(n + 1)]
    P[0][0] = zero + 1
    for i in range(1, n + 1):
        prev = P[i - 1]
        cur = P[i]
        for m in range(i, n + 1):
            acc = zero
            for k in range(1, m - i + 2):
                if a[k] and prev[m - k]:
                    acc = acc + a[k] * prev[m - k]
            cur[m] = acc
    return P


def comp_sum(A: Sequence, i: int, m: int):
    """Sum over ordered compositions m = k_1 + ... + k_i of A_{k_1} ... A_{k_i}."""
    if i < 1 or m < 1:
        raise ValueError("indices are 1-based")
    if m < i:
        return A[0] * 0
    return series_powers(A, m)[i][m]


def build_automorphism(params: AutoParams | Sequence, n: int | None = None) -> np.ndarray:
    """Matrix of phi: column i (0-based i-1) holds the coordinates of phi(e_i)."""
    A = params.A if isinstance(params, AutoParams) else tuple(params)
    n = len(A) if n is None else n
    if len(A) != n:
        raise DimensionMismatch(f"{len(A)} parameters for dimension {n}")
    P = series_powers(A, n)
    M = np.empty((n, n), dtype=object)
    for t in range(n):
        for i in range(n):
            M[t, i] = P[i + 1][t + 1]
    return M


def invert_matrix(M: np.ndarray) -> np.ndarray:
    """Exact inverse by Gauss-Jordan elimination over a field."""
    n = M.shape[0]
    zero = M[0, 0] * 0
    one = zero + 1
    aug = [[M[i, j] for j in range(n)] + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMap("map is not invertible")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = one / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = aug[i][n + j]
    return out


def _apply(M: np.ndarray, v: dict) -> dict:
    out: dict = {}
    n = M.shape[0]
    for j, c in v.items():
        for i in range(n):
            m = M[i, j - 1]
            if m:
                out[i + 1] = out[i + 1] + m * c if i + 1 in out else m * c
    return {k: c for k, c in out.items() if c}


def transport(star: StructureTensor, phi) -> StructureTensor:
    """The product (x, y) -> phi^{-1}(phi(x) * phi(y))."""
    M = build_automorphism(phi) if isinstance(phi, AutoParams) else np.asarray(phi, dtype=object)
    n = star.dim
    if M.shape != (n, n):
        raise DimensionMismatch(f"map of shape {M.shape} on dimension {n}")
    Minv = invert_matrix(M)
    cols = [{i + 1: M[i, j] for i in range(n) if M[i, j]} for j in range(n)]
    rows = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            v = sparse_product(star, cols[i - 1], cols[j - 1])
            if v:
                rows[(i, j)] = _apply(Minv, v)
    return StructureTensor._from_rows(n, star.domain, rows)


def compose(first: AutoParams, then: AutoParams) -> AutoParams:
    """Parameters C with transform(transform(p, first), then) == transform(p, C).

    Since transport by phi_A then phi_B equals transport by phi_A o phi_B,
    C is read off the first column of M_first @ M_then.
    """
    if first.n != then.n:
        raise DimensionMismatch("automorphisms of different dimensions")
    P = series_powers(first.A, first.n)
    B = then.A
    n = first.n
    zero = first.A[0] * 0
    C = []
    for m in range(1, n + 1):
        acc = zero
        for k in range(1, m + 1):
            if B[k - 1] and P[k][m]:
                acc = acc + B[k - 1] * P[k][m]
        C.append(acc)
    return AutoParams(tuple(C))


def invert_auto(params: AutoParams) -> AutoParams:
    """Parameters of phi^{-1}."""
    Minv = invert_matrix(build_automorphism(params))
    return AutoParams(tuple(Minv[:, 0]))


def _id_alpha(alpha, A, P, n):
    """Solve the lower-triangular relations for the transformed alpha_1..alpha_n."""
    zero = A[0] * 0
    out = []
    for t in range(1, n + 1):
        rhs = zero
        for i in range(1, t + 1):
            if not A[i - 1]:
                continue
            for j in range(1, t - i + 2):
                a = alpha[t - i - j + 1]
                if A[j - 1] and a:
                    rhs = rhs + A[i - 1] * A[j - 1] * a
        for i in range(1, t):
            if P[i][t] and out[i - 1]:
                rhs = rhs - P[i][t] * out[i - 1]
        out.append(rhs / P[t][t])
    return out


def transform_id_params(p: IdParams, A: AutoParams) -> IdParams:
    """Parameters of transport(Id(p), phi_A), which is again id-matching."""
    n = p.n
    if A.n != n:
        raise DimensionMismatch(f"automorphism of dimension {A.n} on parameters of dimension {n}")
    P = series_powers(A.A, n)
    return IdParams(tuple(_id_alpha(p.alpha, A.A, P, n)))


def transform_12_params(p: TwelveParams, A: AutoParams) -> TwelveParams:
    """Parameters of transport((12)(p), phi_A)."""
    n = p.n
    if A.n != n:
        raise DimensionMismatch(f"automorphism of dimension {A.n} on parameters of dimension {n}")
    a = A.A
    P = series_powers(a, n)
    zero = a[0] * 0
    alpha2 = _id_alpha(p.alpha, a, P, n - 1)
    beta = p.beta
    lead = P[n][n]
    beta2 = []
    for i in range(1, n):
        rhs = zero
        for j in range(1, n - i + 1):
            if not a[j - 1]:
                continue
            for m in range(i, n - j + 1):
                b = beta[j + m - 2]
                if b and P[i][m]:
                    rhs = rhs + a[j - 1] * P[i][m] * b
        for m in range(i, n):
            al = alpha2[m - i]
            if al and P[m][n]:
                rhs = rhs - al * P[m][n]
        beta2.append(rhs / lead)
    return TwelveParams(tuple(alpha2), tuple(beta2))


def infer_domain(values):
    for v in values:
        if not isinstance(v, int):
            return domain_of(v)
    return domain_of(Fraction(0))
