"""Star products compatible with the null-filiform dot product.

Two families are produced from seeds:

* id-matching: ``e_i * e_j = sum_{t=i+j-1}^{n} alpha_{t-i-j+2} e_t`` for i + j <= n + 1.
* (12)-matching: ``e_i * e_j = sum_{t=i+j-1}^{n-1} alpha_{t-i-j+2} e_t + beta_{i+j-1} e_n``
  for i + j <= n + 1.  Associativity forces ``beta_n (beta_i - alpha_{n-i+1}) = 0``.

The linear systems behind each identity (with the dot fixed) are assembled
here as integer matrices, which is what the dimension counts run on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .automorphism import IdParams, TwelveParams, infer_domain
from .errors import DimensionMismatch, InconsistentSeed
from .scalars import Domain, Poly, scalar_to_json
from .tensor import IdentityKind, StructureTensor


@dataclass(frozen=True)
class IdSeed:
    alpha: tuple

    @property
    def n(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class TwelveSeed:
    """``alpha`` has n - 1 entries, ``beta`` has n entries."""

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        if len(self.beta) != len(self.alpha) + 1:
            raise DimensionMismatch("a (12)-seed needs n - 1 alphas and n betas")

    @property
    def n(self) -> int:
        return len(self.beta)


def _domain(values, domain):
    return domain if domain is not None else infer_domain(values)


def id_star(alpha, domain: Domain | None = None) -> StructureTensor:
    alpha = tuple(alpha)
    n = len(alpha)
    dom = _domain(alpha, domain)
    entries = []
    for i in range(1, n + 1):
        for j in range(1, n + 2 - i):
            for t in range(i + j - 1, n + 1):
                entries.append((i, j, t, alpha[t - i - j + 1]))
    return StructureTensor(n, dom, entries)


def twelve_star(alpha, beta, domain: Domain | None = None) -> StructureTensor:
    """Table of the (12) family; ``beta`` may have n - 1 entries (beta_n = 0) or n."""
    alpha, beta = tuple(alpha), tuple(beta)
    n = len(alpha) + 1
    dom = _domain(alpha + beta, domain)
    entries = []
    for i in range(1, n + 1):
        for j in range(1, n + 2 - i):
            for t in range(i + j - 1, n):
                entries.append((i, j, t, alpha[t - i - j + 1]))
            if i + j - 1 <= len(beta):
                entries.append((i, j, n, beta[i + j - 2]))
    return StructureTensor(n, dom, entries)


def derive_id_star(seed: IdSeed | IdParams, domain: Domain | None = None) -> StructureTensor:
    return id_star(seed.alpha, domain)


@dataclass(frozen=True)
class TwelveDerivation:
    """Outcome of expanding a (12)-seed.

    ``branch`` is ``"id"`` (the seed is id-matching), ``"twelve"`` (beta_n = 0,
    not id-matching) or ``"symbolic"`` (constraints could not be decided).
    ``boundary`` lists the i + j = n + 1 entries, which are forced rather than
    chosen freely.
    """

    branch: str
    star: StructureTensor
    constraints: tuple
    boundary: tuple
    id_params: IdParams | None = None
    twelve_params: TwelveParams | None = None

    def to_json(self) -> dict:
        out = {
            "branch": self.branch,
            "constraints": [scalar_to_json(c) for c in self.constraints],
            "boundary": [[i, j, k, scalar_to_json(c)] for i, j, k, c in self.boundary],
        }
        if self.id_params is not None:
            out["id_params"] = self.id_params.to_json()
        if self.twelve_params is not None:
            out["twelve_params"] = self.twelve_params.to_json()
        return out


def derive_12_star(seed: TwelveSeed, domain: Domain | None = None) -> TwelveDerivation:
    n = seed.n
    alpha, beta = tuple(seed.alpha), tuple(seed.beta)
    star = twelve_star(alpha, beta, domain)
    boundary = tuple((i, n + 1 - i, n, beta[n - 1]) for i in range(1, n + 1) if beta[n - 1])
    # beta_n (beta_i - alpha_{n-i+1}), i = 2..n
    defects = [beta[i - 1] - alpha[n - i] for i in range(2, n + 1)] if n >= 2 else []
    constraints = tuple(beta[n - 1] * d for d in defects)
    symbolic = any(isinstance(x, Poly) and not x.is_constant() for x in alpha + beta)
    if symbolic:
        decided_zero = all(not c for c in constraints)
        if not decided_zero:
            return TwelveDerivation("symbolic", star, constraints, boundary)
    if all(not d for d in defects):
        idp = IdParams(alpha + (beta[0],))
        return TwelveDerivation("id", star, constraints, boundary, id_params=idp)
    if not beta[n - 1]:
        return TwelveDerivation("twelve", star, constraints, boundary,
                                twelve_params=TwelveParams(alpha, beta[: n - 1]))
    raise InconsistentSeed(
        f"beta_n = {beta[n - 1]} is nonzero but beta_i != alpha_(n-i+1) for some i; "
        "the star is not associative"
    )


# ---------------------------------------------------------------------------
# linear systems over the integers


_TERMS = {
    IdentityKind.COMPATIBLE: [(("i", 1), ("ii", 1), ("iii", -1), ("iv", -1))],
    IdentityKind.ID_MATCHING: [(("i", 1), ("iii", -1)), (("ii", 1), ("iv", -1))],
    IdentityKind.TWELVE_MATCHING: [(("i", 1), ("iv", -1)), (("ii", 1), ("iii", -1))],
    IdentityKind.INTERCHANGEABLE: [(("i", 1), ("ii", -1)), (("iii", 1), ("iv", -1))],
    IdentityKind.TOTALLY_COMPATIBLE: [(("i", 1), ("ii", -1)), (("i", 1), ("iii", -1)), (("i", 1), ("iv", -1))],
}


def linear_system(n: int, kind, dot: np.ndarray | None = None) -> np.ndarray:
    """Integer matrix whose kernel is the set of stars satisfying ``kind``.

    Unknown (a, b, c) (0-based) is the star entry e_a * e_b -> e_c, at column
    ``a*n*n + b*n + c``.  Rows run over triples, output index and equation.
    """
    kind = IdentityKind.parse(kind)
    if kind not in _TERMS:
        raise ValueError(f"{kind.value} is not linear in the star")
    D = np.zeros((n, n, n), dtype=np.int64) if dot is None else np.asarray(dot, dtype=np.int64)
    if dot is None:
        for i in range(n):
            for j in range(n - i - 1):
                D[i, j, i + j + 1] = 1
    N = n * n * n
    col = lambda a, b, c: (a * n + b) * n + c
    rows = []
    for eq in _TERMS[kind]:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        row = np.zeros(N, dtype=np.int64)
                        for term, sgn in eq:
                            if term == "i":      # sum_m D[i,j,m] S[m,k,l]
                                for m in range(n):
                                    if D[i, j, m]:
                                        row[col(m, k, l)] += sgn * D[i, j, m]
                            elif term == "iii":  # sum_m S[j,k,m] D[i,m,l]
                                for m in range(n):
                                    if D[i, m, l]:
                                        row[col(j, k, m)] += sgn * D[i, m, l]
                            elif term == "ii":   # sum_m S[i,j,m] D[m,k,l]
                                for m in range(n):
                                    if D[m, k, l]:
                                        row[col(i, j, m)] += sgn * D[m, k, l]
                            else:                # sum_m D[j,k,m] S[i,m,l]
                                for m in range(n):
                                    if D[j, k, m]:
                                        row[col(i, m, l)] += sgn * D[j, k, m]
                        if row.any():
                            rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(-1, N)


def solution_space_dimension(n: int, kind, p: int) -> int:
    """Dimension over F_p of the stars satisfying a linear identity with the null-filiform dot."""
    M = linear_system(n, kind)
    return n ** 3 - kernels.rank_mod_p(M % p, p)


def kernel_basis(n: int, kind, p: int) -> np.ndarray:
    """Basis (rows) of the solution space over F_p, from the reduced row echelon form."""
    M = linear_system(n, kind) % p
    R, pivots = kernels.rref_mod_p(M, p)
    N = M.shape[1]
    piv = list(pivots)
    free = [c for c in range(N) if c not in set(piv)]
    basis = np.zeros((len(free), N), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for r, pc in enumerate(piv):
            basis[b, pc] = (-R[r, f]) % p
    return basis
