"""Matching products on null-filiform associative algebras."""
from .errors import (
    NullFiliformError,
    DomainMismatch,
    DivisionByZero,
    NonInvertible,
    SingularCoefficient,
    DimensionMismatch,
    NotCentral,
    NonUnit,
    SingularMap,
    IndexOutOfRange,
    InconsistentSeed,
    UnrecognizedFamily,
    InvalidIndices,
    SearchSpaceTooLarge,
)
from .scalars import QQ, GF, Fp, Poly, RatFunc, LinearEquation, parse_domain, ring_ops, solve_affine, substitute
from .tensor import BiAlgebra, IdentityKind, StructureTensor, check_identity, make_null_filiform, product, quotient_by_last
from .automorphism import (
    AutoParams,
    IdParams,
    TwelveParams,
    build_automorphism,
    comp_sum,
    compose,
    invert_auto,
    transform_12_params,
    transform_id_params,
    transport,
)

__all__ = [
    "QQ", "GF", "Fp", "Poly", "RatFunc", "LinearEquation", "parse_domain", "ring_ops", "solve_affine", "substitute",
    "BiAlgebra", "IdentityKind", "StructureTensor", "check_identity", "make_null_filiform", "product",
    "quotient_by_last", "AutoParams", "IdParams", "TwelveParams", "build_automorphism", "comp_sum", "compose",
    "invert_auto", "transform_12_params", "transform_id_params", "transport",
]
__all__ += [
    "NullFiliformError",
    "DomainMismatch",
    "DivisionByZero",
    "NonInvertible",
    "SingularCoefficient",
    "DimensionMismatch",
    "NotCentral",
    "NonUnit",
    "SingularMap",
    "IndexOutOfRange",
    "InconsistentSeed",
    "UnrecognizedFamily",
    "InvalidIndices",
    "SearchSpaceTooLarge",
]

__version__ = "0.1.0"
