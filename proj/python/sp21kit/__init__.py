"""Quaternionic matrices preserving an indefinite Hermitian form.

Quaternions are numpy arrays of shape (4,) ordered (w, x, y, z); matrices are
arrays of shape (3, 3, 4).
"""

from ._core import (
    Sp21Error,
    conj,
    decide,
    falsify_unitarity,
    herm_inner,
    inv,
    is_sp21,
    make_fixture,
    matmul,
    mul,
    numeric_inverse,
    pair_case,
    parse_group,
    random_sp21,
    serialize_group,
    sp_inverse,
    structure_identities,
    trace,
    trace_audit,
)

__all__ = [
    "Sp21Error",
    "conj",
    "decide",
    "falsify_unitarity",
    "herm_inner",
    "inv",
    "is_sp21",
    "make_fixture",
    "matmul",
    "mul",
    "numeric_inverse",
    "pair_case",
    "parse_group",
    "random_sp21",
    "serialize_group",
    "sp_inverse",
    "structure_identities",
    "trace",
    "trace_audit",
]
