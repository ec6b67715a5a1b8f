"""Exact cohomology for finite groups given by multiplication tables."""

from cocycle_lab.finite.groups import (
    FiniteGroup,
    GroupTableError,
    QuotientMap,
    cyclic,
    direct_product,
    group_from_dict,
    group_to_dict,
    klein_four,
    quaternion8,
    symmetric3,
)
from cocycle_lab.finite.modules import CyclicModule, ModuleError
from cocycle_lab.finite.cochains import Cochain, TupleIndexer, coboundary_matrix
from cocycle_lab.finite.cohomology import (
    CohomologyGroup,
    coboundary_witness,
    cohomology,
)

__all__ = [
    "FiniteGroup",
    "GroupTableError",
    "QuotientMap",
    "cyclic",
    "direct_product",
    "group_from_dict",
    "group_to_dict",
    "klein_four",
    "quaternion8",
    "symmetric3",
    "CyclicModule",
    "ModuleError",
    "Cochain",
    "TupleIndexer",
    "coboundary_matrix",
    "CohomologyGroup",
    "coboundary_witness",
    "cohomology",
]
