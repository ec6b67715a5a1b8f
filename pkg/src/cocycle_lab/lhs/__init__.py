"""Filtration, spectral-sequence pages, and the five/seven-term sequences."""

from cocycle_lab.lhs.filtration import (
    FilteredCochain,
    filtration_level,
    filtration_membership,
    normal_count,
    support_mask,
)
from cocycle_lab.lhs.pages import (
    ComparisonError,
    DegreeCapError,
    SpectralPage,
    compare_E1_E2,
    compute_page,
    differential,
    infinity_report,
    z_generators,
)
from cocycle_lab.lhs.action import (
    class_action_module,
    invariant_classes,
    restricted_module,
)
from cocycle_lab.lhs.maps import (
    InternalConsistencyError,
    inflation,
    invariant_submodule,
    phi_11,
    restrict_cochain,
    restriction,
    rho,
    shuffle_transform,
    transgression_d2,
)
from cocycle_lab.lhs.seven_term import Term, seven_term_report

__all__ = [
    "FilteredCochain",
    "filtration_level",
    "filtration_membership",
    "normal_count",
    "support_mask",
    "ComparisonError",
    "DegreeCapError",
    "SpectralPage",
    "compare_E1_E2",
    "compute_page",
    "differential",
    "infinity_report",
    "z_generators",
    "class_action_module",
    "invariant_classes",
    "restricted_module",
    "InternalConsistencyError",
    "inflation",
    "invariant_submodule",
    "phi_11",
    "restrict_cochain",
    "restriction",
    "rho",
    "shuffle_transform",
    "transgression_d2",
    "Term",
    "seven_term_report",
]
