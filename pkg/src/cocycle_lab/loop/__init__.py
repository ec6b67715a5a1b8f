"""Numerical engine for cocycles on families of SU(2)-valued maps.

Everything here works on sampled grids: disk and cylinder map families
carry exact analytic partials, quadrature is midpoint in the radial and
height directions and trapezoid in the periodic one, and every reduction
is a fixed-shape pairwise tree so results do not depend on evaluation
order.
"""

from cocycle_lab.loop.quat import (
    AlgebraElement,
    AntipodeError,
    SU2Element,
    qconj,
    qexp,
    qlog,
    qmul,
    qnorm,
    to_matrix,
    trace_pair,
    triple_product_trace,
)
from cocycle_lab.loop.grids import (
    MIN_RESOLUTION,
    GridSpec,
    circle_gauss,
    cylinder_nodes,
    disk_nodes,
    integrate,
    tree_sum,
)
from cocycle_lab.loop.families import (
    AlgebraField,
    DomainError,
    FieldAtom,
    MapFamily,
    RelativeError,
    ScalarField,
    builtin_families,
    conjugate,
    constant,
    exp_map,
    family_from_dict,
    inverse,
    lift,
    load_family,
    product,
    random_algebra_field,
    reference_algebra_pair,
    relative_defect,
    suspension_generator,
    t_reparam,
    top_slice,
)
from cocycle_lab.loop.cocycles import (
    CentralElement,
    CocycleValue,
    change_representative,
    coboundary_relation_check,
    conjugation_invariance_check,
    delta_C,
    eq1_check,
    infinitesimal_limit_check,
    kac_moody_product,
    lie_cocycle,
    maurer_cartan_defect,
    mickelsson_C,
    representative_audit,
    wzw_Lambda,
)
from cocycle_lab.loop.diffeo import (
    AnalyticLift,
    DiffeoLift,
    MonotonicityError,
    bott_virasoro,
    compose_lifts,
    delta_bott_virasoro,
    delta_chi_residual,
    diffeo_cover_cocycle,
    ell_chain_rule_defect,
    shift_lift,
)

__all__ = [
    "AlgebraElement",
    "AlgebraField",
    "AnalyticLift",
    "AntipodeError",
    "CentralElement",
    "CocycleValue",
    "DiffeoLift",
    "DomainError",
    "FieldAtom",
    "GridSpec",
    "MIN_RESOLUTION",
    "MapFamily",
    "MonotonicityError",
    "RelativeError",
    "SU2Element",
    "ScalarField",
    "bott_virasoro",
    "builtin_families",
    "change_representative",
    "circle_gauss",
    "coboundary_relation_check",
    "compose_lifts",
    "conjugate",
    "conjugation_invariance_check",
    "constant",
    "cylinder_nodes",
    "delta_C",
    "delta_bott_virasoro",
    "delta_chi_residual",
    "diffeo_cover_cocycle",
    "disk_nodes",
    "ell_chain_rule_defect",
    "eq1_check",
    "exp_map",
    "family_from_dict",
    "infinitesimal_limit_check",
    "integrate",
    "inverse",
    "kac_moody_product",
    "lie_cocycle",
    "lift",
    "load_family",
    "maurer_cartan_defect",
    "mickelsson_C",
    "product",
    "qconj",
    "qexp",
    "qlog",
    "qmul",
    "qnorm",
    "random_algebra_field",
    "reference_algebra_pair",
    "relative_defect",
    "representative_audit",
    "shift_lift",
    "suspension_generator",
    "t_reparam",
    "to_matrix",
    "top_slice",
    "trace_pair",
    "tree_sum",
    "triple_product_trace",
    "wzw_Lambda",
]
