"""Class-field invariants of abelian branched coverings of integral
homology 3-spheres, computed exactly from linking-matrix data.

Everything is re-exported from the compiled extension; matrices are plain
lists of lists of ints, group elements are lists of ints, and ideles are
lists of (q, p) pairs.
"""

from ._core import (
    CoveringSpec,
    Error,
    FinGenAbGroup,
    LinkContext,
    __version__,
    abelian_group_from_moduli,
    admissible_closure,
    branch_knots,
    covering_from_moduli,
    deck_group,
    element_order,
    enumerate_subgroups,
    group_from_relations,
    idele_class_quotient,
    is_completely_decomposed,
    is_principal,
    is_unramified,
    kernel_basis,
    knot_behavior,
    lattice_contains,
    lattice_membership_basis,
    load_link_file,
    local_invariants,
    longitude_class,
    longitude_divisor,
    meridian_class,
    norm_lattice,
    parse_link_json,
    principal_from_longitudes,
    reciprocity,
    selftest_json,
    smith_normal_form,
    split_unit_principal,
    splitting_data,
    splitting_degree_via_linking,
    standard_covering,
    subgroup_order,
    unit_principal_cokernel,
    unramified_cover_of_degree,
    validate,
    verify_efr,
    verify_reciprocity_iso,
)

__all__ = [name for name in dir() if not name.startswith("_")]
