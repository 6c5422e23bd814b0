"""Group backends, subgroups, homomorphisms and quotients."""

from gca_lab.groups.base import Element, Group
from gca_lab.groups.finite import (
    FiniteGroup,
    build_cayley,
    build_cyclic,
    build_dihedral,
    build_direct_product,
    build_permutation_group,
    build_quaternion,
    build_symmetric,
    group_catalog,
)
from gca_lab.groups.free_abelian import FreeAbelianGroup, build_free_abelian
from gca_lab.groups.homomorphisms import (
    Homomorphism,
    enumerate_endomorphisms,
    enumerate_homomorphisms,
    is_fully_invariant,
)
from gca_lab.groups.quotients import QuotientGroup, induced_endomorphism, quotient_group
from gca_lab.groups.subgroups import Subgroup, all_subgroups, derived_subgroup, normal_subgroups

__all__ = [
    "Element",
    "FiniteGroup",
    "FreeAbelianGroup",
    "Group",
    "Homomorphism",
    "QuotientGroup",
    "Subgroup",
    "all_subgroups",
    "build_cayley",
    "build_cyclic",
    "build_dihedral",
    "build_direct_product",
    "build_free_abelian",
    "build_permutation_group",
    "build_quaternion",
    "build_symmetric",
    "derived_subgroup",
    "enumerate_endomorphisms",
    "enumerate_homomorphisms",
    "group_catalog",
    "induced_endomorphism",
    "is_fully_invariant",
    "normal_subgroups",
    "quotient_group",
]
