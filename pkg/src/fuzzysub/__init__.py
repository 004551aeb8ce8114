"""Exact counts of distinct fuzzy subgroups via subgroup lattices."""

__version__ = "0.1.0"

from .chains import ChainCount, Method, count_chains_dp, count_chains_ie, fuzzy_subgroup_count
from .errors import (
    CapacityError,
    FuzzySubError,
    InternalError,
    InvalidParameterError,
    MethodMismatchError,
    SpecCapacityError,
    SpecError,
)
from .formulas import FormulaFamily, FormulaResult, Validity, cross_check, eval_formula, list_families
from .groups import Group, build_cyclic, build_dihedral, direct_product, element_order
from .groupspec import GroupExpr, canonicalize, group_from_spec, parse_spec, realize
from .lattice import (
    SubgroupLattice,
    SubgroupSet,
    closure,
    enumerate_subgroups,
    intersect,
    maximal_subgroups,
)

__all__ = [
    "CapacityError",
    "ChainCount",
    "FormulaFamily",
    "FormulaResult",
    "FuzzySubError",
    "Group",
    "GroupExpr",
    "InternalError",
    "InvalidParameterError",
    "Method",
    "MethodMismatchError",
    "SpecCapacityError",
    "SpecError",
    "SubgroupLattice",
    "SubgroupSet",
    "Validity",
    "build_cyclic",
    "build_dihedral",
    "canonicalize",
    "closure",
    "count_chains_dp",
    "count_chains_ie",
    "cross_check",
    "direct_product",
    "element_order",
    "enumerate_subgroups",
    "eval_formula",
    "fuzzy_subgroup_count",
    "group_from_spec",
    "intersect",
    "list_families",
    "maximal_subgroups",
    "parse_spec",
    "realize",
]
