"""Quillen exact structures on quiver representations over prime fields."""
from .axioms import check_axioms, obscure_axiom_sweep
from .budget import Budget, BudgetExceeded, current_budget, use_budget
from .exactstruct import (
    ExactStructure,
    InvalidStructure,
    admissible_factorization,
    custom_structure,
    e_all,
    e_split,
    is_admissible_epic,
    is_admissible_monic,
    is_split,
)
from .intersect_sum import (
    abelian_intersection,
    abelian_sum,
    check_AI,
    check_AIS,
    check_AS,
    intersection,
    sum_subobjects,
)
from .iso_theorems import second_iso_sequence, third_iso_sequence, three_by_three_sequence
from .jordan_holder import (
    CompositionSeries,
    JHComparisonResult,
    all_composition_series,
    baumslag_compare,
    composition_factors,
    find_composition_series,
    jh_property_check,
)
from .linalg import DimensionError, Matrix, PrimeField
from .quiverrep import Quiver, RepMorphism, Representation, ShortExactSequence, direct_sum
from .simples_schur import AdmissibleSubobject, enumerate_admissible_subobjects, is_E_simple, schur
from .workspace import Workspace, WorkspaceError, load_workspace

__all__ = [name for name in dir() if not name.startswith("_")]
