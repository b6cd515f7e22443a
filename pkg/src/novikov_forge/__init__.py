"""Exact localization of based chain complexes and the numbers it yields.

The package computes with finitely generated free complexes over Laurent
group rings of free abelian groups: pushing them into truncated series
rings, a Laurent PID, scalar and function-field specializations; collapsing
paired generators with verified chain equivalences; and reading off free
ranks, torsion counts, jump loci, and unit verdicts.  All arithmetic is
exact; nothing here floats.
"""

from .chain_complex import (
    BasedChainComplex,
    BlockPartition,
    CollapseResult,
    ValidationReport,
    betti_numbers,
    collapse,
    verify_collapse_witnesses,
)
from .cut_system import (
    CascadeResult,
    CutSystem,
    GeneratorId,
    InternalCell,
    StrataCell,
    cascade_collapse,
)
from .dirichlet import (
    LineBundleMonodromy,
    MinimalPolynomialCandidate,
    is_algebraic_integer,
    is_dirichlet_unit,
    verify_xi_algebraic_integer_witness,
    verify_xi_dirichlet_unit_witness,
)
from .errors import (
    ConstructionError,
    DimensionError,
    InputError,
    InvariantViolationError,
    NotInvertibleError,
    NovikovForgeError,
    PreconditionError,
    RepresentationError,
    ShapeError,
    SizeCapError,
    StructureError,
    UndefinedInputError,
)
from .group_ring import (
    CohomologyClass,
    GroupRingElement,
    is_xi_negative,
    max_weight,
    xi_degree_and_top,
)
from .invariants import (
    InequalityReport,
    JumpProfile,
    MorseTypeReport,
    NovikovNumbers,
    bundle_homology_dims,
    check_novikov_inequalities,
    euler_characteristic,
    generic_betti_and_jumps,
    is_xi_generic,
    mapping_torus,
    morse_type_inequalities,
    novikov_numbers,
    specialized_homology_dims,
)
from .matrix_engine import (
    InvariantFactorProfile,
    RingMatrix,
    exact_inverse,
    field_determinant,
    field_inverse,
    field_rank,
    group_ring_determinant,
    group_ring_inverse,
    invariant_factors_over_R,
    neumann_series_inverse,
    novikov_inverse,
    r_determinant,
    r_inverse,
    rank_over_fraction_field,
)
from .ring_tower import (
    FieldBundleDescriptor,
    FunctionField,
    GroupRing,
    MonodromyRep,
    NovikovDescriptor,
    NovikovElement,
    NovikovRing,
    PrimeField,
    RatFunc,
    RationalField,
    RationalFieldDescriptor,
    RationalFnR,
    RationalFnRDescriptor,
    RationalFunctionRing,
    RBundleDescriptor,
    RepresentationDescriptor,
    ScalarBundleDescriptor,
    ScalarDescriptor,
    rho_R,
    rho_novikov,
    rho_scalar,
    standard_basis,
)

__all__ = [name for name in dir() if not name.startswith("_")]
