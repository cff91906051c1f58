"""Exact censuses of matrices over finite fields.

Computes invariant factors of rectangular linear pencils x*I - B over GF(q)
via the Smith normal form, evaluates the closed-form counting formulas for
every census the pencil classification induces (similarity classes,
invariant-factor tuples, reachability ranks, characteristic-polynomial
fibers, nilpotent extendability), and verifies each formula against an
independent brute-force enumeration at desk scale.
"""

from .census import (
    CensusReport,
    centralizer_factor,
    check_q_identity,
    conjugate,
    count_char_poly_rect,
    count_char_poly_square,
    count_conjugacy_class,
    count_given_u,
    count_invariant_factors,
    count_nilpotent_extendable,
    count_reachability,
    count_with_subspace,
    exponent_profile,
    gl_order,
    invariant_factor_tuples,
    q_binomial,
)
from .gf import FieldCtx, ScalarMatrix, field_new, parse_field_spec
from .oracle import (
    DiffReport,
    EnumConfig,
    enumerate_fibers,
    enumerate_nilpotent_extendable,
    enumerate_pairs,
    enumerate_pencils,
    enumerate_subspace_census,
    verify,
)
from .polyring import Poly, factorize, irreducibles_up_to, parse_poly, poly_gcd
from .smith import (
    InvariantFactorTuple,
    PolyMatrix,
    SnfResult,
    char_poly,
    det_divisor,
    max_invariant_subspace,
    pencil_invariant_factors,
    reachability_rank,
    snf,
)

__version__ = "0.1.0"
