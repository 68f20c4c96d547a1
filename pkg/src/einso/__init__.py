"""Exact computer algebra for invariant Einstein metrics on the special
orthogonal groups, built from three-block decompositions of so(n)."""

from .exact import MonomialOrder, MultiPoly, PolyRing, Rational, StructuralError, rat
from .groebner import (
    BasisCache,
    Budget,
    BudgetExceededError,
    GroebnerBasis,
    Ideal,
    buchberger,
    eliminate,
    normal_form,
    reduced_lex_basis,
    s_polynomial,
    saturate,
)
from .liealg import BasisElement, Decomposition, TripletTable, bracket, module_of
from .realroots import IsolatingInterval, count_roots, isolate_positive_roots, refine, sturm_sequence
from .ricci import RicciSystem, ricci_closed_form, ricci_generic, ricci_offdiag_check
from .einstein import (
    EinsteinSystem,
    SolutionRecord,
    build_system,
    classify,
    count_table,
    dedup_isometry,
    scale_to_unit,
    solve_exact,
    solve_numeric,
)

__version__ = "0.1.0"
