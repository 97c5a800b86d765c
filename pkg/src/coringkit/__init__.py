"""Exact computations with corings, comodules and entwining structures.

Scalars live in Q (Fractions) or F_p (int64 residues).  Every decision
procedure returns a witness that can be re-checked independently.
"""
from .algebra import Algebra, AlgebraMorphism, Bimodule, validate_algebra, validate_bimodule
from .coalgebra import Coalgebra, CoalgebraComodule, CoalgebraMorphism, cotensor, validate_coalgebra
from .coring import (
    Coring,
    CoringComodule,
    canonical_coring,
    coinvariants,
    dual_ring,
    find_grouplikes,
    validate_comodule,
    validate_coring,
)
from .cring import (
    CRing,
    check_dual_forgetful_separable,
    check_dual_induction_separable,
    cring_from_algebra,
    cring_from_entwining,
    cring_from_surjection,
    invariants_coideal,
    validate_cring,
)
from .entwining import Entwining, coring_from_entwining, coring_from_weak, validate_entwining, validate_weak_entwining
from .errors import CoringKitError, InternalConsistencyError, MalformedInputError, PreconditionError
from .frobenius import check_frobenius
from .galois import equivalence_check, galois_check
from .instance import parse_instance
from .linalg import GF, QQ, FieldSpec
from .separability import check_forgetful_separable, check_induction_separable, maschke_split

__version__ = "0.1.0"
