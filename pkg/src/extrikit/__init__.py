"""extrikit: finite extriangulated categories from bound quiver algebras.

Build the module category, two-term complex category, or hereditary slice
of a bound quiver algebra over F_p; derive relative structures, ideal
quotients, and extension-closed subcategories; search almost split
extensions, assemble Auslander-Reiten-Serre duality, draw AR quivers, and
mutate maximal rigid objects.
"""

from .artheory import (almost_split_ending_at, almost_split_starting_at,
                       ar_quiver, ars_duality, compare_almost_split,
                       is_almost_split, rigid_and_mutation, verify_ars)
from .audit import axiom_audit
from .builders import (from_module_category, hereditary_slice,
                       n_term_category, two_term_category)
from .category import Conflation, ExtCategory, ExtClass, Morphism
from .constructions import (ideal_quotient_category, is_closed,
                            relative_category, relative_subfunctors,
                            restrict_extension_closed)
from .exactness import (et3_witness, long_exact_report, make_deflation,
                        minimal_left_approximation, minimal_right_approximation)
from .quiver import PathAlgebra, Quiver, RelationSet, build_algebra

__all__ = [
    "Quiver", "RelationSet", "PathAlgebra", "build_algebra",
    "ExtCategory", "Morphism", "ExtClass", "Conflation",
    "from_module_category", "two_term_category", "hereditary_slice",
    "n_term_category",
    "relative_subfunctors", "is_closed", "relative_category",
    "ideal_quotient_category", "restrict_extension_closed",
    "et3_witness", "long_exact_report", "make_deflation",
    "minimal_right_approximation", "minimal_left_approximation",
    "is_almost_split", "almost_split_ending_at", "almost_split_starting_at",
    "compare_almost_split", "ars_duality", "verify_ars", "ar_quiver",
    "rigid_and_mutation", "axiom_audit",
]
