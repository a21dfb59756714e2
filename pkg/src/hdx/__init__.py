"""Exact-arithmetic analysis of weighted expansion for pure simplicial complexes."""

__version__ = "0.1.0"

from .cohomology import (
    INFINITE,
    cohomology_dim,
    coboundary,
    cosystole,
    expansion,
    space_basis,
)
from .core import Cochain, Complex, build_complex
from .criterion import constants, criterion_report
from .fat import admissible_eta, fat_profile, verify_seep, verify_upsilon_bound
from .generators import (
    GenSpec,
    complete,
    complete_partite,
    cycle,
    generate,
    linial_meshulam,
    load_complex,
    projective_flag,
    save_complex,
)
from .minimize import is_locally_minimal, is_minimal, locally_minimize
from .spectral import (
    lambda2,
    lambda_max,
    mixing_check,
    mixing_check_all,
    regularity,
    skeleton_alpha,
    type_graph,
)

__all__ = [
    "Cochain",
    "Complex",
    "GenSpec",
    "INFINITE",
    "__version__",
    "admissible_eta",
    "build_complex",
    "coboundary",
    "cohomology_dim",
    "complete",
    "complete_partite",
    "constants",
    "cosystole",
    "criterion_report",
    "cycle",
    "expansion",
    "fat_profile",
    "generate",
    "is_locally_minimal",
    "is_minimal",
    "lambda2",
    "lambda_max",
    "linial_meshulam",
    "load_complex",
    "locally_minimize",
    "mixing_check",
    "mixing_check_all",
    "projective_flag",
    "regularity",
    "save_complex",
    "skeleton_alpha",
    "space_basis",
    "type_graph",
    "verify_seep",
    "verify_upsilon_bound",
]
