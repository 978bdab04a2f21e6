"""Stable subordinators, their inverses, and space-time fractional solutions.

Monte Carlo samplers for weighted and iterated positively-skewed stable
subordinators and isotropic stable vectors, analytic/transform-domain
solutions of the associated fractional Cauchy problems, and the statistical
machinery to cross-validate one against the other.
"""

from .errors import AccuracyError, DegenerateRootsError
from .special import bessel_k, mittag_leffler, solve_depressed_cubic

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DegenerateRootsError",
    "bessel_k",
    "mittag_leffler",
    "solve_depressed_cubic",
    "__version__",
]
