"""Free Bose gas entanglement toolkit.

Numerical building blocks (special functions, radial quadrature, bilateral
sums), thermal-field entropy reports, charged-gas condensation solvers, and
the identity-check oracles behind the test suite, plus a CLI (``bosegas``).
"""

from .errors import ConvergenceError, QuadratureError
from .specfun import AccuracyBudget, DEFAULT_BUDGET

__version__ = "0.1.0"

__all__ = [
    "AccuracyBudget",
    "ConvergenceError",
    "DEFAULT_BUDGET",
    "QuadratureError",
    "__version__",
]
