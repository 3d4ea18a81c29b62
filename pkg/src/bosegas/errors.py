"""Exception types shared across the package.

Domain violations (bad parameters, values outside a documented range) raise
the standard ``ValueError``.  The classes below cover the two failure modes
that carry extra numerical payload: an iteration that ran out of budget and
an adaptive quadrature that could not reach the requested tolerance.
"""

from __future__ import annotations

__all__ = ["ConvergenceError", "QuadratureError"]


class ConvergenceError(RuntimeError):
    """An iterative scheme exhausted its budget before reaching tolerance.

    Attributes
    ----------
    estimate : float
        Best value available when iteration stopped (NaN if none).
    achieved : float
        Estimated relative error of ``estimate`` (NaN if unknown).
    """

    def __init__(self, message: str, estimate: float = float("nan"),
                 achieved: float = float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.achieved = achieved


class QuadratureError(ConvergenceError):
    """Adaptive quadrature hit its subdivision cap above tolerance.

    Carries the last integral ``estimate`` and the ``achieved`` relative
    error bound so callers can decide whether the partial result is usable.
    """
