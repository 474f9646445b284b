"""Least-squares recovery of the value and cost weights."""

import collections
import logging

import numpy as np

import scipy.linalg

from oirl.irl.exceptions import RankConditionError, DegenerateRhsError


logger = logging.getLogger(__name__.split(".")[-1])

RANK_RTOL = 1e-8
"""Singular values of the stacked regressor at or below this fraction of the
largest one are treated as zero."""


class WeightEstimate(collections.namedtuple(
        "WeightEstimate", "W_V W_Q W_R_minus r1")):
    """Value and cost weights with the fixed first control weight.

    Parameters
    ----------
    W_V : (float, ...)
        Value-feature weights.
    W_Q : (float, ...)
        State-cost weights.
    W_R_minus : (float, ...)
        Control-cost weights after the first.
    r1 : float
        The fixed first control weight.
    """

    def __new__(cls, W_V, W_Q, W_R_minus, r1):
        return super(WeightEstimate, cls).__new__(
            cls,
            tuple(float(w) for w in W_V),
            tuple(float(w) for w in W_Q),
            tuple(float(w) for w in W_R_minus),
            float(r1))

    @classmethod
    def from_vector(cls, vector, P, L, r1):
        """Split a ``[W_V; W_Q; W_R_minus]`` vector."""
        vector = np.asarray(vector, dtype=float)
        return cls(vector[:P], vector[P:P + L], vector[P + L:], r1)

    def as_vector(self):
        """The unknown weights ``[W_V; W_Q; W_R_minus]``."""
        return np.array(self.W_V + self.W_Q + self.W_R_minus)

    def full_vector(self):
        """All weights ``[W_V; W_Q; r1; W_R_minus]``."""
        return np.array(self.W_V + self.W_Q + (self.r1,) + self.W_R_minus)


class SolveRecord(collections.namedtuple(
        "SolveRecord", "t kappa residual_norm weights")):
    """Diagnostics of a successful weight solve.

    Parameters
    ----------
    t : float or None
        Time of the solve, when known.
    kappa : float
        Condition number of the stack's Gram matrix.
    residual_norm : float
        Norm of the least-squares residual.
    weights : :py:class:`.WeightEstimate`
    """


def ideal_weights(spec):
    """The true weights of the benchmark for its feature library.

    Parameters
    ----------
    spec : :py:class:`~oirl.dynamics.BenchmarkSpec`
    """
    return WeightEstimate(W_V=(spec.v1, spec.v2, spec.v3),
                          W_Q=spec.Q_weights,
                          W_R_minus=(),
                          r1=spec.R_weight)


def solve_weights(stack, return_diagnostics=False):
    """Recover the weights from an IRL history stack.

    Solves ``Sigma . W = -Sigma_u1`` in the least-squares sense using an
    orthogonal (QR) factorisation of the stacked regressor.

    Parameters
    ----------
    stack : :py:class:`~oirl.irl.stack.IrlStack`
    return_diagnostics : bool
        If True, return a :py:class:`.SolveRecord` instead of the bare
        estimate.

    Returns
    -------
    :py:class:`.WeightEstimate` or :py:class:`.SolveRecord`

    Raises
    ------
    DegenerateRhsError
        If the norm of the stacked right-hand side is below ``stack.xi2``.
    RankConditionError
        If the stacked regressor does not have full column rank.
    """
    Sigma, Sigma_u1 = stack.matrices()
    width = stack.width

    rhs_norm = float(np.linalg.norm(Sigma_u1))
    if rhs_norm < stack.xi2:
        raise DegenerateRhsError(rhs_norm, stack.xi2)
    if Sigma.shape[0] < width:
        raise RankConditionError(Sigma.shape[0], width)

    Q, R = scipy.linalg.qr(Sigma, mode="economic")
    singular_values = scipy.linalg.svdvals(R)
    tolerance = RANK_RTOL * singular_values[0]
    if not singular_values[-1] > tolerance:
        raise RankConditionError(int(np.sum(singular_values > tolerance)),
                                 width,
                                 float(singular_values[-1]),
                                 float(singular_values[0]))

    vector = scipy.linalg.solve_triangular(R, -np.dot(Q.T, Sigma_u1))
    estimate = WeightEstimate.from_vector(vector, stack.P, stack.L, stack.r1)

    if not return_diagnostics:
        return estimate

    residual_norm = float(np.linalg.norm(np.dot(Sigma, vector) + Sigma_u1))
    kappa = stack.condition_number()
    logger.debug("Weight solve: kappa=%g, residual=%g", kappa, residual_norm)
    return SolveRecord(None, kappa, residual_norm, estimate)
