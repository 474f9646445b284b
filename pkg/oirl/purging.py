"""Gated weight updates, purging of stale IRL data and demonstrator queries.

Rows in the IRL history stack are built with the dynamics estimate in force
when they were captured. Once the estimate has improved those rows are stale,
so the stack is emptied and refilled with rows built from the better estimate.
Two rules decide when to purge: a metric rule comparing the current parameter
quality metric against that of the stored rows, and a simpler time rule
purging at fixed intervals.
"""

import collections
import logging

from enum import Enum

import numpy as np

import sentinel

from oirl.dynamics import TrajectorySample

from oirl.irl.exceptions import RankConditionError, DegenerateRhsError
from oirl.irl.solve import solve_weights
from oirl.irl.stack import NeverPurged

from oirl.utils.docstrings import add_enum_members_to_docstring


logger = logging.getLogger(__name__.split(".")[-1])


@add_enum_members_to_docstring
class PurgeMode(Enum):
    """The rule deciding when the IRL history stack is emptied."""

    metric = "metric"
    """Purge when the parameter quality metric beats that of every stored
    row."""

    time = "time"
    """Purge at most once every ``epsilon_time`` seconds."""


class PurgePolicy(collections.namedtuple(
        "PurgePolicy",
        "kappa1_lower kappa2_lower mode epsilon_time W0")):
    """Thresholds of the gated update and purge rules.

    Parameters
    ----------
    kappa1_lower : float
        Largest condition number at which the weights are re-solved.
    kappa2_lower : float
        Largest condition number at which a metric purge may happen.
    mode : :py:class:`.PurgeMode` or str
    epsilon_time : float
        Minimum time between purges in time mode (seconds).
    W0 : :py:class:`~oirl.irl.solve.WeightEstimate`
        The weights used until the first successful solve.
    """

    def __new__(cls, kappa1_lower, kappa2_lower, mode=PurgeMode.metric,
                epsilon_time=2.0, W0=None):
        mode = PurgeMode(mode)
        if not (kappa1_lower > 0.0 and kappa2_lower > 0.0):
            raise ValueError("condition number thresholds must be positive")
        if mode is PurgeMode.time and not epsilon_time > 0.0:
            raise ValueError("epsilon_time must be positive in time mode")
        return super(PurgePolicy, cls).__new__(
            cls, kappa1_lower, kappa2_lower, mode, epsilon_time, W0)


class PurgeEvent(collections.namedtuple("PurgeEvent", "t s eta_bar kappa")):
    """A record of one purge.

    Parameters
    ----------
    t : float
        Time of the purge.
    s : int
        Purge count after this purge.
    eta_bar : float
        The metric value the purge had to beat.
    kappa : float
        Condition number of the stack when it was emptied.
    """


def purge_step(stack, policy, eta_now, t, W_prev, on_solve=None,
               on_purge=None, eta_bar=None):
    """Run the gated weight update and the purge rule for one time step.

    Both act only on a full stack. When the stack's condition number is below
    ``kappa1_lower`` and the most recent insertion was accepted, the weights
    are re-solved; otherwise (or if the solve fails) ``W_prev`` is held and
    the stack is left untouched for this step.

    In metric mode the stack is then emptied if its condition number is below
    ``kappa2_lower`` and ``eta_now`` is strictly below ``eta_bar``. In time
    mode it is emptied when more than ``epsilon_time`` seconds have passed
    since the last purge (or the start of the run).

    Parameters
    ----------
    stack : :py:class:`~oirl.irl.stack.IrlStack`
        Updated in place.
    policy : :py:class:`.PurgePolicy`
    eta_now : float
        Current parameter quality metric (infinite before enough history has
        been seen).
    t : float
        Current time.
    W_prev : :py:class:`~oirl.irl.solve.WeightEstimate`
    on_solve : callable or None
        Called with a :py:class:`~oirl.irl.solve.SolveRecord` after every
        successful solve.
    on_purge : callable or None
        Called with a :py:class:`.PurgeEvent` after every purge.
    eta_bar : float or None
        The metric value ``eta_now`` must beat, taken from the stack as it
        stood before this step's rows were offered to it. Defaults to
        :py:meth:`stack.eta_bar() <oirl.irl.stack.IrlStack.eta_bar>`.

    Returns
    -------
    (stack, W, purged)
    """
    if not stack.is_full():
        return stack, W_prev, False

    kappa = stack.condition_number()
    W = W_prev
    if kappa < policy.kappa1_lower and stack.varpi:
        try:
            record = solve_weights(stack, return_diagnostics=True)
        except (RankConditionError, DegenerateRhsError) as e:
            logger.debug("Holding weights at t=%.3f s: %s", t, e)
            return stack, W_prev, False
        W = record.weights
        if on_solve is not None:
            on_solve(record._replace(t=t))

    if eta_bar is None:
        eta_bar = stack.eta_bar()
    if policy.mode is PurgeMode.metric:
        purge = kappa < policy.kappa2_lower and eta_now < eta_bar
    else:
        last = stack.last_purge_time
        since = t - (0.0 if last is NeverPurged else last)
        purge = since > policy.epsilon_time

    if not purge:
        return stack, W, False

    stack.purge(t, eta_now)
    event = PurgeEvent(t, stack.s, eta_bar, kappa)
    logger.info("Purge %d at t=%.3f s (eta=%g, eta_bar=%g, kappa=%g)",
                stack.s, t, eta_now, eta_bar, kappa)
    if on_purge is not None:
        on_purge(event)
    return stack, W, True


ObservedRange = sentinel.create("ObservedRange")
"""Selects the query region spanning the states observed so far, inflated by
the configured fraction."""


class QueryRegion(collections.namedtuple("QueryRegion", "lower upper")):
    """An axis-aligned box of states.

    Parameters
    ----------
    lower, upper : (float, ...)
        Opposite corners of the box.
    """

    def __new__(cls, lower, upper):
        lower = tuple(float(v) for v in lower)
        upper = tuple(float(v) for v in upper)
        if len(lower) != len(upper) or any(
                lo > hi for lo, hi in zip(lower, upper)):
            raise ValueError("lower must not exceed upper")
        return super(QueryRegion, cls).__new__(cls, lower, upper)

    @classmethod
    def around(cls, lower, upper, inflation=0.2):
        """The box spanning ``[lower, upper]`` with each side widened so the
        total width grows by the fraction ``inflation``."""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        margin = 0.5 * inflation * (upper - lower)
        return cls(lower - margin, upper + margin)

    @classmethod
    def covering(cls, states, inflation=0.2):
        """The inflated box spanning a set of states."""
        states = np.atleast_2d(np.asarray(states, dtype=float))
        return cls.around(states.min(axis=0), states.max(axis=0), inflation)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, random, count):
        """Draw ``count`` states uniformly from the box.

        Parameters
        ----------
        random : :py:class:`numpy.random.RandomState`
        count : int

        Returns
        -------
        :py:class:`numpy.ndarray`, shape (count, 2n)
        """
        return random.uniform(self.lower, self.upper,
                              size=(count, len(self.lower)))


def query_demonstrator(x_query, demonstrator, t=0.0, region=None):
    """Ask the demonstrator for its control at a chosen state.

    Whether the answer is kept is left to the IRL stack's data selection.

    Parameters
    ----------
    x_query : array_like
    demonstrator : callable ``x -> u``
    t : float
        Time stamp of the query.
    region : :py:class:`.QueryRegion` or None
        If given, ``x_query`` must lie inside it.

    Returns
    -------
    :py:class:`~oirl.dynamics.TrajectorySample`

    Raises
    ------
    ValueError
        If ``x_query`` lies outside ``region``.
    """
    x_query = np.array(x_query, dtype=float)
    if region is not None and not region.contains(x_query):
        raise ValueError("query state {} lies outside the query region".format(
            x_query))
    u = np.array(demonstrator(x_query), dtype=float).reshape(-1)
    return TrajectorySample(t, x_query, u)
