"""Concurrent-learning estimation of the unknown dynamics parameters.

The estimator keeps a bounded history stack of integral regressor entries
``(P_i, F_i, G_i)`` and drives its estimate with the residuals of every
stored entry at once::

    theta_hat_dot = k_theta Gamma sum_i G_i (P_i - F_i - theta_hat.T G_i).T
    Gamma_dot     = beta1 Gamma - k_theta Gamma (sum_i G_i G_i.T) Gamma

Entries are admitted so as to maximise the smallest eigenvalue of the stack's
Gram matrix ``sum_i G_i G_i.T``.
"""

import collections
import logging

import numpy as np

import scipy.linalg

from oirl.sysid.exceptions import GainDivergenceError


logger = logging.getLogger(__name__.split(".")[-1])


class ParamStackEntry(collections.namedtuple("ParamStackEntry", "P F G t")):
    """A recorded regressor entry ``P = F + theta.T G + E``.

    Parameters
    ----------
    P : :py:class:`numpy.ndarray`, shape (n,)
    F : :py:class:`numpy.ndarray`, shape (n,)
    G : :py:class:`numpy.ndarray`, shape (p,)
    t : float
        Capture time.
    """

    @classmethod
    def from_regressors(cls, regressors):
        """Build an entry from :py:class:`~.IntegralRegressors`."""
        return cls(regressors.P, regressors.F, regressors.G, regressors.t)


class ParamEstimatorState(object):
    """The estimate, gain and history stack of the parameter estimator.

    Parameters
    ----------
    theta_hat : array_like, shape (p, n)
        Initial parameter estimate.
    Gamma : array_like, shape (p, p)
        Initial least-squares gain, symmetric positive definite.
    M : int
        Stack capacity.
    k_theta : float
        Adaptation gain.
    beta1 : float
        Forgetting gain.
    c_lower : float
        The smallest eigenvalue of the Gram matrix above which the stack is
        considered full rank.
    stack : [:py:class:`.ParamStackEntry`, ...]
        Initial stack contents.

    Attributes
    ----------
    gram : :py:class:`numpy.ndarray`, shape (p, p)
        ``sum_i G_i G_i.T`` over the current stack.
    cross : :py:class:`numpy.ndarray`, shape (p, n)
        ``sum_i G_i (P_i - F_i).T`` over the current stack.

    Raises
    ------
    ValueError
        If a gain or capacity is not positive or a shape is inconsistent.
    """

    def __init__(self, theta_hat, Gamma, M, k_theta, beta1, c_lower,
                 stack=()):
        theta_hat = np.array(theta_hat, dtype=float)
        Gamma = np.array(Gamma, dtype=float)
        if theta_hat.ndim != 2:
            raise ValueError("theta_hat must have shape (p, n)")
        p = theta_hat.shape[0]
        if Gamma.shape != (p, p):
            raise ValueError("Gamma must have shape ({0}, {0})".format(p))
        if M < 1:
            raise ValueError("M must be at least 1")
        if not (k_theta > 0.0 and beta1 > 0.0 and c_lower > 0.0):
            raise ValueError("k_theta, beta1 and c_lower must be positive")
        if len(stack) > M:
            raise ValueError("stack holds more than M entries")

        self.theta_hat = theta_hat
        self.Gamma = Gamma
        self.M = M
        self.k_theta = k_theta
        self.beta1 = beta1
        self.c_lower = c_lower
        self.stack = list(stack)
        self._refresh()

    @property
    def p(self):
        return self.theta_hat.shape[0]

    @property
    def n(self):
        return self.theta_hat.shape[1]

    def is_full(self):
        return len(self.stack) >= self.M

    def _refresh(self):
        """Recompute the stack sums from scratch."""
        if self.stack:
            self._G = np.array([e.G for e in self.stack], dtype=float)
            residual = np.array([np.asarray(e.P) - np.asarray(e.F)
                                 for e in self.stack], dtype=float)
        else:
            self._G = np.zeros((0, self.p))
            residual = np.zeros((0, self.n))
        self.gram = np.dot(self._G.T, self._G)
        self.cross = np.dot(self._G.T, residual)
        self._outer = np.einsum("ip,iq->ipq", self._G, self._G)
        self._lambda_min = None

    def min_gram_eigenvalue(self):
        """Smallest eigenvalue of the stack's Gram matrix."""
        if self._lambda_min is None:
            self._lambda_min = float(np.linalg.eigvalsh(self.gram)[0])
        return self._lambda_min

    def gain_eigenvalues(self):
        """The (smallest, largest) eigenvalues of Gamma."""
        eigenvalues = np.linalg.eigvalsh(self.Gamma)
        return float(eigenvalues[0]), float(eigenvalues[-1])


def stack_try_insert(state, entry):
    """Offer an entry to the estimator's history stack.

    A stack with free space always accepts. A full stack replaces the entry
    whose removal (in favour of the new entry) maximises the smallest
    eigenvalue of the Gram matrix, but only if that eigenvalue strictly
    increases.

    Parameters
    ----------
    state : :py:class:`.ParamEstimatorState`
    entry : :py:class:`.ParamStackEntry`

    Returns
    -------
    (state, accepted)
        The (updated in place) state and whether the stack changed.
    """
    G = np.asarray(entry.G, dtype=float)

    if not state.is_full():
        state.stack.append(entry)
        state._refresh()
        if state.is_full():
            logger.info("Parameter stack filled at t=%.3f s", entry.t)
        return state, True

    # Gram matrix after each possible replacement, evaluated as a batch
    candidates = (state.gram[np.newaxis, :, :] - state._outer +
                  np.outer(G, G)[np.newaxis, :, :])
    lambda_min = np.linalg.eigvalsh(candidates)[:, 0]
    best = int(np.argmax(lambda_min))
    current = state.min_gram_eigenvalue()

    # Increases below this are indistinguishable from rounding
    margin = 16.0 * np.finfo(float).eps * max(np.trace(state.gram),
                                              np.finfo(float).tiny)
    if lambda_min[best] > current + margin:
        logger.debug("Parameter stack: replaced entry from t=%.3f s, "
                     "min eigenvalue %g -> %g",
                     state.stack[best].t, current, lambda_min[best])
        state.stack[best] = entry
        state._refresh()
        return state, True
    else:
        return state, False


def is_full_rank(state):
    """True iff the smallest eigenvalue of the stack's Gram matrix exceeds
    ``c_lower``. An empty stack is never full rank."""
    if not state.stack:
        return False
    return state.min_gram_eigenvalue() > state.c_lower


def estimator_step(state, dt):
    """Advance the estimate and gain by one explicit Euler step.

    Parameters
    ----------
    state : :py:class:`.ParamEstimatorState`
        Updated in place.
    dt : float
        Step (seconds).

    Returns
    -------
    :py:class:`.ParamEstimatorState`

    Raises
    ------
    ValueError
        If dt is not positive.
    GainDivergenceError
        If the updated gain is not symmetric positive definite.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")

    Gamma = state.Gamma
    k = state.k_theta

    # sum_i G_i (P_i - F_i - theta_hat.T G_i).T
    residual = state.cross - np.dot(state.gram, state.theta_hat)
    theta_hat = state.theta_hat + dt * k * np.dot(Gamma, residual)

    Gamma = Gamma + dt * (state.beta1 * Gamma -
                          k * np.dot(np.dot(Gamma, state.gram), Gamma))
    Gamma = 0.5 * (Gamma + Gamma.T)

    if not (np.all(np.isfinite(Gamma)) and np.all(np.isfinite(theta_hat))):
        raise GainDivergenceError()
    try:
        scipy.linalg.cholesky(Gamma, lower=True)
    except scipy.linalg.LinAlgError:
        raise GainDivergenceError(float(np.linalg.eigvalsh(Gamma)[0]))

    state.theta_hat = theta_hat
    state.Gamma = Gamma
    return state
