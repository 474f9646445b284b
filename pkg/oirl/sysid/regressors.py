"""Derivative-free integral regressors.

Integrating the velocity dynamics over a window of length ``tau1`` and then
integrating the result over a window of length ``tau2`` removes every
derivative from the measurement side::

    P(t) = p(t) - p(t - tau2) - p(t - tau1) + p(t - tau1 - tau2)
         = F(t) + theta.T . G(t) + E(t)

where ``F`` and ``G`` are the nested integrals of the known drift and of the
basis. Both are computed by nested trapezoidal quadrature on the sample grid:
a cumulative inner integral is differenced over ``tau1`` and the result
integrated over ``tau2``.

Two forms are provided. :py:func:`integral_regressors` and
:py:func:`eval_eta` evaluate a recorded :py:class:`~oirl.dynamics.Trajectory`
at a single time. The ``Streaming*`` classes consume samples one at a time
with constant work per sample and are used by the online learning loop.
"""

import collections

from collections import deque

import numpy as np

from scipy.integrate import cumulative_trapezoid, trapezoid

from oirl.sysid.exceptions import InsufficientHistoryError


class IntegralRegressors(collections.namedtuple(
        "IntegralRegressors", "P F G E_bound t")):
    """The affine regression data available at a single time.

    Parameters
    ----------
    P : :py:class:`numpy.ndarray`, shape (n,)
        Double-differenced positions.
    F : :py:class:`numpy.ndarray`, shape (n,)
        Nested integral of the known drift.
    G : :py:class:`numpy.ndarray`, shape (p,)
        Nested integral of the basis.
    E_bound : float
        Bound on the magnitude of the neglected approximation-error integral
        (zero for an exact basis).
    t : float
        Evaluation time.
    """

    @classmethod
    def zeros(cls, n, p, t):
        return cls(np.zeros(n), np.zeros(n), np.zeros(p), 0.0, t)


def window_samples(window, Ts):
    """The number of sample steps spanned by a window, or None if the window
    is not an integer multiple of Ts.

    Raises
    ------
    ValueError
        If the window is not positive.
    """
    if not window > 0.0:
        raise ValueError("window lengths must be positive")
    if Ts is None:
        return None
    steps = window / Ts
    whole = int(round(steps))
    if abs(steps - whole) > 1e-6:
        return None
    return whole


def double_integral(values, Ts, n1, n2):
    """Nested trapezoidal integral of uniformly sampled values.

    Parameters
    ----------
    values : array_like, shape (n1 + n2 + 1, ...)
        Samples covering ``[t - tau1 - tau2, t]``.
    Ts : float
    n1, n2 : int
        Inner and outer window lengths in samples.

    Returns
    -------
    :py:class:`numpy.ndarray`
        ``int_{t-tau2}^{t} int_{s-tau1}^{s} value`` with the trailing shape
        of ``values``.

    Examples
    --------
    A constant integrand of one gives the product of the window lengths:

    >>> float(double_integral([1.0] * 6, 0.5, 3, 2))
    1.5
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] != n1 + n2 + 1:
        raise ValueError("expected {} samples, got {}".format(
            n1 + n2 + 1, values.shape[0]))
    cumulative = cumulative_trapezoid(values, dx=Ts, axis=0, initial=0.0)
    inner = cumulative[n1:] - cumulative[:-n1]
    return trapezoid(inner, dx=Ts, axis=0)


def _grid_index(traj, t, start):
    """Index of t in traj, raising if [start, t] is not covered."""
    available = (traj.t[0], traj.t[-1])
    index = traj.index_of(t)
    if index is None:
        raise InsufficientHistoryError(t, (start, t), available)
    return index


def integral_regressors(traj, model, t, tau1, tau2):
    """Compute the integral regressors of a recorded trajectory.

    Parameters
    ----------
    traj : :py:class:`~oirl.dynamics.Trajectory`
    model : :py:class:`~oirl.dynamics.DynamicsModel`
    t : float
        Evaluation time, on the sample grid.
    tau1, tau2 : float
        Inner and outer window lengths (seconds), integer multiples of the
        sample spacing.

    Returns
    -------
    :py:class:`.IntegralRegressors`
        All zero when ``t < T0 + tau1 + tau2``.

    Raises
    ------
    ValueError
        If a window length is not positive.
    InsufficientHistoryError
        If t or a window does not lie on the sample grid, or t is beyond the
        end of the trajectory.
    """
    n1 = window_samples(tau1, traj.Ts)
    n2 = window_samples(tau2, traj.Ts)
    if n1 is None or n2 is None:
        raise InsufficientHistoryError(t, (t - tau1 - tau2, t),
                                       (traj.t[0], traj.t[-1]))
    k = _grid_index(traj, t, t - tau1 - tau2)

    if k < n1 + n2:
        return IntegralRegressors.zeros(model.n, model.p, t)

    window = slice(k - n1 - n2, k + 1)
    x = traj.x[window]
    u = traj.u[window]
    p = traj.positions
    P = p[k] - p[k - n2] - p[k - n1] + p[k - n1 - n2]
    F = double_integral(model.f_known(x, u), traj.Ts, n1, n2)
    G = double_integral(model.basis_theta(x, u), traj.Ts, n1, n2)

    if model.eps is None:
        E_bound = 0.0
    else:
        E_bound = tau1 * tau2 * float(np.max(np.linalg.norm(
            np.atleast_2d(model.eps(x, u)), axis=-1)))

    return IntegralRegressors(P, F, G, E_bound, t)


def eval_eta(traj, model, theta_hat, t, T1):
    """Evaluate the parameter-quality metric at time t.

    The metric is the norm of the velocity change over ``[t - T1, t]`` not
    explained by the estimated dynamics::

        || q(t) - q(t - T1) - int f_known - int theta_hat.T . basis ||

    Parameters
    ----------
    traj : :py:class:`~oirl.dynamics.Trajectory`
    model : :py:class:`~oirl.dynamics.DynamicsModel`
    theta_hat : array_like, shape (p, n) or (K, p, n)
        Either a fixed estimate or the per-sample estimates recorded alongside
        ``traj``.
    t : float
    T1 : float
        Window length (seconds).

    Raises
    ------
    ValueError
        If T1 is not positive or theta_hat has the wrong shape.
    InsufficientHistoryError
        If ``[t - T1, t]`` is not covered by the trajectory's sample grid.
    """
    nT = window_samples(T1, traj.Ts)
    if nT is None:
        raise InsufficientHistoryError(t, (t - T1, t),
                                       (traj.t[0], traj.t[-1]))
    k = _grid_index(traj, t, t - T1)
    if k < nT:
        raise InsufficientHistoryError(t, (t - T1, t),
                                       (traj.t[0], traj.t[-1]))

    theta_hat = np.asarray(theta_hat, dtype=float)
    window = slice(k - nT, k + 1)
    if theta_hat.ndim == 3:
        if theta_hat.shape[0] != len(traj):
            raise ValueError("per-sample estimates must align with the "
                             "trajectory")
        theta_hat = theta_hat[window]
    elif theta_hat.ndim != 2:
        raise ValueError("theta_hat must have shape (p, n) or (K, p, n)")

    x = traj.x[window]
    u = traj.u[window]
    integrand = model.velocity_derivative(x, u, theta_hat)
    q = traj.velocities
    residual = q[k] - q[k - nT] - trapezoid(integrand, dx=traj.Ts, axis=0)
    return float(np.linalg.norm(residual))


class StreamingWindowIntegral(object):
    """Trapezoidal integral over a sliding window of uniformly spaced samples.

    Parameters
    ----------
    Ts : float
        Sample spacing.
    window : int
        Window length in sample steps.
    """

    def __init__(self, Ts, window):
        self.Ts = Ts
        self.window = window
        self._cumulative = deque(maxlen=window + 1)
        self._last = None

    def push(self, value):
        """Add the next sample and return the integral over the window ending
        at it, or None until ``window`` steps have been observed."""
        value = np.array(value, dtype=float)
        if self._last is None:
            total = np.zeros_like(value)
        else:
            total = (self._cumulative[-1] +
                     0.5 * self.Ts * (self._last + value))
        self._cumulative.append(total)
        self._last = value

        if len(self._cumulative) <= self.window:
            return None
        return total - self._cumulative[0]


class StreamingDoubleIntegral(object):
    """Streaming form of :py:func:`.double_integral`.

    Parameters
    ----------
    Ts : float
    n1, n2 : int
        Inner and outer window lengths in samples.
    """

    def __init__(self, Ts, n1, n2):
        self._inner = StreamingWindowIntegral(Ts, n1)
        self._outer = StreamingWindowIntegral(Ts, n2)
        self._zero = None

    def push(self, value):
        """Add the next sample and return the nested integral ending at it.

        Zeros are returned until ``n1 + n2`` steps have been observed.
        """
        value = np.asarray(value, dtype=float)
        if self._zero is None:
            self._zero = np.zeros_like(value)

        inner = self._inner.push(value)
        if inner is None:
            return self._zero.copy()
        outer = self._outer.push(inner)
        if outer is None:
            return self._zero.copy()
        return outer


class StreamingRegressors(object):
    """Produce :py:class:`.IntegralRegressors` from a stream of samples.

    Equivalent (up to rounding) to calling :py:func:`.integral_regressors` at
    every sample of the finished trajectory.

    Parameters
    ----------
    model : :py:class:`~oirl.dynamics.DynamicsModel`
    Ts : float
    tau1, tau2 : float
        Window lengths (seconds).
    """

    def __init__(self, model, Ts, tau1, tau2):
        self.model = model
        self.tau1 = tau1
        self.tau2 = tau2
        self.n1 = window_samples(tau1, Ts)
        self.n2 = window_samples(tau2, Ts)
        if self.n1 is None or self.n2 is None:
            raise ValueError("window lengths must be multiples of Ts")
        length = self.n1 + self.n2 + 1
        self._positions = deque(maxlen=length)
        self._eps_norms = deque(maxlen=length)
        self._F = StreamingDoubleIntegral(Ts, self.n1, self.n2)
        self._G = StreamingDoubleIntegral(Ts, self.n1, self.n2)

    @property
    def ready(self):
        """True once the windows are covered by observed samples."""
        return len(self._positions) > self.n1 + self.n2

    def push(self, sample, f_known=None, basis=None):
        """Consume a :py:class:`~oirl.dynamics.TrajectorySample`.

        The known drift and basis at the sample may be passed in when the
        caller has already evaluated them.
        """
        model = self.model
        if f_known is None:
            f_known = model.f_known(sample.x, sample.u)
        if basis is None:
            basis = model.basis_theta(sample.x, sample.u)

        self._positions.append(np.asarray(sample.x[:model.n], dtype=float))
        if model.eps is not None:
            self._eps_norms.append(
                float(np.linalg.norm(model.eps(sample.x, sample.u))))
        F = self._F.push(f_known)
        G = self._G.push(basis)

        if not self.ready:
            return IntegralRegressors.zeros(model.n, model.p, sample.t)

        p = self._positions
        P = p[-1] - p[-1 - self.n2] - p[-1 - self.n1] + p[0]
        if model.eps is None:
            E_bound = 0.0
        else:
            E_bound = self.tau1 * self.tau2 * max(self._eps_norms)
        return IntegralRegressors(P, F, G, E_bound, sample.t)


class StreamingEta(object):
    """Streaming form of :py:func:`.eval_eta` where the estimate in force at
    each sample is supplied alongside it.

    Parameters
    ----------
    model : :py:class:`~oirl.dynamics.DynamicsModel`
    Ts : float
    T1 : float
        Window length (seconds).
    """

    def __init__(self, model, Ts, T1):
        self.model = model
        steps = window_samples(T1, Ts)
        if steps is None:
            raise ValueError("T1 must be a multiple of Ts")
        self._integral = StreamingWindowIntegral(Ts, steps)
        self._velocities = deque(maxlen=steps + 1)

    def push(self, sample, theta_hat, f_known=None, basis=None):
        """Consume a sample and the estimate recorded at it.

        Returns
        -------
        float
            The metric at the sample time, or infinity while fewer than T1
            seconds of history have been observed.
        """
        model = self.model
        if f_known is None:
            f_known = model.f_known(sample.x, sample.u)
        if basis is None:
            basis = model.basis_theta(sample.x, sample.u)

        integral = self._integral.push(f_known + np.dot(basis, theta_hat))
        self._velocities.append(np.asarray(sample.x[model.n:], dtype=float))
        if integral is None:
            return float("inf")
        q = self._velocities
        return float(np.linalg.norm(q[-1] - q[0] - integral))
