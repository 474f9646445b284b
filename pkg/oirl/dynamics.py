"""Demonstrator dynamics, its closed-form optimal policy and value function,
and fixed-step simulation of observed trajectories.

A demonstrator is a second order, control-affine system whose state ``x =
[p; q]`` stacks a position ``p`` and a velocity ``q`` (each of dimension
``n``). The velocity dynamics split into a known drift and a part which is
linear in a set of unknown parameters::

    q_dot = f_known(x, u) + theta.T . basis_theta(x, u) + eps(x, u)

All model callables operate on arrays whose trailing axis holds the state (or
control) vector, so windows of samples may be evaluated in a single call.
"""

import collections
import logging
import math

import numpy as np


logger = logging.getLogger(__name__.split(".")[-1])


class DivergenceError(Exception):
    """Raised when a simulated state becomes non-finite.

    Attributes
    ----------
    t : float
        The simulation time (seconds) at which the non-finite state appeared.
    state : :py:class:`numpy.ndarray`
        The offending state vector.
    """

    def __init__(self, t, state=None):
        self.t = t
        self.state = state

    def __str__(self):
        return "Simulation diverged at t={!r} s (state: {}).".format(
            self.t, self.state)


class TrajectorySample(collections.namedtuple("TrajectorySample", "t x u")):
    """A timestamped observation of the demonstrator.

    Parameters
    ----------
    t : float
        Sample time (seconds).
    x : :py:class:`numpy.ndarray`
        State vector of length 2n, positions first.
    u : :py:class:`numpy.ndarray`
        Control vector of length m.
    """


class Trajectory(object):
    """An immutable, uniformly sampled record of demonstrator behaviour.

    Parameters
    ----------
    t : array_like, shape (K,)
        Strictly increasing, uniformly spaced sample times.
    x : array_like, shape (K, 2n)
    u : array_like, shape (K, m)
    Ts : float or None
        The sample spacing. Inferred from ``t`` when omitted; must be given
        for single-sample trajectories which are to be used with windowed
        operations.

    Raises
    ------
    ValueError
        If the arrays have inconsistent shapes, contain non-finite values or
        the sample times are not uniformly spaced.
    """

    # Relative tolerance used when checking sample spacing
    SPACING_RTOL = 1e-9

    def __init__(self, t, x, u, Ts=None):
        t = np.array(t, dtype=float)
        x = np.array(x, dtype=float)
        u = np.array(u, dtype=float)

        if t.ndim != 1 or len(t) < 1:
            raise ValueError("sample times must be a non-empty vector")
        if x.ndim != 2 or x.shape[0] != len(t):
            raise ValueError("states must have shape (K, 2n) with K={}".format(
                len(t)))
        if x.shape[1] < 2 or x.shape[1] % 2 != 0:
            raise ValueError(
                "state dimension must be 2n with n >= 1, got {}".format(
                    x.shape[1]))
        if u.ndim != 2 or u.shape[0] != len(t) or u.shape[1] < 1:
            raise ValueError(
                "controls must have shape (K, m) with m >= 1 and K={}".format(
                    len(t)))
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x)) and
                np.all(np.isfinite(u))):
            raise ValueError("trajectory contains non-finite values")

        if len(t) >= 2:
            steps = np.diff(t)
            inferred = (t[-1] - t[0]) / (len(t) - 1)
            if inferred <= 0.0:
                raise ValueError("sample times must be strictly increasing")
            bad = np.flatnonzero(
                np.abs(steps - inferred) > self.SPACING_RTOL * inferred)
            if len(bad):
                raise ValueError(
                    "sample {} breaks the uniform spacing of {!r} s".format(
                        bad[0] + 1, inferred))
            if Ts is None:
                Ts = inferred
        if Ts is not None and Ts <= 0.0:
            raise ValueError("Ts must be positive")

        for a in (t, x, u):
            a.setflags(write=False)

        self.t = t
        self.x = x
        self.u = u
        self.Ts = Ts

    @property
    def n(self):
        """Position (and velocity) dimension."""
        return self.x.shape[1] // 2

    @property
    def m(self):
        """Control dimension."""
        return self.u.shape[1]

    @property
    def positions(self):
        return self.x[:, :self.n]

    @property
    def velocities(self):
        return self.x[:, self.n:]

    def index_of(self, t, atol=1e-6):
        """Get the sample index at time ``t``, or None if ``t`` does not lie on
        the sample grid of this trajectory.

        ``atol`` is measured in units of Ts.
        """
        if self.Ts is None:
            return 0 if t == self.t[0] else None
        position = (t - self.t[0]) / self.Ts
        index = int(round(position))
        if abs(position - index) > atol or not 0 <= index < len(self.t):
            return None
        return index

    def __len__(self):
        return len(self.t)

    def __getitem__(self, index):
        return TrajectorySample(self.t[index], self.x[index], self.u[index])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


class DynamicsModel(object):
    """Description of a demonstrator's dynamics.

    Parameters
    ----------
    n : int
        State half-dimension (positions and velocities each have n entries).
    m : int
        Control dimension.
    f_known : callable ``(x, u) -> array (..., n)``
        The known part of the velocity dynamics.
    basis_theta : callable ``(x, u) -> array (..., p)``
        Basis multiplying the unknown parameters.
    theta_true : array_like, shape (p, n)
        True parameter values. Only used by the simulator and by test oracles.
    g_eff : callable ``x -> array (..., 2n, m)``
        The lifted control-effectiveness map. Its first n rows (the position
        block) must be zero.
    eps : callable ``(x, u) -> array (..., n)`` or None
        Approximation error of the basis. None for an exact basis.

    Raises
    ------
    ValueError
        If dimensions are invalid or ``g_eff`` actuates position states.
    """

    def __init__(self, n, m, f_known, basis_theta, theta_true, g_eff,
                 eps=None):
        if n < 1 or m < 1:
            raise ValueError("n and m must both be at least 1")

        theta_true = np.array(theta_true, dtype=float)
        if theta_true.ndim != 2 or theta_true.shape[1] != n:
            raise ValueError("theta_true must have shape (p, {})".format(n))
        theta_true.setflags(write=False)

        g0 = np.asarray(g_eff(np.zeros(2 * n)), dtype=float)
        if g0.shape != (2 * n, m):
            raise ValueError("g_eff must return a ({}, {}) matrix".format(
                2 * n, m))
        if np.any(g0[:n] != 0.0):
            raise ValueError("g_eff must not actuate position states")

        self.n = n
        self.m = m
        self.f_known = f_known
        self.basis_theta = basis_theta
        self.theta_true = theta_true
        self.g_eff = g_eff
        self.eps = eps

    @property
    def p(self):
        """Number of basis functions."""
        return self.theta_true.shape[0]

    def check_dimensions(self, x, u):
        """Raise ValueError unless x and u have this model's dimensions."""
        if np.shape(x)[-1:] != (2 * self.n,):
            raise ValueError("expected a state of dimension {}, got {}".format(
                2 * self.n, np.shape(x)))
        if np.shape(u)[-1:] != (self.m,):
            raise ValueError(
                "expected a control of dimension {}, got {}".format(
                    self.m, np.shape(u)))

    def velocity_derivative(self, x, u, theta=None):
        """Velocity derivative with parameters ``theta`` (defaulting to the
        true parameters). The approximation error term is only included for
        the true parameters.
        """
        use_truth = theta is None
        theta = self.theta_true if use_truth else np.asarray(theta)
        q_dot = (np.asarray(self.f_known(x, u), dtype=float) +
                 np.einsum("...p,...pn->...n",
                           self.basis_theta(x, u), theta))
        if use_truth and self.eps is not None:
            q_dot = q_dot + self.eps(x, u)
        return q_dot


def eval_dynamics(model, x, u):
    """Evaluate the state derivative ``[q; q_dot]``.

    Parameters
    ----------
    model : :py:class:`.DynamicsModel`
    x : array_like, shape (..., 2n)
    u : array_like, shape (..., m)

    Returns
    -------
    :py:class:`numpy.ndarray`, shape (..., 2n)

    Raises
    ------
    ValueError
        If x or u do not match the model's dimensions.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    model.check_dimensions(x, u)
    q = x[..., model.n:]
    q_dot = model.velocity_derivative(x, u)
    q, q_dot = np.broadcast_arrays(q, q_dot)
    return np.concatenate([q, q_dot], axis=-1)


class BenchmarkSpec(collections.namedtuple(
        "BenchmarkSpec", "f1 f2 f3 v1 v2 v3 Q_weights R_weight")):
    """Constants of the benchmark demonstrator.

    Parameters
    ----------
    f1, f2, f3 : float
        Unknown dynamics constants.
    v1, v2, v3 : float
        Ideal value-function parameters.
    Q_weights : (q1, q2)
        Diagonal of the state-cost weighting.
    R_weight : float
        The control-cost weight r1.
    """


BENCHMARK = BenchmarkSpec(f1=-1.0, f2=-2.5, f3=4.0,
                          v1=math.pi / 2.0, v2=1.0, v3=1.0,
                          Q_weights=(0.0, 1.0), R_weight=1.0)
"""Ground truth of the benchmark demonstrator."""

# Input gain of the benchmark system
BENCHMARK_INPUT_GAIN = 3.0


def _benchmark_basis(x, u):
    x = np.asarray(x, dtype=float)
    x1 = x[..., 0]
    x2 = x[..., 1]
    return np.stack([x1 * (np.pi / 2.0 + np.arctan(5.0 * x1)),
                     x1 ** 2 / (1.0 + 25.0 * x1 ** 2),
                     x2], axis=-1)


def _benchmark_known_drift(x, u):
    return BENCHMARK_INPUT_GAIN * np.asarray(u, dtype=float)[..., :1]


def _benchmark_g_eff(x):
    g = np.array([[0.0], [BENCHMARK_INPUT_GAIN]])
    return np.broadcast_to(g, np.shape(x)[:-1] + g.shape)


def benchmark_model(spec=BENCHMARK):
    """Build the :py:class:`.DynamicsModel` of the benchmark system.

    The unknown constants of ``spec`` multiply the basis ``[x1 (pi/2 +
    atan(5 x1)), x1^2 / (1 + 25 x1^2), x2]`` and the known drift is ``3 u``.
    """
    return DynamicsModel(
        n=1, m=1,
        f_known=_benchmark_known_drift,
        basis_theta=_benchmark_basis,
        theta_true=[[spec.f1], [spec.f2], [spec.f3]],
        g_eff=_benchmark_g_eff)


def optimal_policy(x):
    """The benchmark demonstrator's optimal controller, ``u = -3 x2``.

    Examples
    --------
    >>> optimal_policy([0.0, 1.0])
    array([-3.])
    """
    x = np.asarray(x, dtype=float)
    return -BENCHMARK_INPUT_GAIN * x[..., 1:2]


def eval_value_function(x, v=(BENCHMARK.v1, BENCHMARK.v2, BENCHMARK.v3)):
    """The benchmark's optimal value function
    ``x1^2 (v1 + v2 atan(5 x1)) + v3 x2^2``.
    """
    x = np.asarray(x, dtype=float)
    v1, v2, v3 = v
    x1 = x[..., 0]
    x2 = x[..., 1]
    return x1 ** 2 * (v1 + v2 * np.arctan(5.0 * x1)) + v3 * x2 ** 2


def rk4_step(model, policy, x, Ts):
    """Advance the closed loop by one classical Runge-Kutta step.

    The policy is re-evaluated at every stage of the step.
    """
    def f(x):
        return eval_dynamics(model, x, policy(x))

    k1 = f(x)
    k2 = f(x + 0.5 * Ts * k1)
    k3 = f(x + 0.5 * Ts * k2)
    k4 = f(x + Ts * k3)
    return x + (Ts / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def num_samples(Ts, T_end):
    """Number of samples in a simulation of horizon T_end with step Ts.

    Raises
    ------
    ValueError
        If Ts is not positive, T_end < Ts or T_end is not an integer multiple
        of Ts.
    """
    if not Ts > 0.0:
        raise ValueError("Ts must be positive")
    if T_end < Ts:
        raise ValueError("T_end must be at least Ts")
    steps = T_end / Ts
    whole = int(round(steps))
    if abs(steps - whole) > 1e-9 * max(1.0, steps):
        raise ValueError(
            "T_end ({!r}) is not an integer multiple of Ts ({!r})".format(
                T_end, Ts))
    return whole + 1


def iter_simulation(model, policy, x0, Ts, T_end):
    """Generate the closed-loop trajectory one :py:class:`.TrajectorySample`
    at a time.

    Sample ``i`` has ``t = i * Ts`` and the control recorded as
    ``policy(x(t))``.

    Raises
    ------
    ValueError
        On invalid timing arguments or dimensions.
    DivergenceError
        If the state becomes non-finite.
    """
    count = num_samples(Ts, T_end)
    x = np.array(x0, dtype=float)
    model.check_dimensions(x, np.zeros(model.m))

    for i in range(count):
        t = i * Ts
        if not np.all(np.isfinite(x)):
            raise DivergenceError(t, x)
        u = np.array(policy(x), dtype=float).reshape(model.m)
        if not np.all(np.isfinite(u)):
            raise DivergenceError(t, x)
        yield TrajectorySample(t, x, u)
        if i + 1 < count:
            x = rk4_step(model, policy, x, Ts)


def simulate(model, policy, x0, Ts, T_end):
    """Simulate the closed loop with fixed-step RK4.

    Parameters
    ----------
    model : :py:class:`.DynamicsModel`
    policy : callable ``x -> u``
    x0 : array_like
        Initial state.
    Ts : float
        Step (seconds).
    T_end : float
        Horizon (seconds), an integer multiple of Ts.

    Returns
    -------
    :py:class:`.Trajectory`
        ``T_end / Ts + 1`` samples.
    """
    samples = list(iter_simulation(model, policy, x0, Ts, T_end))
    logger.debug("Simulated %d samples at Ts=%g s", len(samples), Ts)
    return Trajectory([s.t for s in samples],
                      [s.x for s in samples],
                      [s.u for s in samples],
                      Ts=Ts)
