"""Regressor rows of the inverse Bellman error and of the closed-form
controller.

For weights ``W = [W_V; W_Q; W_R]`` the inverse Bellman error at a sample is::

    delta = W_V . grad_sigma_V(x) Y(x, u) + W_Q . sigma_Q(x) + W_R . sigma_u(u)

where ``Y(x, u) = [q; f_known(x, u) + theta_hat.T basis(x, u)]`` is the
estimated state derivative. The optimal controller of a quadratic control
cost adds ``m`` more equations, ``2 r_j u_j + sigma_g[j] . W_V = 0`` with
``sigma_g = g_eff.T grad_sigma_V.T``.

Because the first control weight ``r1`` is fixed, every term it multiplies
moves to a right-hand side and the remaining ``P + L + m - 1`` weights solve
``row . W + rhs = 0``.
"""

import collections

import numpy as np


class IrlRow(collections.namedtuple(
        "IrlRow", "bellman_row controller_rows rhs t eta")):
    """The equations contributed by one sample.

    Parameters
    ----------
    bellman_row : :py:class:`numpy.ndarray`, shape (P + L + m - 1,)
    controller_rows : :py:class:`numpy.ndarray`, shape (m, P + L + m - 1)
    rhs : :py:class:`numpy.ndarray`, shape (1 + m,)
        ``[r1 u1^2; 2 r1 u1; 0, ..., 0]``.
    t : float
        Capture time.
    eta : float
        Parameter-quality metric at capture.
    """

    def block(self):
        """The ``(1 + m, P + L + m - 1)`` coefficient block of this sample."""
        return np.vstack([self.bellman_row[np.newaxis, :],
                          self.controller_rows])


def predicted_derivative(x, u, theta_hat, model):
    """The estimated state derivative ``[q; f_known + theta_hat.T basis]``."""
    q = np.asarray(x, dtype=float)[..., model.n:]
    q_dot = model.velocity_derivative(x, u, theta_hat)
    return np.concatenate(np.broadcast_arrays(q, q_dot), axis=-1)


def _check(x, u, theta_hat, lib, model):
    model.check_dimensions(x, u)
    if np.shape(theta_hat) != model.theta_true.shape:
        raise ValueError("theta_hat must have shape {}".format(
            model.theta_true.shape))
    if lib.m != model.m:
        raise ValueError("feature library and model disagree on m")


def inverse_bellman_error(x, u, W, theta_hat, lib, model):
    """Evaluate the inverse Bellman error.

    Parameters
    ----------
    x : array_like, shape (2n,)
    u : array_like, shape (m,)
    W : array_like, shape (P + L + m,)
        All weights ``[W_V; W_Q; W_R]`` including the fixed ``r1``.
    theta_hat : array_like, shape (p, n)
    lib : :py:class:`~oirl.irl.features.FeatureLibrary`
    model : :py:class:`~oirl.dynamics.DynamicsModel`

    Returns
    -------
    float

    Raises
    ------
    ValueError
        On any dimension mismatch.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    W = np.asarray(W, dtype=float)
    _check(x, u, theta_hat, lib, model)
    if W.shape != (lib.P + lib.L + lib.m,):
        raise ValueError("W must have {} entries".format(
            lib.P + lib.L + lib.m))

    W_V = W[:lib.P]
    W_Q = W[lib.P:lib.P + lib.L]
    W_R = W[lib.P + lib.L:]
    value_rate = np.dot(lib.grad_sigma_V(x),
                        predicted_derivative(x, u, theta_hat, model))
    return float(np.dot(W_V, value_rate) +
                 np.dot(W_Q, lib.sigma_Q(x)) +
                 np.dot(W_R, lib.sigma_u(u)))


def build_row(x, u, theta_hat, eta, lib, model, r1, t=0.0):
    """Build the regressor rows contributed by a sample.

    Parameters
    ----------
    x : array_like, shape (2n,)
    u : array_like, shape (m,)
    theta_hat : array_like, shape (p, n)
        The dynamics estimate in force at the sample.
    eta : float
        Parameter-quality metric at the sample.
    lib : :py:class:`~oirl.irl.features.FeatureLibrary`
    model : :py:class:`~oirl.dynamics.DynamicsModel`
    r1 : float
        The fixed first control weight.
    t : float
        Sample time.

    Returns
    -------
    :py:class:`.IrlRow`
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    _check(x, u, theta_hat, lib, model)
    P, L, m = lib.P, lib.L, lib.m

    grad = lib.grad_sigma_V(x)
    sigma_u = lib.sigma_u(u)
    bellman_row = np.concatenate([
        np.dot(grad, predicted_derivative(x, u, theta_hat, model)),
        lib.sigma_Q(x),
        sigma_u[1:]])

    # sigma_g[j] = (g_eff.T grad.T)[j], the value-gradient seen by control j
    sigma_g = np.dot(np.asarray(model.g_eff(x)).T, grad.T)
    controller_rows = np.zeros((m, P + L + m - 1))
    controller_rows[:, :P] = sigma_g
    for j in range(1, m):
        controller_rows[j, P + L + j - 1] = 2.0 * u[j]

    rhs = np.zeros(1 + m)
    rhs[0] = r1 * sigma_u[0]
    rhs[1] = 2.0 * r1 * u[0]

    return IrlRow(bellman_row, controller_rows, rhs, t, eta)
