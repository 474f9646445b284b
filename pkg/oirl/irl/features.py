"""Features of the value function and of the running cost.

The demonstrator's value function is modelled as ``W_V . sigma_V(x)`` and its
running cost as ``W_Q . sigma_Q(x) + W_R . sigma_u(u)`` where ``sigma_u``
holds the squared controls.
"""

import numpy as np


def squared_controls(u):
    """The control-cost features ``[u1^2, ..., um^2]``."""
    return np.square(np.asarray(u, dtype=float))


class FeatureLibrary(object):
    """A set of value and cost features.

    Parameters
    ----------
    sigma_V : callable ``x -> array (..., P)``
        Value features.
    grad_sigma_V : callable ``x -> array (..., P, 2n)``
        The Jacobian of ``sigma_V``.
    sigma_Q : callable ``x -> array (..., L)``
        State-cost features.
    P, L, m : int
        Number of value features, state-cost features and controls.
    sigma_u : callable ``u -> array (..., m)``
        Control-cost features, by default the elementwise squares.
    """

    def __init__(self, sigma_V, grad_sigma_V, sigma_Q, P, L, m,
                 sigma_u=squared_controls):
        if P < 1 or L < 0 or m < 1:
            raise ValueError("need P >= 1, L >= 0 and m >= 1")
        self.sigma_V = sigma_V
        self.grad_sigma_V = grad_sigma_V
        self.sigma_Q = sigma_Q
        self.sigma_u = sigma_u
        self.P = P
        self.L = L
        self.m = m

    @property
    def width(self):
        """Number of unknown weights, ``P + L + m - 1``."""
        return self.P + self.L + self.m - 1


def _sigma_V(x):
    x = np.asarray(x, dtype=float)
    x1 = x[..., 0]
    x2 = x[..., 1]
    return np.stack([x1 ** 2, x1 ** 2 * np.arctan(5.0 * x1), x2 ** 2],
                    axis=-1)


def _grad_sigma_V(x):
    x = np.asarray(x, dtype=float)
    x1 = x[..., 0]
    x2 = x[..., 1]
    zero = np.zeros_like(x1)
    d_atan = (2.0 * x1 * np.arctan(5.0 * x1) +
              5.0 * x1 ** 2 / (1.0 + 25.0 * x1 ** 2))
    return np.stack([np.stack([2.0 * x1, zero], axis=-1),
                     np.stack([d_atan, zero], axis=-1),
                     np.stack([zero, 2.0 * x2], axis=-1)], axis=-2)


def _sigma_Q(x):
    return np.square(np.asarray(x, dtype=float)[..., :2])


def benchmark_features():
    """The feature library which exactly spans the benchmark's value function
    and running cost.

    Value features are ``[x1^2, x1^2 atan(5 x1), x2^2]``, state-cost features
    ``[x1^2, x2^2]`` and the control cost is ``u^2``.
    """
    return FeatureLibrary(_sigma_V, _grad_sigma_V, _sigma_Q, P=3, L=2, m=1)
