"""The IRL history stack and its condition-number based data selection.

The stack holds the rows of up to N samples. Once it is full, a new sample
only displaces a stored one when doing so strictly improves the conditioning
of the stacked regressor without letting the right-hand side collapse.
"""

import logging

import numpy as np

import sentinel


logger = logging.getLogger(__name__.split(".")[-1])


NeverPurged = sentinel.create("NeverPurged")
"""Value of :py:attr:`IrlStack.last_purge_time` before the first purge.

The time-based purge rule measures from the start of the run in this case.
"""


def condition_number(gram):
    """Spectral condition number of a symmetric positive semi-definite matrix,
    or infinity if it is singular.

    ``gram`` may be a stack of matrices, in which case an array of condition
    numbers is returned.
    """
    eigenvalues = np.linalg.eigvalsh(gram)
    smallest = eigenvalues[..., 0]
    largest = eigenvalues[..., -1]
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = np.where(smallest > 0.0, largest / smallest, np.inf)
    return kappa if kappa.ndim else float(kappa)


class IrlStack(object):
    """A bounded, curated stack of :py:class:`~oirl.irl.rows.IrlRow`.

    Parameters
    ----------
    N : int
        Capacity in samples.
    P, L, m : int
        Feature dimensions (see :py:class:`~oirl.irl.features.FeatureLibrary`).
    xi1 : float
        A replacement must reduce the condition number below ``xi1`` times its
        current value.
    xi2 : float
        Floor on the norm of the stacked right-hand side.
    r1 : float
        The fixed first control weight.

    Attributes
    ----------
    rows : [:py:class:`~oirl.irl.rows.IrlRow`, ...]
    varpi : int
        1 if the most recent insertion attempt changed the stack, else 0.
    s : int
        Number of purges performed.
    last_purge_time : float or :py:data:`.NeverPurged`
    eta_floor : float
        The metric value which triggered the most recent purge (infinite
        before the first purge).
    """

    def __init__(self, N, P, L, m, xi1, xi2, r1):
        if N < 1:
            raise ValueError("N must be at least 1")
        if xi1 < 0.0 or not xi2 > 0.0 or not r1 > 0.0:
            raise ValueError("need xi1 >= 0, xi2 > 0 and r1 > 0")
        self.N = N
        self.P = P
        self.L = L
        self.m = m
        self.xi1 = xi1
        self.xi2 = xi2
        self.r1 = r1

        self.rows = []
        self.varpi = 0
        self.s = 0
        self.last_purge_time = NeverPurged
        self.eta_floor = float("inf")

        # Per-row coefficient blocks, right-hand sides and Gram blocks
        self._blocks = np.zeros((N, 1 + m, self.width))
        self._rhs = np.zeros((N, 1 + m))
        self._row_grams = np.zeros((N, self.width, self.width))
        self._row_rhs_sq = np.zeros(N)
        self._update_sums()

    @classmethod
    def for_features(cls, lib, N, xi1, xi2, r1):
        """Create an empty stack sized for a feature library."""
        return cls(N, lib.P, lib.L, lib.m, xi1, xi2, r1)

    @property
    def width(self):
        """Number of unknown weights."""
        return self.P + self.L + self.m - 1

    def __len__(self):
        return len(self.rows)

    def is_full(self):
        return len(self.rows) >= self.N

    def _store(self, index, row):
        """Place a row at an index and update the cached sums."""
        block = row.block()
        if block.shape != self._blocks.shape[1:]:
            raise ValueError("row has shape {}, expected {}".format(
                block.shape, self._blocks.shape[1:]))
        if index == len(self.rows):
            self.rows.append(row)
        else:
            self.rows[index] = row
        self._blocks[index] = block
        self._rhs[index] = row.rhs
        self._row_grams[index] = np.dot(block.T, block)
        self._row_rhs_sq[index] = np.dot(row.rhs, row.rhs)
        self._update_sums()

    def _update_sums(self):
        count = len(self.rows)
        self.gram = np.sum(self._row_grams[:count], axis=0)
        self._rhs_sq = float(np.sum(self._row_rhs_sq[:count]))
        self._kappa = None

    def matrices(self):
        """The stacked regressor and right-hand side ``(Sigma, Sigma_u1)``.

        Each stored sample contributes its Bellman row followed by its ``m``
        controller rows.
        """
        count = len(self.rows)
        return (self._blocks[:count].reshape(-1, self.width).copy(),
                self._rhs[:count].reshape(-1).copy())

    def condition_number(self):
        """Condition number of ``Sigma.T Sigma`` (infinite when singular)."""
        if self._kappa is None:
            self._kappa = condition_number(self.gram)
        return self._kappa

    def rhs_norm(self):
        """Norm of the stacked right-hand side."""
        return float(np.sqrt(self._rhs_sq))

    def eta_bar(self):
        """The metric value a purge must beat: the smallest metric of the
        stored rows, capped by the metric which triggered the last purge."""
        return min([row.eta for row in self.rows] + [self.eta_floor])

    def try_insert(self, row):
        """Offer a row to the stack.

        Returns
        -------
        bool
            True if the row was stored. :py:attr:`varpi` is updated to match.
        """
        if not self.is_full():
            self._store(len(self.rows), row)
            self.varpi = 1
            if self.is_full():
                # Refills after a purge are routine
                logger.log(logging.INFO if self.s == 0 else logging.DEBUG,
                           "IRL stack filled at t=%.3f s", row.t)
            return True

        block = row.block()
        candidate_gram = np.dot(block.T, block)
        grams = (self.gram[np.newaxis, :, :] - self._row_grams +
                 candidate_gram[np.newaxis, :, :])
        kappas = condition_number(grams)
        rhs_norms = np.sqrt(np.maximum(
            self._rhs_sq - self._row_rhs_sq + np.sum(row.rhs ** 2), 0.0))

        kappa_old = self.condition_number()
        threshold = self.xi1 * kappa_old if self.xi1 > 0.0 else 0.0
        qualifying = (kappas < threshold) & (rhs_norms >= self.xi2)

        if not np.any(qualifying):
            self.varpi = 0
            return False

        index = int(np.argmin(np.where(qualifying, kappas, np.inf)))
        logger.debug("IRL stack: replaced row from t=%.3f s, kappa %g -> %g",
                     self.rows[index].t, kappa_old, kappas[index])
        self._store(index, row)
        self.varpi = 1
        return True

    def purge(self, t, eta):
        """Empty the stack, recording the time and the metric value which
        triggered the purge."""
        self.rows = []
        self._update_sums()
        self.s += 1
        self.last_purge_time = t
        self.eta_floor = eta


def stack_try_insert(stack, row):
    """Offer a row to an :py:class:`.IrlStack`.

    If the stack is not full the row is appended. Otherwise, among the stored
    rows whose replacement by ``row`` gives a condition number below ``xi1``
    times the current one and a right-hand side norm of at least ``xi2``, the
    one giving the smallest condition number is replaced. If no stored row
    qualifies the new row is discarded.

    Returns
    -------
    (stack, varpi)
        The (updated in place) stack and 1 if the row was stored, else 0.
    """
    stack.try_insert(row)
    return stack, stack.varpi
