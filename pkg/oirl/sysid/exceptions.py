class InsufficientHistoryError(Exception):
    """Raised when a windowed quantity is requested at a time for which the
    trajectory does not hold the required samples.

    Attributes
    ----------
    t : float
        The requested evaluation time.
    window : (start, end)
        The time span which must be covered by on-grid samples.
    available : (start, end) or None
        The time span covered by the trajectory.
    """

    def __init__(self, t, window, available=None):
        self.t = t
        self.window = window
        self.available = available

    def __str__(self):
        text = ("Evaluation at t={!r} s needs on-grid samples over "
                "[{!r}, {!r}] s".format(self.t, *self.window))
        if self.available is not None:
            text += " but the trajectory covers [{!r}, {!r}] s".format(
                *self.available)
        return text + "."


class GainDivergenceError(Exception):
    """Raised when the least-squares gain matrix loses positive definiteness
    or becomes non-finite.

    Attributes
    ----------
    min_eigenvalue : float or None
        The smallest eigenvalue of the offending gain, if it could be computed.
    """

    def __init__(self, min_eigenvalue=None):
        self.min_eigenvalue = min_eigenvalue

    def __str__(self):
        text = "Estimator gain is no longer positive definite"
        if self.min_eigenvalue is not None:
            text += " (smallest eigenvalue {!r})".format(self.min_eigenvalue)
        return text + "."
