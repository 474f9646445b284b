class RankConditionError(Exception):
    """Raised when the stacked regressor does not have full column rank so the
    weights cannot be recovered uniquely.

    Attributes
    ----------
    rank : int
        Numerical rank of the stacked regressor.
    required : int
        Number of unknown weights.
    smallest_sv : float or None
        Smallest singular value.
    largest_sv : float or None
        Largest singular value.
    """

    def __init__(self, rank, required, smallest_sv=None, largest_sv=None):
        self.rank = rank
        self.required = required
        self.smallest_sv = smallest_sv
        self.largest_sv = largest_sv

    def __str__(self):
        text = ("Stacked regressor has rank {} but {} weights are "
                "unknown".format(self.rank, self.required))
        if self.smallest_sv is not None:
            text += " (singular values span [{!r}, {!r}])".format(
                self.smallest_sv, self.largest_sv)
        return text + "."


class DegenerateRhsError(Exception):
    """Raised when the stacked right-hand side is too small to exclude the
    all-zero weight solution.

    Attributes
    ----------
    norm : float
        Norm of the stacked right-hand side.
    floor : float
        The required minimum norm.
    """

    def __init__(self, norm, floor):
        self.norm = norm
        self.floor = floor

    def __str__(self):
        return ("Right-hand side norm {!r} is below the floor of {!r}.".format(
            self.norm, self.floor))
