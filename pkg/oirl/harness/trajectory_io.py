"""Reading and writing trajectory CSV files.

Trajectory files have the header ``t,x1,...,x2n,u1,...,um`` and one row per
sample. Values are written as the shortest decimal text which reads back as
the same double, so export followed by ingest is exact.
"""

import io
import math

import numpy as np

from oirl.dynamics import Trajectory

from oirl.utils.files import atomic_write


class TrajectoryParseError(Exception):
    """Raised when a trajectory (or state list) file is malformed.

    Attributes
    ----------
    message : str
    line : int or None
        1-based line number of the offending line.
    path : str or None
    """

    def __init__(self, message, line=None, path=None):
        self.message = message
        self.line = line
        self.path = path

    def __str__(self):
        where = self.path or "<input>"
        if self.line is not None:
            where = "{}:{}".format(where, self.line)
        return "{}: {}".format(where, self.message)


def format_float(value):
    """Shortest text which parses back to exactly the same double."""
    return "{!r}".format(float(value))


def _parse_header(line, prefixes):
    """Count the columns of each prefix, in order, in a header line."""
    names = [name.strip() for name in line.split(",")]
    counts = []
    position = 0
    for prefix in prefixes:
        count = 0
        while (position < len(names) and
               names[position] == "{}{}".format(prefix, count + 1)):
            count += 1
            position += 1
        counts.append(count)
    if position != len(names):
        return None
    return counts


def _read_rows(lines, width, path):
    """Parse numeric CSV rows, yielding (line number, values)."""
    for number, line in lines:
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != width:
            raise TrajectoryParseError(
                "expected {} values, found {}".format(width, len(fields)),
                number, path)
        try:
            values = [float(field) for field in fields]
        except ValueError:
            raise TrajectoryParseError("malformed number", number, path)
        if not all(math.isfinite(v) for v in values):
            raise TrajectoryParseError("non-finite value", number, path)
        yield number, values


def _read_lines(path):
    try:
        with io.open(path, encoding="utf-8") as f:
            return [(number, line.rstrip("\r\n"))
                    for number, line in enumerate(f, 1)]
    except EnvironmentError as e:
        raise TrajectoryParseError(e.strerror, path=path)


def ingest_trajectory(path):
    """Read a trajectory CSV file.

    Returns
    -------
    :py:class:`~oirl.dynamics.Trajectory`

    Raises
    ------
    TrajectoryParseError
        If the file cannot be read, the header is wrong, a row is malformed or
        non-finite, or the sample times are not uniformly spaced. The error
        names the offending line.
    """
    lines = _read_lines(path)
    if not lines:
        raise TrajectoryParseError("empty file", path=path)

    header = [name.strip() for name in lines[0][1].split(",")]
    if header[:1] != ["t"]:
        counts = None
    else:
        counts = _parse_header(",".join(header[1:]), ["x", "u"])
    if counts is None or counts[0] < 2 or counts[0] % 2 or counts[1] < 1:
        raise TrajectoryParseError(
            "header must be t,x1,...,x2n,u1,...,um", 1, path)
    n_x, m = counts

    numbers = []
    rows = []
    for number, values in _read_rows(lines[1:], 1 + n_x + m, path):
        numbers.append(number)
        rows.append(values)
    if not rows:
        raise TrajectoryParseError("no samples", path=path)

    data = np.array(rows)
    t = data[:, 0]
    if len(t) >= 2:
        step = t[1] - t[0]
        steps = np.diff(t)
        bad = np.flatnonzero(~(np.abs(steps - step) <=
                               Trajectory.SPACING_RTOL * abs(step)) |
                             (steps <= 0.0))
        if len(bad):
            raise TrajectoryParseError(
                "sample time {!r} breaks the uniform spacing".format(
                    t[bad[0] + 1]),
                numbers[bad[0] + 1], path)

    try:
        return Trajectory(t, data[:, 1:1 + n_x], data[:, 1 + n_x:])
    except ValueError as e:
        raise TrajectoryParseError(str(e), path=path)


def export_trajectory(traj, path):
    """Write a trajectory CSV file (atomically)."""
    with atomic_write(path) as f:
        f.write("t,{},{}\n".format(
            ",".join("x{}".format(i + 1) for i in range(2 * traj.n)),
            ",".join("u{}".format(i + 1) for i in range(traj.m))))
        for t, x, u in zip(traj.t, traj.x, traj.u):
            f.write(",".join(format_float(v)
                             for v in [t] + list(x) + list(u)))
            f.write("\n")


def ingest_states(path):
    """Read a CSV list of states with the header ``x1,...,x2n``.

    Returns
    -------
    :py:class:`numpy.ndarray`, shape (count, 2n)

    Raises
    ------
    TrajectoryParseError
    """
    lines = _read_lines(path)
    if not lines:
        raise TrajectoryParseError("empty file", path=path)
    counts = _parse_header(lines[0][1], ["x"])
    if counts is None or counts[0] < 2 or counts[0] % 2:
        raise TrajectoryParseError("header must be x1,...,x2n", 1, path)

    states = [values for _, values in _read_rows(lines[1:], counts[0], path)]
    return np.array(states, dtype=float).reshape(-1, counts[0])
