"""Helpers for writing result files."""

import io
import os
import tempfile

from contextlib import contextmanager


@contextmanager
def atomic_write(path, encoding="utf-8"):
    """Context manager yielding a text file which replaces ``path`` only once
    the block completes without raising.

    The data is written to a temporary file in the same directory which is
    then renamed over the destination, so readers never observe a partially
    written file.

    Raises
    ------
    EnvironmentError
        If the file cannot be written. The error names ``path`` rather than
        the temporary file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(
            dir=directory, prefix=".{}.".format(os.path.basename(path)),
            suffix=".tmp")
    except EnvironmentError as e:
        raise type(e)(e.errno, e.strerror, path)

    try:
        with io.open(fd, "w", encoding=encoding, newline="\n") as f:
            yield f
        os.replace(tmp_path, path)
    except EnvironmentError as e:
        _discard(tmp_path)
        raise type(e)(e.errno, e.strerror, path)
    except BaseException:
        _discard(tmp_path)
        raise


def _discard(path):
    try:
        os.remove(path)
    except EnvironmentError:  # pragma: no cover
        pass
