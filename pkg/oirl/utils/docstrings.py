"""Docstring manipulation functions.

These functions work around Sphinx autodoc's handling of enumerations.
"""


def add_enum_members_to_docstring(enum):
    """Decorator for Enum classes which re-writes the documentation string so
    that Sphinx lists every member together with its value.

    The names and values are appended to an 'Attributes' section of the
    docstring of the decorated class. Values are shown with :py:func:`repr` so
    that string-valued enumerations (as used in configuration files) read the
    way they must be written.

    Example::

        >>> from enum import Enum
        >>> @add_enum_members_to_docstring
        ... class Colour(Enum):
        ...     '''An example Enum.'''
        ...     red = "red"
        ...     blue = "blue"
        >>> print(Colour.__doc__)
        An example Enum.
        <BLANKLINE>
        Attributes
        ----------
        red = 'red'
        blue = 'blue'
        <BLANKLINE>
    """
    # The enum34 backport sets the docstring to None rather than an empty
    # string.
    if enum.__doc__ is None:  # pragma: nocover
        enum.__doc__ = ""

    enum.__doc__ += ("\n\n"
                     "Attributes\n"
                     "----------\n")
    for member in list(enum):
        enum.__doc__ += "{} = {!r}\n".format(member.name, member.value)

    return enum
