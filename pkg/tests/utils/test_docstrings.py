from enum import Enum

from oirl.utils.docstrings import add_enum_members_to_docstring


def test_add_enum_members_to_docstring_empty():
    # With and without existing docstring
    @add_enum_members_to_docstring
    class EmptyEnum(Enum):
        pass

    @add_enum_members_to_docstring
    class EmptyEnumWithDocstring(Enum):
        """An empty Enum."""

    assert EmptyEnum.__doc__.endswith(
        "\n\n"
        "Attributes\n"
        "----------\n")
    assert EmptyEnumWithDocstring.__doc__.endswith(
        "An empty Enum.\n"
        "\n"
        "Attributes\n"
        "----------\n")


def test_add_enum_members_to_docstring():
    @add_enum_members_to_docstring
    class MyEnum(Enum):
        """A populated Enum."""
        a = "first"
        b = 2

    assert MyEnum.__doc__.endswith(
        "A populated Enum.\n"
        "\n"
        "Attributes\n"
        "----------\n"
        "a = 'first'\n"
        "b = 2\n")
