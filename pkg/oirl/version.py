"""The current oirl version number. This definition is used throughout the
software."""
__version__ = "0.1.0"
