from oirl.version import __version__
