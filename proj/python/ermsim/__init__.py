"""l1-constrained ERM simulation toolkit for dependent heavy-tailed data."""

try:
    from ._ermsim import *  # noqa: F401,F403
    from . import _ermsim as _core  # noqa: F401
except ImportError:  # development layout: extension on PYTHONPATH
    from _ermsim import *  # noqa: F401,F403
    import _ermsim as _core  # noqa: F401

__version__ = "0.1.0"
