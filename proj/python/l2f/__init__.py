"""Multiexponential decay analysis via Hermite-function Fourier estimation."""

try:
    from ._l2f import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _l2f import *  # noqa: F401,F403  (in-tree build: _l2f on PYTHONPATH)

__version__ = "0.1.0"
