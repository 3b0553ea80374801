"""Exact-arithmetic toolkit for rank-zero twist certificates on y^2 = x^3 + 2.

Everything lives in the native module; this package just re-exports it.
Integers cross the boundary exactly (arbitrary precision on both sides).
"""

from twistrank._core import *  # noqa: F401,F403
from twistrank._core import __version__  # noqa: F401
