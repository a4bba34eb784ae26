"""Quantum directional reference frame degradation and its random-walk model."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
