"""Gaussian peak fitting by weighted log-domain least squares."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
