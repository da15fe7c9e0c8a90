"""Entropy bookkeeping for purified quantum systems."""

from ._qentropy import *  # noqa: F401,F403
from ._qentropy import __doc__  # noqa: F401
