"""Variable-exponent ground-state toolkit."""

from vxgs._core import *  # noqa: F401,F403
from vxgs._core import __doc__  # noqa: F401
