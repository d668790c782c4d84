"""Design-to-vector toolkit: C++ core with python bindings."""

from ._chipvec import *  # noqa: F401,F403
from ._chipvec import __version__  # noqa: F401
