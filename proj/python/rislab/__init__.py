"""Average secrecy throughput of reflecting-surface-assisted aerial links.

Thin wrapper over the compiled core; see the project README for the full
C++ and CLI surface.
"""

from ._rislab import *  # noqa: F401,F403
from ._rislab import __version__  # noqa: F401
