"""Two quantum dots on a plasmonic waveguide: scattering, entanglement and storage."""

from ._plasmonqd import *  # noqa: F401,F403
from ._plasmonqd import __version__  # noqa: F401
