"""Twin-beam generation in a parametric medium with idler loss.

Moment dynamics, exact and stepped propagation, the classical field model,
Gaussian entanglement measures and loss-optimisation sweeps.
"""

from ._core import BACKEND
from .classical import *  # noqa: F401,F403
from .config import ConfigError, RunConfig, load_config
from .dynamics import *  # noqa: F401,F403
from .errors import (
    EofSearchError,
    GainOverflowError,
    NonFiniteStateError,
    ParameterError,
    TwinBeamError,
    UnphysicalCovarianceError,
)
from .gaussian import *  # noqa: F401,F403
from .propagation import *  # noqa: F401,F403
from .sweep import *  # noqa: F401,F403

__version__ = "0.1.0"
