"""Uncertain Quality-Diversity benchmark suite on the redundant planar arm.

Eight noise tasks over a planar N-joint arm, three MAP-Elites baselines,
illusory/corrected archive metrics and a reproducible CLI harness.
"""

__version__ = "0.1.0"

from uqdbench._backend import BACKEND
from uqdbench.errors import ConfigurationError, UsageError

__all__ = ["BACKEND", "ConfigurationError", "UsageError", "__version__"]
