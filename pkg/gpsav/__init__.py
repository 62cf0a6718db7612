"""
gpsav - Gauss collocation SAV solver for the rotating Gross-Pitaevskii equation
"""

__version__ = "0.1.0"
__author__ = "drsanjula"
__license__ = "MIT"

from gpsav.config import ExperimentConfig

__all__ = ["ExperimentConfig", "__version__"]
