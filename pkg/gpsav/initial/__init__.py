"""
Initial data for gpsav runs
"""

from gpsav.initial.base import InitialCondition, InitialSpec
from gpsav.initial.registry import InitialRegistry, get_registry

__all__ = [
    "InitialCondition",
    "InitialSpec",
    "InitialRegistry",
    "get_registry",
]
