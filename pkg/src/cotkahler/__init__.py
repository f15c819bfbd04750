"""Numerical construction and verification of natural diagonal Kahler-Einstein
structures on the cotangent bundle of a space form."""

from .bundle import CotangentPoint, NaturalStructure
from .params import LambdaFamily, coefficients
from .spaceform import SpaceFormChart, metric_at

__version__ = "0.1.0"

__all__ = ["CotangentPoint", "LambdaFamily", "NaturalStructure", "SpaceFormChart",
           "coefficients", "metric_at", "__version__"]
