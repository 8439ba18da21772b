"""
Finite-population randomization inference

Neymanian and Fisherian tests of the average causal effect for completely
randomized, matched-pair and balanced 2^K factorial experiments, with the
variance estimators that separate them and a simulation harness that
measures how often each test rejects.
"""

from .core.config import settings

__version__ = settings.APP_VERSION
