"""Photon-pair fiber link model: dispersion of an entangled pair, detection
timing statistics, and BB84 key rates with temporal filtering."""

from pairlink._core import *  # noqa: F401,F403
from pairlink._core import __version__  # noqa: F401
