"""Exact combinatorial verification of rank-1 toric GIT window skeletons.

All core arithmetic is integer/rational and deterministic; there is no
floating point anywhere in the computational path.
"""

__version__ = "0.1.0"
