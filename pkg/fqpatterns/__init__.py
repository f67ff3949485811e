"""Random subsets of finite vector spaces: pattern counts, thresholds, Poisson limits and free sets."""

__version__ = "0.1.0"
