"""
Exact copula bounds and maximal asymmetry for a prescribed diagonal section
"""

__version__ = "1.0.0"
__author__ = "Diagonal Copula Bounds Team"
