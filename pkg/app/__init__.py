"""
Lagrangian configuration toolkit: Novikov series, the orbifold superpotential,
radial spectral estimators, Hofer bounds and recurrence combinatorics
"""

__version__ = "0.1.0"
