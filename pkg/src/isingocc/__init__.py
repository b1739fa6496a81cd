"""Exact antiferromagnetic Ising occupancy fractions on cubic graphs.

Modules:

* :mod:`isingocc.numerics` exact rationals, rational intervals, the critical field
* :mod:`isingocc.graphs` graph6, canonical labels, cubic graph generation
* :mod:`isingocc.ising` partition functions and occupancy fractions by enumeration
* :mod:`isingocc.localviews` depth-2 local views and their statistics
* :mod:`isingocc.lp` occupancy linear programs with an exact simplex
* :mod:`isingocc.certify` dual certificates, pointwise and over regions
* :mod:`isingocc.scan` parameter-grid scans over graph catalogs
* :mod:`isingocc.cli` the ``isingocc`` command
"""

__version__ = "0.1.0"
