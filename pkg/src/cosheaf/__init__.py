"""Exact cosheaf homology on finite sites.

Modules, bottom to top: matrix (Smith normal form), kmod (presented
modules), fincat (finite categories, sieves, sites), diagram (functors to
modules, (co)limits, Kan extensions), cech (Roos/Cech complexes and the
plus construction), satellite (projective resolutions and left satellites),
spectral (bicomplex spectral sequences), protower (towers of modules), cli.
"""

__version__ = "0.1.0"
