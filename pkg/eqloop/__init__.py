"""
eqloop: exact rational computations of equivariant loop-space cohomology.

Packages:
    linalg        exact sparse linear algebra over the rationals
    algebra       graded-commutative presentations and their degree bases
    cdga          CDGA cohomology, Massey products, indecomposables
    bar           two-sided bar complex, shuffle product, passage to tensor products over R
    pipeline      Tor computation with cross-checks and the invariant suite
    extractors    presentation file parsing
    transformers  report shaping
    loaders       report writing and the basis cache
"""

__version__ = "0.3.0"
