"""Ordered Bratteli diagrams, Vershik maps and symbolic automorphisms.

Rational results are returned as fractions.Fraction, heights and ranks as int,
points as strings such as "110(0)" with the least significant digit first.
"""

try:
    from ._bvdyn import *  # noqa: F401,F403
    from ._bvdyn import __doc__ as _native_doc  # noqa: F401
except ImportError:
    from _bvdyn import *  # noqa: F401,F403

__version__ = "0.1.0"
