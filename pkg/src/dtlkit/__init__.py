"""Exact computations in the dotted Temperley-Lieb category and Kirby-colored Khovanov homology.

Submodules:

* :mod:`dtlkit.algebra` -- rationals, Laurent polynomials, sparse graded matrices
* :mod:`dtlkit.dtl` -- dotted Temperley-Lieb diagrams and their normal forms
* :mod:`dtlkit.polyrep` -- the polynomial representation
* :mod:`dtlkit.karoubi` -- Jones-Wenzl projectors and symmetric objects
* :mod:`dtlkit.kirby` -- Kirby objects as truncated directed systems
* :mod:`dtlkit.tpc` -- the two-point category and handle slides
* :mod:`dtlkit.kdtl` -- diagrams with Kirby strands
* :mod:`dtlkit.khovanov` -- Khovanov homology of links, cables and colors
"""

__version__ = "0.1.0"
