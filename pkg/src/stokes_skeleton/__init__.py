"""Finite combinatorial presenters for Stokes torsors.

Submodules:

* ``groups``: finite label groups, homomorphisms, unipotent Stokes groups
* ``groupoid``: presented groupoids, finite groupoids, functor enumeration
* ``complex2``: stratified 2-complexes, builders, subdivision, cellular actions
* ``cocycles``: edge-labelled cocycles modulo vertex gauge
* ``descent``: equivariant cocycles and comparison with the orbit complex
* ``presenters``: strict pushouts, cocone counting, curve presenters
* ``glp``: the explicit one-chart groupoid in double precision
* ``cli``: the ``stokes`` command
"""

__version__ = "0.1.0"

from .cocycles import classify, enumerate_cocycles, subdivision_invariance, validate
from .complex2 import (StratComplex2, barycentric_subdivide, build_cone, build_cycle,
                       build_torus_chambers, build_triangle)
from .descent import descent_compare
from .groupoid import (FiniteGroupoid, PresentedGroupoid, count_iso_classes, enumerate_functors)
from .groups import LabelGroup, cyclic_group, symmetric_group
from .presenters import build_pushout, curve_report, rep_fiber_product_check

__all__ = [
    "FiniteGroupoid", "LabelGroup", "PresentedGroupoid", "StratComplex2", "barycentric_subdivide",
    "build_cone", "build_cycle", "build_pushout", "build_torus_chambers", "build_triangle", "classify",
    "count_iso_classes", "curve_report", "cyclic_group", "descent_compare", "enumerate_cocycles",
    "enumerate_functors", "rep_fiber_product_check", "subdivision_invariance", "symmetric_group", "validate",
]
