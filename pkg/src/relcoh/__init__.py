"""Relative sheaf cohomology on finite topological spaces, computed exactly over the rationals.

Modules: ratlin (exact linear algebra), homalg (complexes, cones, long exact
sequences), finspace (finite spaces and sheaves), godement (canonical flabby
resolutions and relative cohomology), cech (Čech and total complexes of
covering pairs), cylinder (mapping cylinders and cohomology of morphisms),
oracle (order-complex reference values) and cli (scenario runner).
"""

from .errors import RelcohError
from .finspace import ContinuousMap, FinSpace, Sheaf, SheafComplex, SheafMorphism
from .godement import godement_resolve, hypercohomology, rel_cohomology

__version__ = "0.1.0"

__all__ = ["ContinuousMap", "FinSpace", "RelcohError", "Sheaf", "SheafComplex", "SheafMorphism",
           "godement_resolve", "hypercohomology", "rel_cohomology"]
