"""Exact-arithmetic engine for sign-refined combinatorial torsion.

Determinant lines of chain complexes, flat bundles on simplicial and CW
complexes, Euler structures, four torsion flavors, and the duality
pairing that ties them together, all over exact rationals.
"""

__version__ = "0.1.0"


class StructureError(ValueError):
    """Structurally invalid input (mismatched shapes, bad tags, ...)."""


class InvalidComplex(StructureError):
    """Boundary matrices fail d∘d = 0 or the complex is disconnected."""


class NotFlat(StructureError):
    """Edge transports violate the triangle compatibility condition."""


class NotUnimodular(StructureError):
    """The determinant of the monodromy is a nontrivial homomorphism."""


class NotAManifold(StructureError):
    """A codimension-one cell does not have exactly two top cofaces."""


class NonOrientable(StructureError):
    """Orientation propagation across top cells is inconsistent."""


class HypothesisViolation(StructureError):
    """A theorem verifier was fed a fixture outside its hypotheses."""
