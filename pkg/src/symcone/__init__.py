"""Exact computation with group-symmetric Shannon cones.

Everything here is exact (Python ints and fractions); floating point is
never used for a mathematical decision. The package covers permutation
groups of degree at most 7: orbit structures on the subset lattice, the
symmetrized Shannon cone in H-representation, extreme-ray enumeration by
the double description method, entropic/non-entropic certificates for the
rays, and the resulting tightness classification.
"""

__version__ = "0.1.0"

from symcone.perm import (  # noqa: F401
    Permutation,
    PermGroup,
    parse_perm,
    compose,
    group_closure,
    are_conjugate,
    enumerate_subgroup_classes,
)
