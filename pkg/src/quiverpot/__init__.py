"""quiverpot: exact computer algebra for quivers with (twisted) superpotentials.

Subpackages/modules:

* ``field``     -- exact cyclotomic arithmetic and canonical linear algebra
* ``paths``     -- quivers, paths, tensor elements, derivatives, twists
* ``quotient``  -- derivation-quotient algebras, Hilbert data, Koszul duals
* ``mckay``     -- finite matrix groups, McKay quivers, group potentials
* ``complexes`` -- self-dual Koszul (N-)complexes and their certification
* ``sklyanin``  -- the 4-generator elliptic family and its degenerations
* ``cli``       -- command-line front end
"""
from __future__ import annotations

__version__ = "0.1.0"

from .field import (  # noqa: F401
    CycField,
    CycNum,
    Matrix,
    Subspace,
    cyclotomic_polynomial,
    mat_nullspace,
    mat_rank,
    parse_cyc,
    rat,
    subspace_meet,
)
