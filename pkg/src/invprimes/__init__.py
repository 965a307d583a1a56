"""Invariant prime ideals of equivariant complex cobordism for abelian groups.

Submodules:

- ``abgroup``: finite(ly generated) abelian groups, subgroups stored through
  their annihilating character lattices, Smith/Hermite normal forms.
- ``spectrum``: points (B, n), the inclusion relation, closed sets V_f.
- ``witness``: explicit elements realizing a prescribed height function.
- ``fgl``: formal group laws, [n]-series, psi and the blueshift check.
- ``support``: supports of finite spectra from type functions.
- ``cli``: the ``invprimes`` command.
"""

from .abgroup import FgAbGroup, Homomorphism, Subgroup, enumerate_subgroups
from .spectrum import (
    INF,
    AdmissibleFn,
    CircleContext,
    CircleFn,
    ClosedSet,
    PrimePoint,
    SpecContext,
    closure,
    includes,
    includes_crossprime,
    is_admissible,
)
from .support import TRIVIAL, TypeFunction, balmer_compare, support_of
from .witness import realize, verify_realization

__version__ = "0.1.0"
