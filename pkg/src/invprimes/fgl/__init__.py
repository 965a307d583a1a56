"""Formal group law engine: coefficient rings, truncated series, laws, psi."""

from .laws import (
    FailedAxiom,
    FormalGroupLaw,
    HeightResult,
    additive,
    base_change_field,
    fgl_axioms_check,
    fgl_height,
    formal_inverse,
    honda,
    multiplicative,
    n_series,
    reduce_mod_In,
    universal_p_typical,
)
from .level import (
    BlueshiftReport,
    LevelData,
    blueshift_degree,
    blueshift_report,
    check_level,
    gm_c2,
    level_vbar,
    psi,
    psi_by_composition,
    trivial_level,
)
from .rings import (
    FiniteField,
    GradedPoly,
    Integers,
    IntegersModM,
    NotDivisible,
    PrimeField,
    Rationals,
    ZLocal,
)
from .series import TruncSeries, exact_divide

__all__ = [name for name in dir() if not name.startswith("_")]
