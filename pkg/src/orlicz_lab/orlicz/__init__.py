"""Orlicz functions, conjugates, Delta-conditions and growth indices."""
from .conditions import (
    DeltaVerdict,
    LinearNearZero,
    default_probes,
    delta0_verdict,
    delta2_verdict,
    linear_near_zero_criterion,
)
from .conjugate import ConjugationGrid, conjugate, fenchel_young_gap, legendre_sweep
from .functions import (
    CATALOG,
    CatalogEntry,
    QuadLog,
    LinearSpliced,
    OrliczFunction,
    PhiA,
    PhiB,
    PhiR,
    Power,
    TabulatedConvex,
    VallePoussinSum,
    evaluate,
    make_catalog,
    right_derivative,
)
from .indices import (
    IndexReport,
    growth_indices,
    index_duality_residual,
    matuszewska_indices,
    simonenko_indices,
    simonenko_ratio,
    simonenko_ratio_criterion,
)

__all__ = [
    "CATALOG", "CatalogEntry", "ConjugationGrid", "DeltaVerdict", "QuadLog",
    "IndexReport", "LinearNearZero", "LinearSpliced", "OrliczFunction", "PhiA",
    "PhiB", "PhiR", "Power", "TabulatedConvex", "VallePoussinSum", "conjugate",
    "default_probes", "delta0_verdict", "delta2_verdict", "evaluate",
    "fenchel_young_gap", "growth_indices", "index_duality_residual",
    "legendre_sweep", "linear_near_zero_criterion", "make_catalog",
    "matuszewska_indices", "right_derivative", "simonenko_indices",
    "simonenko_ratio", "simonenko_ratio_criterion",
]
