"""Three-qubit SLOCC entanglement classification via Freudenthal triple system rank."""

from .classifier import (
    Classification,
    EntanglementClass,
    FtsRank,
    RealOrbitTag,
    ToleranceConfig,
    classify,
    classify_conventional,
    classify_fts,
    classify_real,
    hierarchy_export,
    rank1_witness,
)
from .fts import FtsElement
from .invariants import from_fts, invariant_report, representative, to_fts
from .jordan import JordanElement
from .scalars import GaussianRational
from .slocc import LocalOperator, apply_slocc, orbit_dimension, random_slocc

__all__ = [
    "Classification",
    "EntanglementClass",
    "FtsElement",
    "FtsRank",
    "GaussianRational",
    "JordanElement",
    "LocalOperator",
    "RealOrbitTag",
    "ToleranceConfig",
    "apply_slocc",
    "classify",
    "classify_conventional",
    "classify_fts",
    "classify_real",
    "from_fts",
    "hierarchy_export",
    "invariant_report",
    "orbit_dimension",
    "random_slocc",
    "rank1_witness",
    "representative",
    "to_fts",
]
