"""Exact construction of differential Poincare duality algebras.

Given a finite-type CDGA whose cohomology is a simply-connected Poincare
duality algebra in dimension n >= 7, the pipeline produces a
quasi-isomorphic CDGA whose underlying graded algebra satisfies duality on
the nose, together with the explicit chain algebra map and an independent
verification of every claimed property.  All arithmetic is exact.
"""
from .cdga import (
    CDGA,
    ChainAlgebraMap,
    Finding,
    GradedSubspaceFamily,
    InternalCheckError,
    compose,
)
from .cohomology import CohomologyRing, check_H_PD, is_quasi_iso
from .duality import (
    Orientation,
    OrientedCDGA,
    derive_orientation,
    is_pd_cdga,
    orphans,
    pd_quotient,
)
from .exactfield import Matrix, PrimeField, QQ, Rationals, Subspace
from .pipeline import (
    HypothesisRejected,
    PipelineResult,
    check_hypotheses,
    formal_model,
    run,
    verify,
)
from .surgery import surgery_step

__version__ = "0.1.0"

__all__ = [
    "CDGA",
    "ChainAlgebraMap",
    "CohomologyRing",
    "Finding",
    "GradedSubspaceFamily",
    "HypothesisRejected",
    "InternalCheckError",
    "Matrix",
    "Orientation",
    "OrientedCDGA",
    "PipelineResult",
    "PrimeField",
    "QQ",
    "Rationals",
    "Subspace",
    "check_H_PD",
    "check_hypotheses",
    "compose",
    "derive_orientation",
    "formal_model",
    "is_pd_cdga",
    "is_quasi_iso",
    "orphans",
    "pd_quotient",
    "run",
    "surgery_step",
    "verify",
]
