"""Restricted invertibility for matrices and continuous matrix paths.

Setting ``RI_THREADS`` caps the BLAS thread pools.  It only takes effect if
this package is imported before numpy, as the ``resinv`` command does.
"""

import os

if os.environ.get("RI_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["RI_THREADS"])

from resinv.errors import (
    CertificationFailed,
    DependentColumns,
    DimensionMismatch,
    NoOverlap,
    NotAProjection,
    OutOfDomain,
    RankChanged,
    RankMismatch,
    RefinementFailed,
    RefinementLimit,
    ResinvError,
    SearchFailed,
    SelectionFailed,
    SpanMismatch,
    StretchViolation,
    TooLarge,
)
from resinv.linalg import (
    Subspace,
    coordinate_subspace,
    hs_norm,
    min_stretch,
    operator_norm,
    orthonormalize,
    projection_of,
    restricted_min_stretch,
    subspace_distance,
)

__version__ = "0.1.0"

__all__ = [
    "CertificationFailed",
    "DependentColumns",
    "DimensionMismatch",
    "NoOverlap",
    "NotAProjection",
    "OutOfDomain",
    "RankChanged",
    "RankMismatch",
    "RefinementFailed",
    "RefinementLimit",
    "ResinvError",
    "SearchFailed",
    "SelectionFailed",
    "SpanMismatch",
    "StretchViolation",
    "Subspace",
    "TooLarge",
    "coordinate_subspace",
    "hs_norm",
    "min_stretch",
    "operator_norm",
    "orthonormalize",
    "projection_of",
    "restricted_min_stretch",
    "subspace_distance",
]
