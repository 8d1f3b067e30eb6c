"""Executable coarse geometry on finite metric spaces."""
from .config import DEFAULT_TOL, get_tol, set_tol, tolerance
from .errors import (
    CoarseError,
    InternalInconsistencyError,
    PostconditionError,
    PreconditionError,
    PseudometricWarning,
    ValidationError,
)
from .metric import (
    Cover,
    FiniteMetricSpace,
    ball,
    coarse_disjoint_union,
    family_diameter,
    horizon,
    horizon_counts,
    lebesgue_number,
    multiplicity,
    neighborhood,
    separated_net,
    shrink,
    thicken,
)
from .pou import PartitionOfUnity, PropertyAWitness, SparseL1Vector, pou_metrics

__version__ = "0.1.0"
