"""Unit n-sphere fibrations of regions of R^{2n+1} for n in {1, 3, 7}."""

from .errors import (
    DegenerateConfigurationError,
    DegeneratePairError,
    InvalidArgumentError,
    NotInRegionError,
    OutOfRegionError,
    UndefinedLinkednessError,
    UnitFibersError,
    UnsupportedFormatError,
)
from .fibration import (
    Fiber,
    FibrationSpec,
    bialy_locate,
    locate_fiber,
    stack,
    standard_fiber,
    villarceau_fiber,
)
from .geometry import (
    IntersectionGeometry,
    disjointness_certificate,
    linked,
    min_distance_sampled,
    pair_geometry,
    point_sphere_distance,
    sphere_section,
)
from .harness import VerificationReport, export_fibers, linking_matrix, verify_construction
from .hypercomplex import HypercomplexElement, imaginary_left_multiply, multiply
from .linalg import AffineSubspace, affine_intersect, orthonormalize, span_dim
from .skew import (
    fiber_to_skew_plane,
    hurwitz_radon,
    skew,
    skew_fibration_exists,
    unit_fibration_dimension_admissible,
)

__version__ = "0.1.0"
