"""Symmetric Denjoy circle maps at fixed binary precision.

Construct a circle homeomorphism with prescribed irrational rotation number
that commutes with the rotation by 1/m and has a minimal invariant Cantor
set, evaluate it (and its planar extension with an attracting origin) to a
requested tolerance, and verify the defining invariants numerically.
"""

from .cantor import (
    DEFAULT_EPS,
    NEAR_CANTOR,
    CantorApprox,
    GapSchedule,
    InGap,
    OrbitIndex,
)
from .circle import (
    DEFAULT_BITS,
    EPSILON_CMP_TICKS,
    Arc,
    CirclePoint,
    LiftValue,
    arc_contains,
    cyclic_order,
    dist_T,
    rotate,
)
from .config import (
    BuildConfig,
    System,
    build_artifact,
    build_system,
    load_artifact,
    system_from_artifact,
    write_artifact,
)
from .denjoy import DenjoyMap, Estimate, OrbitTrace, PureRotation
from .errors import (
    ConfigInvalid,
    DegenerateTriple,
    DepthExceeded,
    ErrorBudgetExceeded,
    NegativeRadius,
    PrecisionCollision,
    SymdenjoyError,
    UnsupportedRender,
)
from .planar import AdmissibleMap, BumpValue, PlanarPoint
from .verify import VerifyReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "AdmissibleMap",
    "Arc",
    "BuildConfig",
    "BumpValue",
    "CantorApprox",
    "CirclePoint",
    "ConfigInvalid",
    "DEFAULT_BITS",
    "DEFAULT_EPS",
    "DegenerateTriple",
    "DenjoyMap",
    "DepthExceeded",
    "EPSILON_CMP_TICKS",
    "ErrorBudgetExceeded",
    "Estimate",
    "GapSchedule",
    "InGap",
    "LiftValue",
    "NEAR_CANTOR",
    "NegativeRadius",
    "OrbitIndex",
    "OrbitTrace",
    "PlanarPoint",
    "PrecisionCollision",
    "PureRotation",
    "SymdenjoyError",
    "System",
    "UnsupportedRender",
    "VerifyReport",
    "arc_contains",
    "build_artifact",
    "build_system",
    "cyclic_order",
    "dist_T",
    "load_artifact",
    "rotate",
    "run_verification",
    "system_from_artifact",
    "write_artifact",
]
