"""Sub-Riemannian X-ray transform on the reduced Heisenberg group.

Explicit singular value decomposition, adjoint and normal operators,
two-radius checks and coefficient-space reconstruction, each backed by a
direct quadrature of the defining line integral.
"""

from .core import (
    HeisenbergPoint,
    ModeIndex,
    QuadratureSpec,
    QuadratureTruncationWarning,
    RationalMomentum,
    basis_function,
    entry_function,
    geodesic,
    gram_matrix,
    group_inv,
    group_mul,
    inner_product,
    mode_grid,
)
from .fan import FanArrow, FanPoint, fan_action, fan_points
from .inversion import ReconstructionResult, TwoRadiusReport, reconstruct, two_radius_check
from .serialization import SignalFormatError, parse_signal, serialize_signal
from .special_functions import ZeroBracket, ZeroReport, bessel_j0, diagonal_laguerre, laguerre_eval, scan_zeros
from .xray import (
    PlanarAtom,
    SignalDecomposition,
    SingularSystem,
    adjoint_quadrature,
    adjoint_spectral,
    constant_audit,
    forward_spectral,
    normal_spectral,
    partial_isometry,
    singular_coefficient,
    svd_factors,
    xray_quadrature,
)

__version__ = "0.1.0"
