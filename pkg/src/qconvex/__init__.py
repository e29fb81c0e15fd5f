"""Spectral bounds and Betti certificates for q-convex hypersurfaces."""

__version__ = "0.1.0"

from .errors import DomainError, ScenarioParseError, ScenarioValidationError  # noqa: E402
from .exterior_basis import MultiIndex, enumerate_basis, index_sum, star_complement  # noqa: E402
from .exterior_operators import (  # noqa: E402
    ExteriorOperator,
    PrincipalSpectrum,
    closed_form_spectrum,
    dense_spectrum,
    extend,
    weitzenbock_extension,
)
from .curvature_bochner import (  # noqa: E402
    AmbientModel,
    TwoVectorOperator,
    bochner_contract,
    compress_ambient,
    extrinsic_operator,
    gauss_split,
    hat,
    kyfan_average,
)
from .convexity_bounds import (  # noqa: E402
    bochner_pointwise_bound,
    qconvex_margin,
    rigidity_check,
    tmin_lower_bound,
)
from .betti_engine import BettiCertificate, HypersurfaceSample, Status, certify  # noqa: E402
