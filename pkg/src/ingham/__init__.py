"""Two-sided bounds for exponential sums over balls with computable constants, checked against Gram spectra."""

__version__ = "0.1.0"

from .ball import (
    RadialWindow,
    alpha_m_plus_1,
    ball_transform_g,
    ball_volume,
    bessel_j,
    dirichlet_mu,
    eigen_profile,
    first_bessel_zero,
    fourier_h,
    min_h_squared,
)
from .constants import ConstantChain, alpha_j, alpha_j_prime, alpha_zero, exponent, theorem_constants
from .gram import (
    DualFamily,
    GramMatrix,
    KahaneAssembly,
    RieszBounds,
    dual_family,
    gram_matrix,
    haraux_map,
    quadratic_form,
    rho_hat,
    riesz_bounds,
)
from .spectra import (
    FrequencyFamily,
    GapGeometry,
    PartitionedFamily,
    class_gaps,
    geometry,
    load_family,
    minimal_gap,
    one_d_mth_gap,
    residue_partition,
)
