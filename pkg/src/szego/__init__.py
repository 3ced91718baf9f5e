"""Alpha-harmonic extensions on the unit ball: kernels, sharp gradient
bounds by exponent regime, and Landau-type univalence radii.

The HTTP facade lives in szego.service and the command line in szego.cli;
both stay out of this namespace so importing the library never pulls in
the web stack.
"""

from .hypergeom import (
    DivergenceError,
    PrecisionError,
    gamma_fn,
    hyp_pFq,
    pochhammer,
    two_F_one_at_one,
)
from .kernel import (
    BallPoint,
    ProblemParams,
    UnitDirection,
    c_n_alpha,
    kernel_gradient,
    kernel_mass,
    kernel_value,
)
from .landau import (
    G_fn,
    InfeasibleError,
    LandauResult,
    MatrixFunctionals,
    UnivalenceReport,
    g_fn,
    landau_radius,
    matrix_functionals,
    n_star,
    psi,
    verify_univalence,
)
from .poisson import (
    BoundaryData,
    JacobianMatrix,
    alpha_laplacian_residual,
    lp_norm,
    poisson_extend,
    poisson_jacobian,
)
from .sharp_bounds import (
    BoundValue,
    ExponentPair,
    I_bruteforce,
    J_term,
    K_alpha,
    RegimeTag,
    c_infty_direction,
    c_infty_sup,
    classify_regime,
    i_direction_sweep,
    regime_thresholds,
    script_I,
    script_J,
    sphere_abs_moment,
    sup_I_closed,
    sup_I_global,
    thm11_coefficient,
    thm12_coefficient,
)
from .sphere import (
    QuadratureError,
    SphereRule,
    liu_identity,
    liu_identity_euler,
    monte_carlo_sphere,
    reduce_bizonal,
    reduce_zonal,
    sphere_samples,
    zonal_constant,
)

__all__ = [
    "BallPoint",
    "BoundValue",
    "BoundaryData",
    "DivergenceError",
    "ExponentPair",
    "G_fn",
    "I_bruteforce",
    "InfeasibleError",
    "J_term",
    "JacobianMatrix",
    "K_alpha",
    "LandauResult",
    "MatrixFunctionals",
    "PrecisionError",
    "ProblemParams",
    "QuadratureError",
    "RegimeTag",
    "SphereRule",
    "UnitDirection",
    "UnivalenceReport",
    "alpha_laplacian_residual",
    "c_infty_direction",
    "c_infty_sup",
    "c_n_alpha",
    "classify_regime",
    "g_fn",
    "gamma_fn",
    "hyp_pFq",
    "i_direction_sweep",
    "kernel_gradient",
    "kernel_mass",
    "kernel_value",
    "landau_radius",
    "liu_identity",
    "liu_identity_euler",
    "lp_norm",
    "matrix_functionals",
    "monte_carlo_sphere",
    "n_star",
    "pochhammer",
    "poisson_extend",
    "poisson_jacobian",
    "psi",
    "reduce_bizonal",
    "reduce_zonal",
    "regime_thresholds",
    "script_I",
    "script_J",
    "sphere_abs_moment",
    "sphere_samples",
    "sup_I_closed",
    "sup_I_global",
    "thm11_coefficient",
    "thm12_coefficient",
    "two_F_one_at_one",
    "verify_univalence",
    "zonal_constant",
]
