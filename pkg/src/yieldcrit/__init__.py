"""Seven-parameter yield criterion for frictional and quasibrittle materials.

Evaluation, exact stress gradients, convexity certification, reductions to
the classical criteria, section sampling and calibration to experimental
yield data, all in the Haigh-Westergaard (principal stress) setting.
"""

from .errors import (
    CornerCase,
    DegenerateDirection,
    DegenerateState,
    DomainError,
    EmptySlice,
    InsufficientData,
    OutsideCap,
    ParseError,
    ShapeMismatch,
    UnboundedDomain,
    ValidationError,
    YieldCritError,
)
from .invariants import (
    DeviatoricFrame,
    Invariants,
    deviatoric_frame,
    invariant_gradients,
    invariants,
    principal_from_invariants,
)
from .criterion import (
    CapMeridian,
    CosineLode,
    Criterion,
    GradientDecomposition,
    GudehusArgyris,
    LinearMeridian,
    PowerLaw,
    WillamWarnke,
    YieldParams,
    criterion_from_dict,
    deviatoric_g,
    gradient,
    meridian_f,
    normal_limits,
    surface_q,
    yield_value,
)
from .convexity import (
    ConvexityReport,
    beta_bound,
    certify,
    deviatoric_curvature,
    hessian_qg,
    meridian_convexity_check,
    nonconvex_demo,
    powerlaw_beta_max,
)
from .limits import (
    CoulombMohr,
    DruckerPrager,
    LimitRealization,
    ModifiedCamClay,
    ModifiedTresca,
    Tresca,
    VonMises,
    bp_to_deshpande_fleck,
    coulomb_mohr_generalized,
    deshpande_fleck_to_bp,
    gurson_equivalent,
    gurson_meridian_q,
    gurson_yield,
    newman_invariants,
    newman_strength,
    realize,
)
from .calibration import (
    FitDataset,
    FitProblem,
    FitResult,
    fit,
    goodness,
    load_dataset,
    residuals,
)
from .sections import (
    SectionCurve,
    curve_to_csv,
    curve_to_svg,
    normalized_residual,
    polygon_is_convex,
    sample_biaxial,
    sample_deviatoric,
    sample_meridian,
)

__version__ = "1.0.0"

__all__ = [
    "CapMeridian",
    "ConvexityReport",
    "CornerCase",
    "CosineLode",
    "CoulombMohr",
    "Criterion",
    "DegenerateDirection",
    "DegenerateState",
    "DeviatoricFrame",
    "DomainError",
    "DruckerPrager",
    "EmptySlice",
    "FitDataset",
    "FitProblem",
    "FitResult",
    "GradientDecomposition",
    "GudehusArgyris",
    "InsufficientData",
    "Invariants",
    "LimitRealization",
    "LinearMeridian",
    "ModifiedCamClay",
    "ModifiedTresca",
    "OutsideCap",
    "ParseError",
    "PowerLaw",
    "SectionCurve",
    "ShapeMismatch",
    "Tresca",
    "UnboundedDomain",
    "ValidationError",
    "VonMises",
    "WillamWarnke",
    "YieldCritError",
    "YieldParams",
    "beta_bound",
    "bp_to_deshpande_fleck",
    "certify",
    "coulomb_mohr_generalized",
    "criterion_from_dict",
    "curve_to_csv",
    "curve_to_svg",
    "deshpande_fleck_to_bp",
    "deviatoric_curvature",
    "deviatoric_frame",
    "deviatoric_g",
    "fit",
    "goodness",
    "gradient",
    "gurson_equivalent",
    "gurson_meridian_q",
    "gurson_yield",
    "hessian_qg",
    "invariant_gradients",
    "invariants",
    "load_dataset",
    "meridian_convexity_check",
    "meridian_f",
    "newman_invariants",
    "newman_strength",
    "nonconvex_demo",
    "normal_limits",
    "normalized_residual",
    "polygon_is_convex",
    "powerlaw_beta_max",
    "principal_from_invariants",
    "realize",
    "residuals",
    "sample_biaxial",
    "sample_deviatoric",
    "sample_meridian",
    "surface_q",
    "yield_value",
]
