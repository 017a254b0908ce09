"""Numerical toolkit for jump counts, variation seminorms, and the averaging
operators they control: dyadic decompositions, Fourier multipliers over convex
bodies and monomial curves, oscillatory-integral bounds, and the experiment
harness that measures their constants."""

__version__ = "0.1.0"

from .averaging import (
    KernelCheckReport,
    KernelSpec,
    avg_convex,
    avg_discrete_cube,
    discrete_cube_axis_symbol,
    discrete_cube_family,
    discrete_symbol,
    kernel_smoothness_check,
    psi_increment,
    radon_average,
    radon_singular,
    radon_symbol,
)
from .bodies import ConvexBodySpec
from .errors import InvalidArgumentError, NumericFailureError
from .fourier import (
    EnvelopeReport,
    LatticeField,
    SymbolFamily,
    apply_multiplier,
    cube_average_family,
    envelope_family,
    littlewood_paley_family,
    littlewood_paley_symbol,
    off_diagonal_decay,
    poisson_family,
    poisson_symbol,
    symbol_envelope_check,
)
from .geometry import (
    BoundaryMeasureResult,
    MonomialMap,
    boundary_neighborhood_measure,
    quasi_norm,
)
from .moduli import DiniResult, ModulusOfContinuity, dini_norms
from .oscillatory import (
    AmplitudeSpec,
    PhaseSpec,
    ProductAmplitude,
    integrated_difference,
    vdc_1d,
    vdc_multidim,
)
from .variation import (
    ExponentRecord,
    FieldOfPaths,
    JumpProfile,
    SampledPath,
    bootstrap_fixed_point,
    chain_thresholds_batch,
    interpolation_exponents,
    jump_breakpoints,
    jump_count,
    jump_count_batch,
    jump_seminorm,
    jump_seminorm_from_thresholds,
    lewko_bound,
    long_short_split,
    variation,
    variation_batch,
)

__all__ = [
    "AmplitudeSpec",
    "BoundaryMeasureResult",
    "ConvexBodySpec",
    "DiniResult",
    "EnvelopeReport",
    "ExponentRecord",
    "FieldOfPaths",
    "InvalidArgumentError",
    "JumpProfile",
    "KernelCheckReport",
    "KernelSpec",
    "LatticeField",
    "ModulusOfContinuity",
    "MonomialMap",
    "NumericFailureError",
    "PhaseSpec",
    "ProductAmplitude",
    "SampledPath",
    "SymbolFamily",
    "apply_multiplier",
    "avg_convex",
    "avg_discrete_cube",
    "boundary_neighborhood_measure",
    "bootstrap_fixed_point",
    "chain_thresholds_batch",
    "cube_average_family",
    "dini_norms",
    "discrete_cube_axis_symbol",
    "discrete_cube_family",
    "discrete_symbol",
    "envelope_family",
    "integrated_difference",
    "interpolation_exponents",
    "jump_breakpoints",
    "jump_count",
    "jump_count_batch",
    "jump_seminorm",
    "jump_seminorm_from_thresholds",
    "kernel_smoothness_check",
    "lewko_bound",
    "littlewood_paley_family",
    "littlewood_paley_symbol",
    "long_short_split",
    "off_diagonal_decay",
    "poisson_family",
    "poisson_symbol",
    "psi_increment",
    "quasi_norm",
    "radon_average",
    "radon_singular",
    "radon_symbol",
    "symbol_envelope_check",
    "variation",
    "variation_batch",
    "vdc_1d",
    "vdc_multidim",
]
