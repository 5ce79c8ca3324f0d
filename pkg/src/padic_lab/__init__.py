"""Exact finite-precision p-adic analysis: series, traces, Lubin-Tate modules."""

from .padics import (
    INFINITE,
    AtLeast,
    Exact,
    ExtElem,
    LocalField,
    PadicApprox,
    PrecisionError,
    Qp,
    ValResult,
    field_create,
    vmin,
    vp,
)
from .powseries import (
    TruncSeries,
    gauss_V,
    newton_polygon,
    root_valuations,
    weierstrass_divide,
    weierstrass_prep,
    wideg,
)
from .ltlike import (
    LTLike,
    boundary_gap,
    cyclotomic_P,
    lambda_sum_oracle,
    ltlike_check,
    psi,
    psi_iter,
    psi_iter_zero,
    psibound_check,
    shell_sup,
    standard_P,
)
from .lubintate import FormalModule, lt_exp, lt_group_law, lt_log, lt_mult, pn_polys
from .boundary import bn_select, constfun_build, extract_coeff
from .fourier import (
    CharCoeffs,
    FiniteFunction,
    FiniteMeasure,
    amice,
    fourier_forward,
    fourier_invert,
    mahler_coeffs,
    mahler_eval,
    peano_map,
)

__version__ = "0.1.0"
