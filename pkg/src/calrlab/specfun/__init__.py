"""Special functions: scaled spherical Bessel machinery and vector spherical harmonics."""

from .scaled import ScaledArray, ScaledComplex, collapse
from .bessel import (
    hat_h1,
    hat_jy,
    hat_wronskian,
    log_dfact_minus,
    log_dfact_plus,
    normalized_bessel,
    spherical_bessel,
    sph_jy,
    wronskian_residual,
)
from .vsh import VshTriple, sphere_rule, sph_harm_y, vsh, vsh_coeffs, vsh_table

__all__ = [
    "ScaledArray",
    "ScaledComplex",
    "collapse",
    "hat_h1",
    "hat_jy",
    "hat_wronskian",
    "log_dfact_minus",
    "log_dfact_plus",
    "normalized_bessel",
    "spherical_bessel",
    "sph_jy",
    "wronskian_residual",
    "VshTriple",
    "sphere_rule",
    "sph_harm_y",
    "vsh",
    "vsh_coeffs",
    "vsh_table",
]
