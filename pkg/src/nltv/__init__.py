"""Grayscale denoising with nonlocal total variation in the pixel and
frequency domains, risk-driven regularization strength selection, and a
tiled local solver for large images."""

from .backend import backend_name
from .baselines import nl_means
from .local import LocalParams, RegionGrid, denoise_tiled, l_sfnltv, l_variant, tile, trim_slices
from .raster import NoiseSpec, add_gaussian_noise, gaussian_field, mse, psnr, reflect_index
from .spectral import dft2, idft2, idft2_real
from .sure import (
    SureReport,
    gradient_jacobian,
    region_selection,
    select_lambda,
    sure_trace,
    sure_value,
    weight_derivative,
)
from .variational import (
    DescentTrace,
    SolverConfig,
    StepSearchError,
    descend,
    fnltv_energy,
    fnltv_gradient,
    nl_magnitude,
    nltv_energy,
    nltv_gradient,
    nonlocal_magnitude,
    sfnltv_energy,
    sfnltv_gradient,
)
from .weights import PatchGeometry, WeightField, patch_distance, similarity_weights, tv_weights

__version__ = "0.1.0"

__all__ = [
    "DescentTrace",
    "LocalParams",
    "NoiseSpec",
    "PatchGeometry",
    "RegionGrid",
    "SolverConfig",
    "StepSearchError",
    "SureReport",
    "WeightField",
    "add_gaussian_noise",
    "backend_name",
    "denoise_tiled",
    "descend",
    "dft2",
    "fnltv_energy",
    "fnltv_gradient",
    "gaussian_field",
    "gradient_jacobian",
    "idft2",
    "idft2_real",
    "l_sfnltv",
    "l_variant",
    "mse",
    "nl_magnitude",
    "nl_means",
    "nltv_energy",
    "nltv_gradient",
    "nonlocal_magnitude",
    "patch_distance",
    "psnr",
    "reflect_index",
    "region_selection",
    "select_lambda",
    "sfnltv_energy",
    "sfnltv_gradient",
    "similarity_weights",
    "sure_trace",
    "sure_value",
    "tile",
    "trim_slices",
    "tv_weights",
    "weight_derivative",
]
