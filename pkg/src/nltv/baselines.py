"""Nonlocal means, the filtering baseline the variational methods compare to."""

from . import backend
from .raster import as_raster
from .weights import similarity_weights


def nl_means(v, geom):
    """Weighted average over the search window, center included at weight 1.

    v_bar(i) = (v(i) + sum_o w_o(i) v(R(i + o))) / (1 + sum_o w_o(i))
    """
    v = as_raster(v, "noisy input")
    field = similarity_weights(v, geom)
    return backend.kernels.nl_means_kernel(v, field.planes, field.offsets)
