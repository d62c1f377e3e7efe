"""Region tiling, trimmed aggregation and the localized solvers.

The image is covered by S_r x S_r regions whose origins advance by n_s
per axis, with a final origin clamped to dim - S_r so the cover is exact.
Each region is denoised independently; overlapping results are averaged.
Transforms leak artifacts into the outermost ring of a region, so a
one-pixel border is trimmed from every contribution except along edges
that lie on the image boundary (otherwise those pixels would lose all
their contributors). Regions run in ascending origin order, which fixes
the aggregation order and makes results reproducible bit for bit.
"""

import dataclasses

import numpy as np

from .raster import as_raster
from .spectral import dft2
from .variational import SolverConfig, StepSearchError, descend
from .weights import PatchGeometry, similarity_weights


@dataclasses.dataclass(frozen=True)
class RegionGrid:
    size: int
    origins_y: tuple
    origins_x: tuple


def _axis_origins(dim, size, step):
    origins = list(range(0, dim - size + 1, step))
    if origins[-1] + size < dim:
        origins.append(dim - size)
    return tuple(origins)


def tile(rows, cols, size, step):
    """Region origins covering an image exactly."""
    if size < 1 or step < 1:
        raise ValueError(f"size and step must be >= 1, got {size}, {step}")
    if size > rows or size > cols:
        raise ValueError(f"region {size} exceeds image {rows}x{cols}")
    return RegionGrid(size, _axis_origins(rows, size, step), _axis_origins(cols, size, step))


def trim_slices(origin_y, origin_x, size, rows, cols):
    """Contributing index ranges of a region, one-pixel border removed
    except along image-boundary edges. Returned in image coordinates."""
    y0 = origin_y if origin_y == 0 else origin_y + 1
    y1 = origin_y + size if origin_y + size == rows else origin_y + size - 1
    x0 = origin_x if origin_x == 0 else origin_x + 1
    x1 = origin_x + size if origin_x + size == cols else origin_x + size - 1
    return slice(y0, y1), slice(x0, x1)


@dataclasses.dataclass(frozen=True)
class LocalParams:
    """Everything a tiled run needs besides the image."""

    size: int = 16
    step: int = 6
    spatial: PatchGeometry | None = None
    frequency: PatchGeometry | None = None
    lam: float = 0.0
    lam_f: float = 0.0
    n_iter: int = 20
    beta: float = 1e-2
    t_init: float = 0.2
    trim: bool = True

    def solver_config(self):
        return SolverConfig(
            lam=self.lam,
            lam_f=self.lam_f,
            beta=self.beta,
            t_init=self.t_init,
            n_iter=self.n_iter,
        )


def denoise_tiled(v, params):
    """Run the descent per region and average the trimmed contributions."""
    v = as_raster(v, "noisy input")
    rows, cols = v.shape
    grid = tile(rows, cols, params.size, params.step)
    cfg = params.solver_config()
    acc = np.zeros((rows, cols))
    cnt = np.zeros((rows, cols))
    for oy in grid.origins_y:
        for ox in grid.origins_x:
            region = v[oy : oy + params.size, ox : ox + params.size].copy()
            spatial = None
            frequency = None
            if params.spatial is not None and params.lam > 0:
                spatial = similarity_weights(region, params.spatial)
            if params.frequency is not None and params.lam_f > 0:
                frequency = similarity_weights(dft2(region), params.frequency)
            try:
                trace = descend(region, cfg, spatial=spatial, frequency=frequency)
            except StepSearchError as exc:
                raise StepSearchError(f"region ({oy}, {ox}): {exc}", exc.trace) from exc
            if params.trim:
                sy, sx = trim_slices(oy, ox, params.size, rows, cols)
            else:
                sy = slice(oy, oy + params.size)
                sx = slice(ox, ox + params.size)
            ly = slice(sy.start - oy, sy.stop - oy)
            lx = slice(sx.start - ox, sx.stop - ox)
            acc[sy, sx] += trace.u[ly, lx]
            cnt[sy, sx] += 1.0
    if cnt.min() < 1.0:
        raise RuntimeError("tiling left uncovered pixels; trim/step combination invalid")
    return acc / cnt


def l_sfnltv(v, params):
    """Localized solver with both regularizers; trimmed aggregation."""
    if params.lam <= 0 or params.lam_f <= 0:
        raise ValueError("l_sfnltv needs lam > 0 and lam_f > 0")
    return denoise_tiled(v, params)


def l_variant(v, method, params):
    """Single-regularizer localized runs.

    'nltv' keeps the full region contribution (no transform edge effects);
    'fnltv' trims like the combined solver.
    """
    if method == "nltv":
        params = dataclasses.replace(params, lam_f=0.0, frequency=None, trim=False)
        if params.lam <= 0:
            raise ValueError("l_variant('nltv') needs lam > 0")
    elif method == "fnltv":
        params = dataclasses.replace(params, lam=0.0, spatial=None, trim=True)
        if params.lam_f <= 0:
            raise ValueError("l_variant('fnltv') needs lam_f > 0")
    else:
        raise ValueError(f"unknown local variant {method!r}")
    return denoise_tiled(v, params)
