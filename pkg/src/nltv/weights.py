"""Patch-similarity weight fields over pixel or frequency grids.

A weight field stores, for every grid point i and every window offset o,
the similarity weight between i and its (reflected) neighbor at i + o:

    w(i, j) = exp(-pd(i, j) / (2 sigma_r^2))
    pd(i, j) = sum_p a(p) |f(R(i+p)) - f(R(j+p))|^2 / sum_p a(p)

with a Gaussian patch kernel a(p) = exp(-|p|^2 / (2 sigma_s^2)) and
sigma_s = (d - 1) / 4 unless overridden (d = 1 means a single sample with
unit kernel). The field is built once from the noisy input and stays
fixed during descent. For in-range pairs the construction is symmetric
term for term, so w(i -> j) and w(j -> i) are bit-identical.
"""

import dataclasses

import numpy as np

from . import backend
from .raster import reflect_index

_CENTER_WEIGHT = 1.0  # self-similarity; excluded from window sums


@dataclasses.dataclass(frozen=True)
class PatchGeometry:
    """Patch side d, window side D, similarity scale sigma_r."""

    d: int
    D: int
    sigma_r: float
    sigma_s: float | None = None

    def __post_init__(self):
        if self.d < 1 or self.d % 2 == 0:
            raise ValueError(f"patch side d must be odd and >= 1, got {self.d}")
        if self.D < 1 or self.D % 2 == 0:
            raise ValueError(f"window side D must be odd and >= 1, got {self.D}")
        if self.sigma_r <= 0:
            raise ValueError(f"sigma_r must be > 0, got {self.sigma_r}")
        if self.sigma_s is not None and self.sigma_s < 0:
            raise ValueError(f"sigma_s must be >= 0, got {self.sigma_s}")

    @property
    def spatial_sigma(self):
        return ((self.d - 1) / 4.0) if self.sigma_s is None else self.sigma_s


def window_offsets(D):
    """All (dy, dx) in the D x D window except the center, raster order."""
    r = (D - 1) // 2
    offs = [(dy, dx) for dy in range(-r, r + 1) for dx in range(-r, r + 1) if (dy, dx) != (0, 0)]
    return np.array(offs, dtype=np.int64).reshape(-1, 2)


def patch_offsets(geom):
    """Patch displacements and their Gaussian kernel values, raster order."""
    r = (geom.d - 1) // 2
    offs = np.array(
        [(py, px) for py in range(-r, r + 1) for px in range(-r, r + 1)], dtype=np.int64
    )
    sigma = geom.spatial_sigma
    if sigma == 0.0:
        if geom.d != 1:
            raise ValueError("sigma_s = 0 is only meaningful for d = 1")
        kernel = np.ones(1)
    else:
        sq = offs[:, 0] ** 2 + offs[:, 1] ** 2
        kernel = np.exp(-sq / (2.0 * sigma * sigma))
    return offs, kernel


@dataclasses.dataclass
class WeightField:
    """Per-offset weight planes over an (rows, cols) grid."""

    rows: int
    cols: int
    window: int
    offsets: np.ndarray  # (K, 2) int64
    planes: np.ndarray  # (K, rows, cols) float64
    geom: PatchGeometry | None = None

    def __post_init__(self):
        if self.planes.shape != (self.offsets.shape[0], self.rows, self.cols):
            raise ValueError(
                f"planes shape {self.planes.shape} inconsistent with "
                f"{self.offsets.shape[0]} offsets on {self.rows}x{self.cols}"
            )

    def weight(self, i, j):
        """Stored weight from i toward j; 0 outside the window, 1.0 at i = j."""
        dy, dx = j[0] - i[0], j[1] - i[1]
        if dy == 0 and dx == 0:
            return _CENTER_WEIGHT
        r = (self.window - 1) // 2
        if abs(dy) > r or abs(dx) > r:
            return 0.0
        k = (dy + r) * self.window + (dx + r)
        if dy > 0 or (dy == 0 and dx > 0):
            k -= 1  # raster position after the removed center
        return float(self.planes[k, i[0], i[1]])


def patch_distance(field, i, j, geom):
    """Kernel-weighted mean squared patch difference between pixels i and j.

    Reference implementation with explicit loops; the field builders below
    compute the same sums plane by plane.
    """
    field = np.asarray(field)
    m, n = field.shape
    offs, kernel = patch_offsets(geom)
    acc = 0.0
    for (py, px), a in zip(offs, kernel):
        fi = field[reflect_index(i[0] + py, m), reflect_index(i[1] + px, n)]
        fj = field[reflect_index(j[0] + py, m), reflect_index(j[1] + px, n)]
        d = fi - fj
        acc += a * (d.real * d.real + d.imag * d.imag if np.iscomplexobj(field) else d * d)
    return float(acc / kernel.sum())


def similarity_weights(field, geom):
    """Build the weight field of a real raster or a complex spectrum."""
    field = np.asarray(field)
    if field.ndim != 2:
        raise ValueError(f"field must be 2-D, got shape {field.shape}")
    m, n = field.shape
    if min(m, n) < geom.d:
        raise ValueError(f"field dims {m}x{n} smaller than patch side {geom.d}")
    if not np.iscomplexobj(field):
        field = np.asarray(field, dtype=np.float64)
    offs = window_offsets(geom.D)
    poffs, kernel = patch_offsets(geom)
    inv_two_sigma2 = 1.0 / (2.0 * geom.sigma_r * geom.sigma_r)
    planes = backend.kernels.weight_planes(field, offs, poffs, kernel, inv_two_sigma2)
    return WeightField(m, n, geom.D, offs, planes, geom)


def tv_weights(rows, cols):
    """Local total-variation stencil: weight 1 toward the right and down
    neighbors, 0 elsewhere in the 3x3 window. Intentionally asymmetric."""
    offs = window_offsets(3)
    planes = np.zeros((offs.shape[0], rows, cols))
    for k, (dy, dx) in enumerate(offs):
        if (dy, dx) in ((0, 1), (1, 0)):
            planes[k] = 1.0
    return WeightField(rows, cols, 3, offs, planes, None)
