import numpy as np
import pytest

from conftest import brute_weight
from nltv.baselines import nl_means
from nltv.raster import reflect_index
from nltv.weights import PatchGeometry


def brute_nl_means(v, geom):
    """Independent filter: explicit loops over the window, reflected samples."""
    v = np.asarray(v, dtype=np.float64)
    m, n = v.shape
    r = (geom.D - 1) // 2
    out = np.empty_like(v)
    for iy in range(m):
        for ix in range(n):
            num = v[iy, ix]
            den = 1.0
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    if (dy, dx) == (0, 0):
                        continue
                    jy = reflect_index(iy + dy, m)
                    jx = reflect_index(ix + dx, n)
                    w = brute_weight(
                        v, (iy, ix), (jy, jx), geom.d, geom.sigma_r, geom.spatial_sigma
                    )
                    num += w * v[jy, jx]
                    den += w
            out[iy, ix] = num / den
    return out


def test_constant_is_unchanged():
    v = np.full((8, 8), 123.0)
    geom = PatchGeometry(d=3, D=5, sigma_r=10.0)
    assert np.allclose(nl_means(v, geom), v, atol=1e-12)


def test_output_within_window_bounds():
    rng = np.random.default_rng(40)
    v = rng.uniform(0, 255, (16, 16))
    geom = PatchGeometry(d=3, D=5, sigma_r=20.0)
    out = nl_means(v, geom)
    r = 2
    padded = np.pad(v, r, mode="reflect")
    for iy in range(16):
        for ix in range(16):
            win = padded[iy : iy + 2 * r + 1, ix : ix + 2 * r + 1]
            assert win.min() - 1e-12 <= out[iy, ix] <= win.max() + 1e-12


def test_matches_brute_force():
    rng = np.random.default_rng(41)
    v = rng.uniform(0, 255, (9, 7))
    geom = PatchGeometry(d=3, D=3, sigma_r=25.0)
    assert np.allclose(nl_means(v, geom), brute_nl_means(v, geom), atol=1e-12)


def test_transpose_equivariance():
    rng = np.random.default_rng(42)
    v = rng.uniform(0, 255, (10, 10))
    geom = PatchGeometry(d=3, D=5, sigma_r=15.0)
    assert np.allclose(nl_means(v.T, geom), nl_means(v, geom).T, atol=1e-12)


def test_periodic_texture_averages_exact_matches():
    # On a 2-periodic stripe pattern, window offsets that land on an exact
    # copy of the patch get weight 1, so interior pixels average copies of
    # the same value and stay put.
    stripes = np.tile(np.array([[10.0], [250.0]]), (5, 10))
    geom = PatchGeometry(d=1, D=5, sigma_r=0.5)
    out = nl_means(stripes, geom)
    interior = out[2:-2, 2:-2]
    assert np.allclose(interior, stripes[2:-2, 2:-2], atol=1e-6)


def test_smooths_noise():
    rng = np.random.default_rng(43)
    clean = np.outer(np.linspace(50, 200, 24), np.ones(24))
    noisy = clean + rng.normal(0, 20, clean.shape)
    geom = PatchGeometry(d=5, D=7, sigma_r=18.0)
    out = nl_means(noisy, geom)
    assert np.mean((out - clean) ** 2) < 0.5 * np.mean((noisy - clean) ** 2)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        nl_means(np.zeros((2, 2, 2)), PatchGeometry(d=1, D=3, sigma_r=1.0))
