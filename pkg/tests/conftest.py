"""Shared fixtures and independent oracles.

The oracles here re-derive results with direct summation and finite
differences; implementation modules must match them, never the other way
around. PSNR-reproduction tests need the seven standard test images,
which cannot be bundled; point NLTV_IMAGE_DIR at a directory with
lena/barbara/bridge/boats (512x512) and peppers/house/cameraman (256x256)
as .png or .pgm to enable them.
"""

import os

import numpy as np
import pytest

from nltv.io import read_image
from nltv.raster import reflect_index

CORPUS_NAMES = ("lena", "barbara", "bridge", "boats", "peppers", "house", "cameraman")


def corpus_dir():
    return os.environ.get(
        "NLTV_IMAGE_DIR", os.path.join(os.path.dirname(os.path.dirname(__file__)), "images")
    )


def corpus_path(name):
    for ext in (".png", ".pgm"):
        path = os.path.join(corpus_dir(), name + ext)
        if os.path.exists(path):
            return path
    return None


def require_corpus(*names):
    """Load the named standard images or skip with the missing file list."""
    missing = [name for name in names if corpus_path(name) is None]
    if missing:
        pytest.skip(
            "standard test images missing under "
            f"{corpus_dir()}: " + ", ".join(f"{m}.png|{m}.pgm" for m in missing)
            + " (set NLTV_IMAGE_DIR)"
        )
    return {name: read_image(corpus_path(name)) for name in names}


@pytest.fixture(scope="session")
def camera():
    """A real photograph available offline, for smoke-level behavior tests."""
    data = pytest.importorskip("skimage.data")
    return data.camera().astype(np.float64)


# ---------------------------------------------------------------------------
# oracles

def naive_dft2(u):
    """Direct-summation unitary transform, O((MN)^2)."""
    u = np.asarray(u, dtype=np.float64)
    m, n = u.shape
    yy, xx = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    out = np.empty((m, n), dtype=np.complex128)
    for wy in range(m):
        for wx in range(n):
            phase = np.exp(-2j * np.pi * (wy * yy / m + wx * xx / n))
            out[wy, wx] = np.sum(u * phase)
    return out / np.sqrt(m * n)


def fd_gradient(energy, u, h=1e-5):
    """Central finite differences of a scalar energy."""
    g = np.zeros_like(u)
    for idx in np.ndindex(u.shape):
        up = u.copy()
        up[idx] += h
        um = u.copy()
        um[idx] -= h
        g[idx] = (energy(up) - energy(um)) / (2.0 * h)
    return g


def brute_patch_distance(field, i, j, d, sigma_s=None):
    """Independent patch distance: explicit loops, reflected samples."""
    field = np.asarray(field)
    m, n = field.shape
    r = (d - 1) // 2
    sigma = ((d - 1) / 4.0) if sigma_s is None else sigma_s
    num = 0.0
    den = 0.0
    for py in range(-r, r + 1):
        for px in range(-r, r + 1):
            a = 1.0 if sigma == 0 else np.exp(-(py * py + px * px) / (2 * sigma * sigma))
            fi = field[reflect_index(i[0] + py, m), reflect_index(i[1] + px, n)]
            fj = field[reflect_index(j[0] + py, m), reflect_index(j[1] + px, n)]
            diff = fi - fj
            num += a * abs(diff) ** 2
            den += a
    return num / den


def brute_weight(field, i, j, d, sigma_r, sigma_s=None):
    return np.exp(-brute_patch_distance(field, i, j, d, sigma_s) / (2.0 * sigma_r**2))


def brute_nltv_energy(u, v, d, window, sigma_r, lam, beta):
    """Independent spatial objective: weights and magnitudes from scratch."""
    u = np.asarray(u, dtype=np.float64)
    m, n = u.shape
    r = (window - 1) // 2
    total = 0.0
    for y in range(m):
        for x in range(n):
            acc = beta
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    if (dy, dx) == (0, 0):
                        continue
                    jy = reflect_index(y + dy, m)
                    jx = reflect_index(x + dx, n)
                    w = brute_weight(v, (y, x), (jy, jx), d, sigma_r)
                    diff = u[y, x] - u[jy, jx]
                    acc += w * diff * diff
            total += np.sqrt(acc)
    fid = 0.5 * float(np.sum((u - v) ** 2))
    return lam * total + fid
