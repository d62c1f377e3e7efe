import numpy as np
import pytest

from conftest import naive_dft2
from nltv.spectral import dft2, idft2, idft2_real


def test_matches_direct_summation():
    rng = np.random.default_rng(0)
    for shape in ((8, 8), (5, 7)):
        u = rng.uniform(0, 255, shape)
        assert np.allclose(dft2(u), naive_dft2(u), atol=1e-12 * np.abs(naive_dft2(u)).max())


def test_delta_spreads_uniformly():
    u = np.zeros((4, 4))
    u[0, 0] = 1.0
    assert np.allclose(dft2(u), 0.25, atol=1e-15)


def test_constant_concentrates_at_dc():
    c = 3.75
    u = np.full((6, 9), c)
    spec = dft2(u)
    assert abs(spec[0, 0] - c * np.sqrt(u.size)) < 1e-12
    rest = spec.copy()
    rest[0, 0] = 0.0
    assert np.abs(rest).max() < 1e-12


def test_parseval():
    rng = np.random.default_rng(1)
    u = rng.uniform(-100, 100, (16, 16))
    lhs = np.sum(u * u)
    rhs = np.sum(np.abs(dft2(u)) ** 2)
    assert abs(lhs - rhs) <= 1e-12 * lhs


def test_linearity():
    rng = np.random.default_rng(2)
    a, b = rng.uniform(-50, 50, (2, 8, 8))
    lhs = dft2(2.5 * a - 0.75 * b)
    rhs = 2.5 * dft2(a) - 0.75 * dft2(b)
    assert np.allclose(lhs, rhs, atol=1e-11)


def test_round_trip():
    rng = np.random.default_rng(3)
    u = rng.uniform(0, 255, (12, 10))
    assert np.allclose(idft2_real(dft2(u)), u, atol=1e-12)


def test_hermitian_symmetry():
    rng = np.random.default_rng(4)
    u = rng.uniform(0, 255, (8, 6))
    spec = dft2(u)
    m, n = spec.shape
    flipped = spec[(m - np.arange(m)) % m][:, (n - np.arange(n)) % n]
    assert np.allclose(flipped, np.conj(spec), atol=1e-12)


def test_real_input_has_tiny_imaginary_inverse():
    rng = np.random.default_rng(5)
    u = rng.uniform(0, 255, (9, 9))
    assert np.abs(idft2(dft2(u)).imag).max() < 1e-12


def test_rejects_non_2d():
    with pytest.raises(ValueError):
        idft2(np.zeros(4, dtype=np.complex128))
