import numpy as np
import pytest

from conftest import brute_patch_distance, brute_weight
from nltv.raster import reflect_index
from nltv.spectral import dft2
from nltv.weights import (
    PatchGeometry,
    WeightField,
    patch_distance,
    patch_offsets,
    similarity_weights,
    tv_weights,
    window_offsets,
)


def all_window_pairs(rows, cols, D):
    r = (D - 1) // 2
    for iy in range(rows):
        for ix in range(cols):
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    if (dy, dx) != (0, 0):
                        yield (iy, ix), (iy + dy, ix + dx)


class TestGeometry:
    def test_window_offsets_order(self):
        offs = window_offsets(3)
        assert offs.tolist() == [
            [-1, -1], [-1, 0], [-1, 1], [0, -1], [0, 1], [1, -1], [1, 0], [1, 1],
        ]

    def test_window_offsets_count(self):
        assert window_offsets(7).shape == (48, 2)

    def test_patch_kernel_single_sample(self):
        offs, kernel = patch_offsets(PatchGeometry(d=1, D=3, sigma_r=10.0))
        assert offs.tolist() == [[0, 0]]
        assert kernel.tolist() == [1.0]

    def test_patch_kernel_values(self):
        geom = PatchGeometry(d=5, D=3, sigma_r=10.0)
        assert geom.spatial_sigma == 1.0
        offs, kernel = patch_offsets(geom)
        assert offs.shape == (25, 2)
        center = 12
        assert kernel[center] == 1.0
        sq = offs[:, 0] ** 2 + offs[:, 1] ** 2
        assert np.allclose(kernel, np.exp(-sq / 2.0))

    def test_sigma_s_override(self):
        geom = PatchGeometry(d=5, D=3, sigma_r=10.0, sigma_s=2.0)
        assert geom.spatial_sigma == 2.0

    def test_validation(self):
        with pytest.raises(ValueError):
            PatchGeometry(d=2, D=3, sigma_r=1.0)
        with pytest.raises(ValueError):
            PatchGeometry(d=3, D=4, sigma_r=1.0)
        with pytest.raises(ValueError):
            PatchGeometry(d=3, D=3, sigma_r=0.0)
        with pytest.raises(ValueError):
            PatchGeometry(d=3, D=3, sigma_r=1.0, sigma_s=-0.5)
        with pytest.raises(ValueError):
            patch_offsets(PatchGeometry(d=3, D=3, sigma_r=1.0, sigma_s=0.0))


class TestPatchDistance:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(10)
        v = rng.uniform(0, 255, (9, 7))
        geom = PatchGeometry(d=3, D=5, sigma_r=15.0)
        for i, j in [((0, 0), (1, 2)), ((4, 3), (2, 6)), ((8, 6), (7, 5))]:
            want = brute_patch_distance(v, i, j, geom.d, geom.spatial_sigma)
            assert abs(patch_distance(v, i, j, geom) - want) <= 1e-14 * max(1.0, want)

    def test_zero_for_identical_patches(self):
        v = np.tile(np.array([[1.0, 2.0], [3.0, 4.0]]), (4, 4))
        geom = PatchGeometry(d=1, D=3, sigma_r=10.0)
        assert patch_distance(v, (2, 2), (4, 4), geom) == 0.0

    def test_complex_uses_squared_modulus(self):
        rng = np.random.default_rng(11)
        spec = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        geom = PatchGeometry(d=3, D=3, sigma_r=1.0)
        i, j = (2, 2), (3, 4)
        got = patch_distance(spec, i, j, geom)
        want = brute_patch_distance(spec, i, j, geom.d, geom.spatial_sigma)
        assert abs(got - want) <= 1e-14 * max(1.0, want)


class TestSimilarityWeights:
    def test_field_matches_brute_force(self):
        # The stored plane value for offset o at pixel i is the weight
        # toward the reflected neighbor refl(i + o).
        rng = np.random.default_rng(12)
        v = rng.uniform(0, 255, (10, 8))
        geom = PatchGeometry(d=3, D=5, sigma_r=20.0)
        field = similarity_weights(v, geom)
        for i, j in all_window_pairs(10, 8, 5):
            jr = (reflect_index(j[0], 10), reflect_index(j[1], 8))
            want = brute_weight(v, i, jr, geom.d, geom.sigma_r, geom.spatial_sigma)
            assert abs(field.weight(i, j) - want) <= 1e-14

    def test_symmetry_bit_exact_spatial(self):
        # For in-range pairs the two directions accumulate identical terms
        # in identical order, so the weights match bit for bit.
        rng = np.random.default_rng(13)
        v = rng.uniform(0, 255, (16, 16))
        field = similarity_weights(v, PatchGeometry(d=5, D=5, sigma_r=20.0))
        for i, j in all_window_pairs(16, 16, 5):
            if not (0 <= j[0] < 16 and 0 <= j[1] < 16):
                continue
            assert field.weight(i, j) == field.weight(j, i)

    def test_symmetry_bit_exact_frequency(self):
        rng = np.random.default_rng(14)
        spec = dft2(rng.uniform(0, 255, (16, 16)))
        field = similarity_weights(spec, PatchGeometry(d=3, D=5, sigma_r=30.0))
        for i, j in all_window_pairs(16, 16, 5):
            if not (0 <= j[0] < 16 and 0 <= j[1] < 16):
                continue
            assert field.weight(i, j) == field.weight(j, i)

    def test_e_minus_one_at_reference_distance(self):
        # pd = 2 sigma_r^2 maps to weight exactly exp(-1).
        sigma_r = 10.0
        delta = np.sqrt(2.0 * sigma_r * sigma_r)
        v = np.zeros((4, 8))
        v[:, 4:] = delta
        geom = PatchGeometry(d=1, D=3, sigma_r=sigma_r)
        field = similarity_weights(v, geom)
        assert field.weight((1, 3), (1, 4)) == pytest.approx(np.exp(-1.0), abs=1e-15)

    def test_sigma_r_monotonicity(self):
        rng = np.random.default_rng(15)
        v = rng.uniform(0, 255, (8, 8))
        lo = similarity_weights(v, PatchGeometry(d=3, D=3, sigma_r=5.0))
        hi = similarity_weights(v, PatchGeometry(d=3, D=3, sigma_r=25.0))
        assert np.all(lo.planes <= hi.planes + 1e-15)
        assert lo.planes.mean() < hi.planes.mean()

    def test_weights_in_unit_interval(self):
        rng = np.random.default_rng(16)
        v = rng.uniform(0, 255, (8, 8))
        field = similarity_weights(v, PatchGeometry(d=3, D=5, sigma_r=12.0))
        assert np.all(field.planes > 0.0)
        assert np.all(field.planes <= 1.0)

    def test_center_and_out_of_window_lookup(self):
        v = np.zeros((6, 6))
        field = similarity_weights(v, PatchGeometry(d=1, D=3, sigma_r=1.0))
        assert field.weight((2, 2), (2, 2)) == 1.0
        assert field.weight((2, 2), (2, 4)) == 0.0
        assert field.weight((0, 0), (5, 5)) == 0.0

    def test_frequency_shift_invariance_interior(self):
        # Two rasters equal up to a circular shift have spectra with equal
        # per-bin modulus, so interior similarity weights agree to rounding.
        rng = np.random.default_rng(17)
        u = rng.uniform(0, 255, (16, 16))
        geom = PatchGeometry(d=3, D=3, sigma_r=50.0)
        wa = similarity_weights(np.abs(dft2(u)) + 0j, geom)
        wb = similarity_weights(np.abs(dft2(np.roll(u, (3, 5), axis=(0, 1)))) + 0j, geom)
        margin = (geom.D - 1) // 2 + (geom.d - 1) // 2
        sl = slice(margin + 1, 16 - 1 - margin)
        assert np.allclose(wa.planes[:, sl, sl], wb.planes[:, sl, sl], atol=1e-12)

    def test_rejects_small_field(self):
        with pytest.raises(ValueError):
            similarity_weights(np.zeros((4, 4)), PatchGeometry(d=5, D=3, sigma_r=1.0))
        with pytest.raises(ValueError):
            similarity_weights(np.zeros(16), PatchGeometry(d=3, D=3, sigma_r=1.0))


class TestTvWeights:
    def test_stencil(self):
        field = tv_weights(4, 5)
        assert field.planes.shape == (8, 4, 5)
        for iy in range(4):
            for ix in range(5):
                for dy in range(-1, 2):
                    for dx in range(-1, 2):
                        if (dy, dx) == (0, 0):
                            continue
                        want = 1.0 if (dy, dx) in ((0, 1), (1, 0)) else 0.0
                        assert field.weight((iy, ix), (iy + dy, ix + dx)) == want

    def test_intentionally_asymmetric(self):
        field = tv_weights(3, 3)
        assert field.weight((1, 1), (1, 2)) == 1.0
        assert field.weight((1, 2), (1, 1)) == 0.0


class TestWeightFieldValidation:
    def test_plane_shape_checked(self):
        offs = window_offsets(3)
        with pytest.raises(ValueError):
            WeightField(4, 4, 3, offs, np.zeros((7, 4, 4)))
