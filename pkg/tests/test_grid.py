"""Grid bookkeeping: wavevector enumeration, transforms, dealiasing."""

from fractions import Fraction

import numpy as np
import pytest

from helicore import (
    GridSpec,
    WaveVector,
    dealias,
    enumerate_wavevectors,
    reverse_modes,
    transform_forward,
    transform_inverse,
)
from helicore.grid import VOLUME, full_spectrum, half_spectrum


class TestGridSpec:
    def test_rejects_odd_or_small_n(self):
        with pytest.raises(ValueError):
            GridSpec(7)
        with pytest.raises(ValueError):
            GridSpec(6)
        with pytest.raises(ValueError):
            GridSpec(9)

    def test_rejects_bad_dealias_fraction(self):
        with pytest.raises(ValueError):
            GridSpec(8, dealias_fraction=Fraction(3, 2))
        with pytest.raises(TypeError):
            GridSpec(8, dealias_fraction=0.66)

    def test_dealias_cutoff_is_floor(self):
        assert GridSpec(8).kmax_dealias == 2  # floor(2/3 * 4)
        assert GridSpec(16).kmax_dealias == 5
        assert GridSpec(32).kmax_dealias == 10

    def test_wavenumbers_are_fft_ordered_integers(self):
        g = GridSpec(8)
        assert list(g.k1d) == [0, 1, 2, 3, -4, -3, -2, -1]

    def test_equality_ignores_derived_arrays(self):
        assert GridSpec(16) == GridSpec(16)
        assert GridSpec(16) != GridSpec(32)
        assert hash(GridSpec(16)) == hash(GridSpec(16))


class TestEnumerateWavevectors:
    def test_kmax_zero_is_single_zero_mode(self):
        assert enumerate_wavevectors(GridSpec(8), 0) == [WaveVector(0, 0, 0)]

    def test_counts_are_cubes(self):
        assert len(enumerate_wavevectors(GridSpec(8), 1)) == 27
        assert len(enumerate_wavevectors(GridSpec(16), 2)) == 125

    def test_order_is_lexicographic_and_contains_zero(self):
        vecs = enumerate_wavevectors(GridSpec(8), 1)
        assert vecs == sorted(vecs)
        assert vecs[0] == WaveVector(-1, -1, -1)
        assert WaveVector(0, 0, 0) in vecs

    def test_kmax_out_of_range(self):
        with pytest.raises(ValueError):
            enumerate_wavevectors(GridSpec(8), 5)
        with pytest.raises(ValueError):
            enumerate_wavevectors(GridSpec(8), -1)

    def test_wavevector_norm(self):
        assert WaveVector(1, 2, 2).norm == 3.0
        assert WaveVector(0, 0, 0).norm == 0.0
        assert WaveVector(1, 0, -1).norm_sq == 2


class TestTransforms:
    def test_constant_field_is_dc_mode(self, grid16):
        c = transform_forward(grid16, np.ones((16, 16, 16)))
        assert abs(c[0, 0, 0] - 1.0) < 1e-14
        c[0, 0, 0] = 0
        assert np.max(np.abs(c)) < 1e-14

    def test_cosine_splits_into_half_modes(self):
        g = GridSpec(8)
        x1 = g.mesh()[0]
        c = transform_forward(g, np.broadcast_to(np.cos(x1), (8, 8, 8)).copy())
        assert abs(c[1, 0, 0] - 0.5) < 1e-14
        assert abs(c[-1, 0, 0] - 0.5) < 1e-14
        c[1, 0, 0] = c[-1, 0, 0] = 0
        assert np.max(np.abs(c)) < 1e-14

    def test_roundtrip_is_identity(self, grid16):
        rng = np.random.default_rng(3)
        samples = rng.standard_normal((16, 16, 16))
        back = transform_inverse(grid16, transform_forward(grid16, samples))
        assert np.max(np.abs(back - samples)) / np.max(np.abs(samples)) < 1e-13

    def test_hermitian_symmetry_of_real_input(self, grid16):
        rng = np.random.default_rng(4)
        c = transform_forward(grid16, rng.standard_normal((16, 16, 16)))
        assert np.max(np.abs(reverse_modes(c) - np.conj(c))) < 1e-14

    def test_size_mismatch_rejected(self, grid16):
        with pytest.raises(ValueError):
            transform_forward(grid16, np.zeros((8, 8, 8)))
        with pytest.raises(ValueError):
            transform_inverse(grid16, np.zeros((8, 8, 8), dtype=complex))

    def test_complex_samples_rejected(self, grid16):
        with pytest.raises(ValueError):
            transform_forward(grid16, np.zeros((16, 16, 16), dtype=complex))

    def test_half_spectrum_roundtrip(self, grid16):
        rng = np.random.default_rng(5)
        c = transform_forward(grid16, rng.standard_normal((16, 16, 16)))
        rebuilt = full_spectrum(grid16, half_spectrum(grid16, c))
        assert np.max(np.abs(rebuilt - c)) < 1e-14


class TestDealias:
    def test_low_band_unchanged(self):
        g = GridSpec(8)
        c = np.zeros((8, 8, 8), dtype=complex)
        c[1, -1, 0] = 2.0 + 1.0j
        assert np.array_equal(dealias(c, g), c)

    def test_nyquist_mode_removed(self):
        g = GridSpec(8)
        c = np.zeros((8, 8, 8), dtype=complex)
        c[4, 0, 0] = 1.0  # k = (4,0,0), outside floor(2/3*4) = 2
        assert np.max(np.abs(dealias(c, g))) == 0.0

    def test_idempotent(self, grid16):
        rng = np.random.default_rng(6)
        c = rng.standard_normal((16, 16, 16)) + 1j * rng.standard_normal((16, 16, 16))
        once = dealias(c, grid16)
        assert np.array_equal(dealias(once, grid16), once)


class TestQuadratureProperties:
    def test_parseval(self, grid16):
        # band-limited random scalar: spectral sum matches physical quadrature
        rng = np.random.default_rng(7)
        samples = rng.standard_normal((16, 16, 16))
        c = dealias(transform_forward(grid16, samples), grid16)
        band = transform_inverse(grid16, c)
        spectral = VOLUME * np.sum(np.abs(c) ** 2)
        physical = (2 * np.pi / 16) ** 3 * np.sum(band**2)
        assert abs(spectral - physical) / abs(physical) < 1e-12

    def test_product_matches_direct_convolution(self):
        # fields band-limited to floor(n/3): physical product + dealias equals
        # the exact (linear) convolution on every retained mode
        n = 12
        g = GridSpec(n)
        band = n // 3  # = kmax_dealias for n = 12
        rng = np.random.default_rng(8)

        def bandlimited(seed):
            c = transform_forward(g, np.random.default_rng(seed).standard_normal((n, n, n)))
            keep = np.max(np.abs(g.kvec), axis=0) <= band
            return c * keep

        a, b = bandlimited(1), bandlimited(2)
        via_grid = dealias(
            transform_forward(g, transform_inverse(g, a) * transform_inverse(g, b)), g
        )

        # direct convolution on a padded integer lattice, no FFT involved
        big = 4 * band + 1
        pad_a = np.zeros((big, big, big), dtype=complex)
        pad_b = np.zeros((big, big, big), dtype=complex)
        conv = np.zeros((big, big, big), dtype=complex)
        idx = lambda k: tuple((np.array(k) + 2 * band) % big)
        rng_modes = range(-band, band + 1)
        for k1 in rng_modes:
            for k2 in rng_modes:
                for k3 in rng_modes:
                    pad_a[idx((k1, k2, k3))] = a[k1 % n, k2 % n, k3 % n]
                    pad_b[idx((k1, k2, k3))] = b[k1 % n, k2 % n, k3 % n]
        for k1 in rng_modes:
            for k2 in rng_modes:
                for k3 in rng_modes:
                    amp = pad_a[idx((k1, k2, k3))]
                    if amp != 0:
                        conv += amp * np.roll(pad_b, shift=(k1, k2, k3), axis=(0, 1, 2))

        for k1 in rng_modes:
            for k2 in rng_modes:
                for k3 in rng_modes:
                    expected = conv[idx((k1, k2, k3))]
                    got = via_grid[k1 % n, k2 % n, k3 % n]
                    assert abs(got - expected) < 1e-13 * max(1.0, abs(expected))
