"""Torus discretization: wavevector bookkeeping, transforms, dealiasing.

The domain is the periodic cube [0, 2pi)^3 sampled at ``n`` points per axis,
x_i = 2pi*i/n.  Spectral coefficients follow the synthesis convention

    c(x) = sum_k chat(k) * exp(i k.x),

so a single cosine mode has the literal coefficients 1/2 at +-k.  Arrays of
coefficients are indexed in FFT order on every axis (k = 0, 1, ..., n/2-1,
-n/2, ..., -1); physical sample arrays are C-ordered (n, n, n) with the third
index fastest.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import fft as _fft

TWO_PI = 2.0 * np.pi
#: Volume of the torus, used by all Parseval-based integrals.
VOLUME = TWO_PI**3


def fft_workers() -> int:
    """Worker count for scipy FFT calls, capped by HELICORE_THREADS.

    Defaults to 1 so results are reproducible without configuration; the
    transforms themselves are deterministic for any fixed worker count.
    """
    raw = os.environ.get("HELICORE_THREADS", "")
    try:
        requested = int(raw)
    except ValueError:
        requested = 1
    return max(1, min(requested if raw else 1, os.cpu_count() or 1))


@dataclass(frozen=True)
class GridSpec:
    """Discretization of the torus: resolution and dealias rule.

    Parameters
    ----------
    n : int
        Samples per axis; even and >= 8.
    dealias_fraction : Fraction
        Fraction of the Nyquist index retained per axis; the mask keeps
        exactly the modes with max_j |k_j| <= floor(dealias_fraction * n/2).

    Derived arrays (set once, treated as read-only):

    - ``k1d``: integer wavenumbers per axis in FFT order, shape (n,).
    - ``kvec``: stacked wavevector components, shape (3, n, n, n).
    - ``k2``: |k|^2, and ``inv_k2``: 1/|k|^2 with 0 at k = 0.
    - ``dealias_mask``: boolean keep-mask, shape (n, n, n).
    - ``kmax_dealias``: the retained max-norm radius.
    """

    n: int
    dealias_fraction: Fraction = field(default=Fraction(2, 3))

    def __post_init__(self) -> None:
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid resolution must be even and >= 8, got {self.n}")
        frac = self.dealias_fraction
        if not isinstance(frac, Fraction):
            raise TypeError("dealias_fraction must be a Fraction")
        if not (0 < frac <= 1):
            raise ValueError(f"dealias_fraction must be in (0, 1], got {frac}")

        k1d = np.fft.fftfreq(self.n, d=1.0 / self.n)  # exact small integers
        kx, ky, kz = np.meshgrid(k1d, k1d, k1d, indexing="ij")
        kvec = np.stack([kx, ky, kz])
        k2 = kx**2 + ky**2 + kz**2
        inv_k2 = np.zeros_like(k2)
        np.divide(1.0, k2, out=inv_k2, where=k2 > 0)

        kmax_dealias = int(frac * (self.n // 2))
        absmax = np.max(np.abs(kvec), axis=0)
        dealias_mask = absmax <= kmax_dealias

        # half-spectrum (rfft) variants for the real-field fast paths
        half = self.n // 2 + 1
        kvec_half = np.ascontiguousarray(kvec[..., :half])
        k2_half = np.ascontiguousarray(k2[..., :half])
        inv_k2_half = np.ascontiguousarray(inv_k2[..., :half])
        dealias_mask_half = np.ascontiguousarray(dealias_mask[..., :half])

        for name, arr in [
            ("k1d", k1d),
            ("kvec", kvec),
            ("k2", k2),
            ("inv_k2", inv_k2),
            ("dealias_mask", dealias_mask),
            ("kvec_half", kvec_half),
            ("k2_half", k2_half),
            ("inv_k2_half", inv_k2_half),
            ("dealias_mask_half", dealias_mask_half),
        ]:
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "kmax_dealias", kmax_dealias)

    def axis_points(self) -> np.ndarray:
        """Physical sample points 2pi*i/n along one axis."""
        return TWO_PI * np.arange(self.n) / self.n

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Open (broadcastable) coordinate arrays x1, x2, x3."""
        x = self.axis_points()
        return x[:, None, None], x[None, :, None], x[None, None, :]

    def mode_index(self, k: tuple[int, int, int]) -> tuple[int, int, int]:
        """FFT array index of the integer wavevector ``k``."""
        return tuple(int(c) % self.n for c in k)


@dataclass(frozen=True, order=True)
class WaveVector:
    """Integer wavevector with its Euclidean norm."""

    k1: int
    k2: int
    k3: int

    @property
    def norm(self) -> float:
        return math.sqrt(self.k1**2 + self.k2**2 + self.k3**2)

    @property
    def norm_sq(self) -> int:
        return self.k1**2 + self.k2**2 + self.k3**2

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)


def enumerate_wavevectors(grid: GridSpec, kmax: int) -> list[WaveVector]:
    """All integer wavevectors with max_j |k_j| <= kmax, lexicographic order.

    Includes k = 0.  ``kmax`` must satisfy 0 <= kmax <= n/2.
    """
    if not (0 <= kmax <= grid.n // 2):
        raise ValueError(f"kmax must be in [0, n/2] = [0, {grid.n // 2}], got {kmax}")
    rng = range(-kmax, kmax + 1)
    return [WaveVector(*t) for t in itertools.product(rng, rng, rng)]


def _check_samples(grid: GridSpec, samples: np.ndarray) -> np.ndarray:
    samples = np.asarray(samples)
    n = grid.n
    if samples.shape[-3:] != (n, n, n):
        raise ValueError(
            f"sample array must end in shape ({n}, {n}, {n}), got {samples.shape}"
        )
    if np.iscomplexobj(samples):
        raise ValueError("physical samples must be real")
    return samples.astype(np.float64, copy=False)


def transform_forward(grid: GridSpec, samples: np.ndarray) -> np.ndarray:
    """Real samples -> complex coefficients chat(k) (synthesis convention).

    Accepts leading batch axes; the last three axes are transformed.
    """
    samples = _check_samples(grid, samples)
    return _fft.fftn(samples, axes=(-3, -2, -1), norm="forward", workers=fft_workers())


def transform_inverse(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Complex coefficients -> real samples (imaginary part discarded)."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    n = grid.n
    if coeffs.shape[-3:] != (n, n, n):
        raise ValueError(
            f"coefficient array must end in shape ({n}, {n}, {n}), got {coeffs.shape}"
        )
    out = _fft.ifftn(coeffs, axes=(-3, -2, -1), norm="forward", workers=fft_workers())
    return np.ascontiguousarray(out.real)


def dealias(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Zero every mode outside the grid's max-norm dealias mask (idempotent)."""
    return np.asarray(coeffs) * grid.dealias_mask


def reverse_modes(coeffs: np.ndarray) -> np.ndarray:
    """Map chat(k) -> chat(-k) on FFT-ordered axes (last three)."""
    flipped = np.asarray(coeffs)[..., ::-1, ::-1, ::-1]
    return np.roll(flipped, shift=(1, 1, 1), axis=(-3, -2, -1))


def half_spectrum(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Keep the nonnegative-k3 half of a Hermitian coefficient cube."""
    return np.ascontiguousarray(np.asarray(coeffs)[..., : grid.n // 2 + 1])


def full_spectrum(grid: GridSpec, half: np.ndarray) -> np.ndarray:
    """Rebuild the full cube from its nonnegative-k3 half by Hermitian symmetry."""
    n = grid.n
    half = np.asarray(half)
    full = np.empty(half.shape[:-1] + (n,), dtype=np.complex128)
    full[..., : n // 2 + 1] = half
    tail = np.conj(half[..., 1 : n // 2])[..., ::-1]  # k3 = -(n/2-1) .. -1
    full[..., n // 2 + 1 :] = np.roll(tail[..., ::-1, ::-1, :], shift=(1, 1), axis=(-3, -2))
    return full


def transform_inverse_half(grid: GridSpec, half: np.ndarray) -> np.ndarray:
    """Real samples from a half-spectrum coefficient array."""
    n = grid.n
    return _fft.irfftn(
        half, s=(n, n, n), axes=(-3, -2, -1), norm="forward", workers=fft_workers()
    )


def transform_forward_half(grid: GridSpec, samples: np.ndarray) -> np.ndarray:
    """Half-spectrum coefficients of real samples."""
    samples = _check_samples(grid, samples)
    return _fft.rfftn(samples, axes=(-3, -2, -1), norm="forward", workers=fft_workers())
