"""Vector fields on the torus and their divergence-free structure.

A :class:`SpectralVectorField` stores one complex coefficient cube per
component.  The same value type stands in for every object the calculus
needs: velocity and vorticity fields, the 1-form and 2-form proxies obtained
through the metric and the volume element.

"Exact" fields (divergence-free with zero mean) form the Lie algebra all the
invariant-form machinery lives on; the k = 0 mode carries the harmonic
(constant) part and is excluded from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclasses_field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .grid import GridSpec, dealias, reverse_modes, transform_forward, transform_inverse

#: Divide-by-zero guard for relative residuals.
EPS_GUARD = 1e-30

#: Default gate for "is this field exact / divergence-free" preconditions.
EXACTNESS_TOL = 1e-10


def cross3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Component cross product of (3, ...) arrays (much faster than np.cross)."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


@dataclass(frozen=True)
class SpectralVectorField:
    """A real vector field stored as Fourier coefficients per component.

    ``coeffs`` has shape (3, n, n, n), complex128, FFT mode order on the
    last three axes.  Values are treated as immutable; arithmetic returns
    new instances.

    ``samples`` optionally carries the physical samples the field was built
    from so that sample-level round trips (snapshot files) are bit-exact;
    it always equals the inverse transform of ``coeffs`` to roundoff.
    """

    grid: GridSpec
    coeffs: np.ndarray
    samples: np.ndarray | None = dataclasses_field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.complex128)
        n = self.grid.n
        if c.shape != (3, n, n, n):
            raise ValueError(f"coeffs must have shape (3, {n}, {n}, {n}), got {c.shape}")
        object.__setattr__(self, "coeffs", c)
        if self.samples is not None and self.samples.shape != (3, n, n, n):
            raise ValueError("samples, when given, must match the coefficient shape")

    # -- value arithmetic (same grid required) ------------------------------

    def _require_same_grid(self, other: "SpectralVectorField") -> None:
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")

    def __add__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        self._require_same_grid(other)
        return SpectralVectorField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        self._require_same_grid(other)
        return SpectralVectorField(self.grid, self.coeffs - other.coeffs)

    def __neg__(self) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, -self.coeffs)

    def __mul__(self, scalar: float) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    # -- diagnostics ---------------------------------------------------------

    def reality_residual(self) -> float:
        """max |chat(-k) - conj(chat(k))| relative to the largest coefficient."""
        dev = np.max(np.abs(reverse_modes(self.coeffs) - np.conj(self.coeffs)))
        return float(dev / max(np.max(np.abs(self.coeffs)), EPS_GUARD))

    def divergence_residual(self) -> float:
        """max_k |k . chat(k)| relative to the largest spectral gradient |k| |chat(k)|."""
        c = self.coeffs
        kdot = np.einsum("j...,j...->...", self.grid.kvec, c)
        mag2 = np.einsum("j...,j...->...", c.real, c.real)
        mag2 += np.einsum("j...,j...->...", c.imag, c.imag)
        scale = np.sqrt(np.max(self.grid.k2 * mag2))
        return float(np.max(np.abs(kdot)) / max(scale, EPS_GUARD))

    def mean_mode_residual(self) -> float:
        """|chat(0)| relative to the largest coefficient."""
        mean = np.linalg.norm(self.coeffs[:, 0, 0, 0])
        return float(mean / max(np.max(np.abs(self.coeffs)), EPS_GUARD))

    def to_samples(self) -> np.ndarray:
        """Physical samples, shape (3, n, n, n) float64.

        Returns the construction-time samples when the field was built from
        physical data (bit-exact round trips), the inverse transform
        otherwise.
        """
        if self.samples is not None:
            return self.samples
        return transform_inverse(self.grid, self.coeffs)


def field_from_samples(grid: GridSpec, samples: np.ndarray) -> SpectralVectorField:
    """Build a field from physical component samples of shape (3, n, n, n)."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape != (3, grid.n, grid.n, grid.n):
        raise ValueError(f"expected samples of shape (3, {grid.n}, {grid.n}, {grid.n})")
    return SpectralVectorField(grid, transform_forward(grid, samples), samples=samples)


def zero_field(grid: GridSpec) -> SpectralVectorField:
    return SpectralVectorField(grid, np.zeros((3, grid.n, grid.n, grid.n), dtype=np.complex128))


def ensure_divergence_free(x: SpectralVectorField, tol: float = EXACTNESS_TOL, what: str = "field") -> None:
    res = x.divergence_residual()
    if res > tol:
        raise DomainError(f"{what} is not divergence-free (residual {res:.3e} > {tol:.1e})")


def ensure_exact(x: SpectralVectorField, tol: float = EXACTNESS_TOL, what: str = "field") -> None:
    """Require zero mean and zero divergence, the domain of the inverse curl."""
    ensure_divergence_free(x, tol, what)
    res = x.mean_mode_residual()
    if res > tol:
        raise DomainError(f"{what} has a mean (harmonic) mode (residual {res:.3e} > {tol:.1e})")


# -- projections -------------------------------------------------------------


def leray_project(x: SpectralVectorField) -> SpectralVectorField:
    """Project onto exact divergence-free fields.

    Per mode k != 0, chat -> chat - k (k.chat)/|k|^2; the k = 0 (harmonic)
    mode is zeroed.  Idempotent, L2 self-adjoint, identity on exact fields.
    """
    g = x.grid
    kdot = np.einsum("j...,j...->...", g.kvec, x.coeffs)
    out = x.coeffs - g.kvec * (kdot * g.inv_k2)
    out[:, 0, 0, 0] = 0.0
    return SpectralVectorField(g, out)


def hodge_decompose(
    x: SpectralVectorField,
) -> tuple[SpectralVectorField, SpectralVectorField, SpectralVectorField]:
    """Split into (gradient_part, exact_part, harmonic_part).

    The parts are mutually L2-orthogonal and sum to the input: the harmonic
    part is the constant k = 0 mode, the exact part is the Leray projection,
    and the gradient part is the remainder.
    """
    exact = leray_project(x)
    harm_coeffs = np.zeros_like(x.coeffs)
    harm_coeffs[:, 0, 0, 0] = x.coeffs[:, 0, 0, 0]
    harmonic = SpectralVectorField(x.grid, harm_coeffs)
    gradient = SpectralVectorField(x.grid, x.coeffs - exact.coeffs - harm_coeffs)
    return gradient, exact, harmonic


# -- helical (curl eigen) basis ----------------------------------------------


@lru_cache(maxsize=8)
def helical_basis(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Complex curl eigenvectors h_+(k), h_-(k) for every mode, shape (3,n,n,n).

    For k != 0 take e1(k) = (k x a)/|k x a| with tie-break axis a = zhat,
    falling back to a = xhat when k is parallel to zhat, and
    e2(k) = khat x e1(k).  Then h_s = (e1 + i s e2)/sqrt(2) satisfies

        curl(h_s exp(ik.x)) = s |k| h_s exp(ik.x),

    the pair is orthonormal under the conjugated dot product, and
    h_s(-k) = -h_{-s}(k).  Both modes vanish at k = 0.
    """
    k = grid.kvec
    shape = k.shape[1:]

    a = np.zeros_like(k)
    along_z = (k[0] == 0) & (k[1] == 0)  # includes k = 0
    a[2] = np.where(along_z, 0.0, 1.0)
    a[0] = np.where(along_z, 1.0, 0.0)

    c = np.cross(k, a, axis=0)
    cnorm = np.sqrt(np.sum(c**2, axis=0))
    e1 = c / np.where(cnorm == 0, 1.0, cnorm)

    knorm = np.sqrt(grid.k2)
    khat = k / np.where(knorm == 0, 1.0, knorm)
    e2 = np.cross(khat, e1, axis=0)

    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    h_plus = (e1 + 1j * e2) * inv_sqrt2
    h_minus = (e1 - 1j * e2) * inv_sqrt2
    zero = grid.k2 == 0
    h_plus[:, zero] = 0.0
    h_minus[:, zero] = 0.0
    h_plus.setflags(write=False)
    h_minus.setflags(write=False)
    assert h_plus.shape == (3, *shape)
    return h_plus, h_minus


@dataclass(frozen=True)
class HelicalCoefficients:
    """Amplitudes a_+(k), a_-(k) in the curl eigenbasis (FFT mode order).

    Diagonalizes curl and its inverse: the mode (k, s) carries curl
    eigenvalue s|k|.  Real fields satisfy a_s(-k) = -conj(a_s(k)).
    """

    grid: GridSpec
    a_plus: np.ndarray
    a_minus: np.ndarray

    def to_field(self) -> SpectralVectorField:
        """Reconstruct the exact divergence-free field these amplitudes encode."""
        hp, hm = helical_basis(self.grid)
        return SpectralVectorField(self.grid, self.a_plus * hp + self.a_minus * hm)


def helical_decompose(x: SpectralVectorField) -> HelicalCoefficients:
    """Helical amplitudes a_s(k) = h_s(k)* . chat(k) of the exact part of x.

    Inputs that are not already exact are Leray-projected first, so the
    reconstruction always returns the exact divergence-free part of x.
    """
    proj = leray_project(x)
    hp, hm = helical_basis(x.grid)
    a_plus = np.einsum("j...,j...->...", np.conj(hp), proj.coeffs)
    a_minus = np.einsum("j...,j...->...", np.conj(hm), proj.coeffs)
    return HelicalCoefficients(x.grid, a_plus, a_minus)


# -- constructors -------------------------------------------------------------


def abc_field(grid: GridSpec, a: float, b: float, c: float) -> SpectralVectorField:
    """The Arnold-Beltrami-Childress flow, a curl eigenfield with eigenvalue 1.

    V = (A sin x3 + C cos x2,  B sin x1 + A cos x3,  C sin x2 + B cos x1).
    Exact divergence-free, and curl V = V.
    """
    x1, x2, x3 = grid.mesh()
    n = grid.n
    u = np.empty((3, n, n, n))
    u[0] = a * np.sin(x3) + c * np.cos(x2)
    u[1] = b * np.sin(x1) + a * np.cos(x3)
    u[2] = c * np.sin(x2) + b * np.cos(x1)
    return field_from_samples(grid, u)


def helical_mode(
    grid: GridSpec,
    k: tuple[int, int, int],
    sign: int,
    amplitude: float = 1.0,
) -> SpectralVectorField:
    """Real single-mode curl eigenfield: amplitude on h_s(k) plus its conjugate.

    ``sign`` is +1 or -1; the result satisfies curl X = sign*|k| X.  The
    wavevector must be nonzero and inside the dealias mask.
    """
    if sign not in (+1, -1):
        raise ValueError(f"helicity sign must be +1 or -1, got {sign}")
    ki = tuple(int(c) for c in k)
    if ki == (0, 0, 0):
        raise ValueError("helical modes require a nonzero wavevector")
    if max(abs(c) for c in ki) > grid.kmax_dealias:
        raise ValueError(f"wavevector {ki} lies outside the dealias mask of n={grid.n}")
    hp, hm = helical_basis(grid)
    h = hp if sign > 0 else hm
    coeffs = np.zeros((3, grid.n, grid.n, grid.n), dtype=np.complex128)
    idx = grid.mode_index(ki)
    idx_neg = grid.mode_index(tuple(-c for c in ki))
    coeffs[(slice(None), *idx)] = amplitude * h[(slice(None), *idx)]
    coeffs[(slice(None), *idx_neg)] = np.conj(coeffs[(slice(None), *idx)])
    return SpectralVectorField(grid, coeffs)


def random_exact_field(
    grid: GridSpec,
    seed: int,
    kband: int,
    amplitude: float = 1.0,
) -> SpectralVectorField:
    """Seeded random exact field supported on 0 < max_j |k_j| <= kband.

    Helical amplitudes are drawn as complex Gaussians and antisymmetrized so
    the reality condition holds; the helical construction makes the result
    exactly divergence-free with zero mean.  Deterministic in ``seed``;
    coefficients scale linearly with ``amplitude``.

    Keep kband <= floor(n/6) when the field will feed doubly-nested products
    (two levels of quadratic nonlinearity stay alias-free).
    """
    if not (1 <= kband <= grid.kmax_dealias):
        raise ValueError(
            f"kband must be in [1, {grid.kmax_dealias}] for n={grid.n}, got {kband}"
        )
    rng = np.random.default_rng(seed)
    n = grid.n
    band = (np.max(np.abs(grid.kvec), axis=0) <= kband) & (grid.k2 > 0)

    def draw() -> np.ndarray:
        g = (rng.standard_normal((n, n, n)) + 1j * rng.standard_normal((n, n, n))) / np.sqrt(2.0)
        g *= band
        return 0.5 * (g - np.conj(reverse_modes(g)))

    a_plus, a_minus = draw(), draw()
    hp, hm = helical_basis(grid)
    coeffs = amplitude * (a_plus * hp + a_minus * hm)
    return SpectralVectorField(grid, coeffs)
