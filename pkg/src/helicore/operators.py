"""Differential operators and the Lie-algebra structure of exact fields.

Spectral operators (curl, inverse curl, gradient, divergence) act per mode;
quadratic operations (cross product, advection) go through physical space
and are dealiased on the way back.  The Lie bracket of divergence-free
fields is computed as curl(Y x X), which equals the advective commutator
(X.grad)Y - (Y.grad)X and is exactly divergence-free and mean-free mode by
mode, so time stepping cannot drift off the algebra.

Each residual evaluator turns one operator identity into a scale-free
number: ||lhs - rhs|| / max(||lhs||, ||rhs||, guard).  For band-limited
inputs (all products alias-free) these are roundoff-sized.
"""

from __future__ import annotations

import numpy as np

from .fields import (
    EPS_GUARD,
    EXACTNESS_TOL,
    SpectralVectorField,
    cross3,
    ensure_divergence_free,
    ensure_exact,
    leray_project,
)
from .grid import GridSpec, dealias, transform_forward, transform_inverse

# Array-level kernels shared by the public operators and the integrator's
# hot path (which validates its state once per step, not per call).


def _curl_arr(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    out = cross3(grid.kvec, coeffs)
    out *= 1j
    return out


def _curl_inv_arr(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    out = cross3(grid.kvec, coeffs)
    out *= grid.inv_k2
    out *= 1j
    return out


def _cross_arr(grid: GridSpec, ca: np.ndarray, cb: np.ndarray) -> np.ndarray:
    both = transform_inverse(grid, np.concatenate([ca, cb]))
    prod = cross3(both[:3], both[3:])
    return dealias(transform_forward(grid, prod), grid)


def curl(x: SpectralVectorField) -> SpectralVectorField:
    """Per-mode curl: chat(k) -> i k x chat(k).  Kills gradients and constants."""
    return SpectralVectorField(x.grid, _curl_arr(x.grid, x.coeffs))


def curl_inv(x: SpectralVectorField, tol: float = EXACTNESS_TOL) -> SpectralVectorField:
    """Inverse curl on exact fields: helical amplitudes a_s(k) -> a_s(k)/(s|k|).

    Equivalently chat(k) -> (i k x chat(k))/|k|^2, which satisfies
    curl(curl_inv(X)) = curl_inv(curl(X)) = X on exact fields.  Raises
    :class:`DomainError` when the input has a mean mode or divergence beyond
    ``tol``; the operator exists only on exact divergence-free fields.
    """
    ensure_exact(x, tol, what="curl_inv input")
    return SpectralVectorField(x.grid, _curl_inv_arr(x.grid, x.coeffs))


def divergence(x: SpectralVectorField) -> np.ndarray:
    """Scalar coefficients of div X: i k . chat(k)."""
    return 1j * np.einsum("j...,j...->...", x.grid.kvec, x.coeffs)


def gradient(grid: GridSpec, scalar_coeffs: np.ndarray) -> SpectralVectorField:
    """Gradient field of a scalar given by its coefficients: i k shat(k)."""
    out = 1j * grid.kvec * np.asarray(scalar_coeffs, dtype=np.complex128)
    return SpectralVectorField(grid, out)


def cross(x: SpectralVectorField, y: SpectralVectorField) -> SpectralVectorField:
    """Pointwise vector product X x Y (physical space, dealiased result).

    Alias-free whenever both inputs live inside the dealias mask.
    """
    x._require_same_grid(y)
    return SpectralVectorField(x.grid, _cross_arr(x.grid, x.coeffs, y.coeffs))


def pointwise_dot(x: SpectralVectorField, y: SpectralVectorField) -> np.ndarray:
    """Coefficients of the scalar g(X, Y) = sum_j X_j Y_j (dealiased)."""
    x._require_same_grid(y)
    g = x.grid
    both = transform_inverse(g, np.concatenate([x.coeffs, y.coeffs]))
    prod = np.einsum("j...,j...->...", both[:3], both[3:])
    return dealias(transform_forward(g, prod), g)


def advective_derivative(x: SpectralVectorField, y: SpectralVectorField) -> SpectralVectorField:
    """Flat-torus covariant derivative (X.grad)Y, pseudo-spectral, dealiased."""
    x._require_same_grid(y)
    g = x.grid
    n = g.n
    # dY[l, j] = d(Y_j)/dx_l as physical samples; 9 transforms in one batch.
    dy_coeffs = 1j * g.kvec[:, None] * y.coeffs[None, :]
    batch = np.concatenate([x.coeffs, dy_coeffs.reshape(9, n, n, n)])
    phys = transform_inverse(g, batch)
    xp, dyp = phys[:3], phys[3:].reshape(3, 3, n, n, n)
    out = np.einsum("l...,lj...->j...", xp, dyp)
    return SpectralVectorField(g, dealias(transform_forward(g, out), g))


def lie_bracket(
    x: SpectralVectorField,
    y: SpectralVectorField,
    tol: float = EXACTNESS_TOL,
) -> SpectralVectorField:
    """Commutator [X, Y] of divergence-free fields, computed as curl(Y x X).

    The curl-of-cross route keeps the result exactly divergence-free and
    mean-free in floating point; it agrees with (X.grad)Y - (Y.grad)X to
    roundoff for band-limited inputs.  Raises :class:`DomainError` when an
    input's divergence exceeds ``tol``.
    """
    ensure_divergence_free(x, tol, what="bracket argument X")
    ensure_divergence_free(y, tol, what="bracket argument Y")
    return SpectralVectorField(x.grid, _curl_arr(x.grid, _cross_arr(x.grid, y.coeffs, x.coeffs)))


def advective_commutator(x: SpectralVectorField, y: SpectralVectorField) -> SpectralVectorField:
    """(X.grad)Y - (Y.grad)X; oracle route for the bracket, no preconditions."""
    return advective_derivative(x, y) - advective_derivative(y, x)


# -- identity residuals --------------------------------------------------------


def _norm(x: SpectralVectorField) -> float:
    # plain coefficient 2-norm; residuals are ratios, so the volume factor cancels
    return float(np.linalg.norm(x.coeffs))


def relative_difference(a: SpectralVectorField, b: SpectralVectorField) -> float:
    """||a - b|| / max(||a||, ||b||, guard) on coefficient arrays."""
    return _norm(a - b) / max(_norm(a), _norm(b), EPS_GUARD)


def bracket_route_residual(x: SpectralVectorField, y: SpectralVectorField) -> float:
    """Agreement of curl(Y x X) with the advective commutator."""
    return relative_difference(lie_bracket(x, y), advective_commutator(x, y))


def inverse_curl_bracket_residual(x: SpectralVectorField, y: SpectralVectorField) -> float:
    """Residual of the identity curl_inv([X, Y]) = P(Y x X).

    Y must be exact; X divergence-free.  The left side transports the 2-form
    proxy of Y along X and inverts the curl; the right side projects the
    pointwise product.  Zero analytically for any such pair.
    """
    ensure_exact(y, what="Y")
    lhs = curl_inv(lie_bracket(x, y))
    rhs = leray_project(cross(y, x))
    return relative_difference(lhs, rhs)


def projected_cross_skew_residual(
    x: SpectralVectorField,
    y: SpectralVectorField,
    z: SpectralVectorField,
) -> float:
    """Skew-symmetry of W -> P(W x X) on exact fields:

    (P(Y x X), Z) + (Y, P(Z x X)) = 0  for exact Y, Z and arbitrary X.

    Normalized by the Cauchy-Schwarz bound of the summands, so the residual
    stays meaningful when both terms individually vanish.
    """
    from .forms import l2_inner, l2_norm  # local import; forms builds on operators

    ensure_exact(y, what="Y")
    ensure_exact(z, what="Z")
    pyx = leray_project(cross(y, x))
    pzx = leray_project(cross(z, x))
    t1 = l2_inner(pyx, z)
    t2 = l2_inner(y, pzx)
    den = max(l2_norm(pyx) * l2_norm(z), l2_norm(y) * l2_norm(pzx), EPS_GUARD)
    return abs(t1 + t2) / den


def projected_advection_residuals(
    x: SpectralVectorField,
    y: SpectralVectorField,
) -> tuple[float, float]:
    """Residuals of the two projector identities for P = curl_inv o curl:

    P(grad_X Y + grad_Y X) = curl_inv([X, curl Y] + [Y, curl X])
    P(grad_X X)            = curl_inv([X, curl X])

    Inputs must be exact and band-limited enough that the nested products
    stay alias-free (kband <= floor(n/6)).
    """
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    lhs1 = leray_project(advective_derivative(x, y) + advective_derivative(y, x))
    rhs1 = curl_inv(lie_bracket(x, curl(y)) + lie_bracket(y, curl(x)))
    lhs2 = leray_project(advective_derivative(x, x))
    rhs2 = curl_inv(lie_bracket(x, curl(x)))
    return relative_difference(lhs1, rhs1), relative_difference(lhs2, rhs2)


def vector_identity_residuals(
    x: SpectralVectorField,
    y: SpectralVectorField,
) -> tuple[float, float]:
    """Residuals of the elementary three-dimensional identities

    X x curl Y + Y x curl X = -(grad_X Y + grad_Y X) + grad g(X, Y)
    grad_X X = curl X x X + (1/2) grad g(X, X)

    valid for arbitrary (band-limited) fields.
    """
    g = x.grid
    lhs1 = cross(x, curl(y)) + cross(y, curl(x))
    rhs1 = -(advective_derivative(x, y) + advective_derivative(y, x)) + gradient(
        g, pointwise_dot(x, y)
    )
    lhs2 = advective_derivative(x, x)
    rhs2 = cross(curl(x), x) + 0.5 * gradient(g, pointwise_dot(x, x))
    return relative_difference(lhs1, rhs1), relative_difference(lhs2, rhs2)


def jacobi_residual(
    x: SpectralVectorField,
    y: SpectralVectorField,
    z: SpectralVectorField,
) -> float:
    """|| [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] || over the largest term norm."""
    t1 = lie_bracket(x, lie_bracket(y, z))
    t2 = lie_bracket(y, lie_bracket(z, x))
    t3 = lie_bracket(z, lie_bracket(x, y))
    num = _norm(t1 + t2 + t3)
    return num / max(_norm(t1), _norm(t2), _norm(t3), EPS_GUARD)
