"""Bilinear forms and spectral invariants of the curl operator.

The L2 product is evaluated by Parseval in spectral space, which is exact
for band-limited fields.  On exact divergence-free fields the pairing
<X, Y> = (X, curl_inv Y) is symmetric and nondegenerate but indefinite: a
negative-helicity mode has <X, X> < 0.  The signed eta sums over the curl
spectrum vanish identically on the torus because eigenvalues come in
+-|k| pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import EPS_GUARD, EXACTNESS_TOL, SpectralVectorField, ensure_exact
from .grid import VOLUME, GridSpec, enumerate_wavevectors
from .operators import cross, curl, curl_inv, lie_bracket


def l2_inner(x: SpectralVectorField, y: SpectralVectorField) -> float:
    """(X, Y) = integral of g(X, Y) over the torus, via Parseval.

    Equals (2pi)^3 * Re sum_k chat_X(k) . conj(chat_Y(k)).
    """
    x._require_same_grid(y)
    return VOLUME * float(np.real(np.vdot(y.coeffs, x.coeffs)))


def l2_norm(x: SpectralVectorField) -> float:
    return float(np.sqrt(max(l2_inner(x, x), 0.0)))


def biinvariant_form(
    x: SpectralVectorField,
    y: SpectralVectorField,
    tol: float = EXACTNESS_TOL,
) -> float:
    """The pairing <X, Y> = (X, curl_inv Y) on exact divergence-free fields.

    Symmetric (curl is L2 self-adjoint), invariant under the adjoint action,
    nondegenerate (<X, curl X> = (X, X) > 0), and indefinite: the sign of
    <X, X> on a single helical mode is the helicity sign.
    """
    ensure_exact(x, tol, what="X")
    return l2_inner(x, curl_inv(y, tol))


def two_form_pairing(
    x_proxy: SpectralVectorField,
    y_proxy: SpectralVectorField,
    tol: float = EXACTNESS_TOL,
) -> float:
    """The same pairing read on exact 2-form proxies.

    A field X stands in for the exact 2-form it contracts out of the volume
    element; the pairing of two such proxies reduces to the bi-invariant
    form of the fields, and the symmetry of this form is what makes the
    signed spectral counts of :func:`eta_partial` well defined.
    """
    return biinvariant_form(x_proxy, y_proxy, tol)


def transport_invariance_residual(
    x: SpectralVectorField,
    y: SpectralVectorField,
    z: SpectralVectorField,
) -> float:
    """Invariance of the pairing under transport along an arbitrary field X:

    <curl(Y x X), Z> + <Y, curl(Z x X)> = 0

    for exact Y, Z.  X may have divergence and a mean; curl(Y x X) realizes
    the transport of Y's 2-form proxy along X in field language.  Normalized
    by the Cauchy-Schwarz bound of the summands.
    """
    ensure_exact(y, what="Y")
    ensure_exact(z, what="Z")
    ty = curl(cross(y, x))
    tz = curl(cross(z, x))
    rz = curl_inv(z)
    rtz = curl_inv(tz)
    t1 = l2_inner(ty, rz)
    t2 = l2_inner(y, rtz)
    den = max(l2_norm(ty) * l2_norm(rz), l2_norm(y) * l2_norm(rtz), EPS_GUARD)
    return abs(t1 + t2) / den


def ad_invariance_residual(
    x: SpectralVectorField,
    y: SpectralVectorField,
    z: SpectralVectorField,
) -> float:
    """ad-invariance of the pairing on the algebra of exact fields:

    <[X, Y], Z> + <Y, [X, Z]> = 0.

    Normalized by the Cauchy-Schwarz bound of the summands (degenerate
    choices such as X = Y make both terms individually vanish).
    """
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    ensure_exact(z, what="Z")
    bxy = lie_bracket(x, y)
    bxz = lie_bracket(x, z)
    rz = curl_inv(z)
    rbxz = curl_inv(bxz)
    t1 = l2_inner(bxy, rz)
    t2 = l2_inner(y, rbxz)
    den = max(l2_norm(bxy) * l2_norm(rz), l2_norm(y) * l2_norm(rbxz), EPS_GUARD)
    return abs(t1 + t2) / den


def energy(v: SpectralVectorField) -> float:
    """Kinetic energy (1/2)(V, V) of a velocity field."""
    return 0.5 * l2_inner(v, v)


def helicity(v: SpectralVectorField, tol: float = EXACTNESS_TOL) -> float:
    """Helicity (curl V, V) of an exact velocity field.

    Equals <X, X> for the vorticity X = curl V; a pseudo-scalar (flips sign
    under reflection) conserved by the ideal Euler flow.
    """
    ensure_exact(v, tol, what="velocity")
    return l2_inner(curl(v), v)


@dataclass(frozen=True)
class EtaReport:
    """Signed spectral sum over the curl eigenvalues inside a max-norm ball.

    Every conjugate pair {k, -k} of nonzero lattice vectors carries one
    independent amplitude per helicity sign for a real field, hence one curl
    eigenvalue +|k| and one -|k|; ``multiplicity_table`` rows are
    (|k|^2, lattice vector count, multiplicity per sign).
    """

    s: float
    kmax: int
    eta_partial: float
    positive_count: int
    negative_count: int
    multiplicity_table: list[tuple[int, int, int]]


def eta_partial(s: float, kmax: int, grid: GridSpec) -> EtaReport:
    """Partial signed sum sum_i sign(lambda_i) |lambda_i|^{-s} up to ``kmax``.

    The torus spectrum is symmetric (one +|k| and one -|k| eigenvalue per
    conjugate mode pair), so the sum cancels exactly, term by term; the
    report carries the multiplicity table that exhibits the pairing.
    """
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1 for a nonempty spectrum, got {kmax}")
    if kmax > grid.n // 2:
        raise ValueError(f"kmax must be <= n/2 = {grid.n // 2}, got {kmax}")
    shells: dict[int, int] = {}
    for wv in enumerate_wavevectors(grid, kmax):
        if wv.norm_sq > 0:
            shells[wv.norm_sq] = shells.get(wv.norm_sq, 0) + 1

    eta = 0.0
    table: list[tuple[int, int, int]] = []
    per_sign_total = 0
    for ksq in sorted(shells):
        count = shells[ksq]
        per_sign = count // 2
        weight = per_sign * float(ksq) ** (-s / 2.0)
        eta += weight - weight  # identical operands: exact cancellation
        table.append((ksq, count, per_sign))
        per_sign_total += per_sign

    return EtaReport(
        s=float(s),
        kmax=kmax,
        eta_partial=eta,
        positive_count=per_sign_total,
        negative_count=per_sign_total,
        multiplicity_table=table,
    )
