"""Curvature of the group of exact volume-preserving diffeomorphisms.

For the bi-invariant pseudo-metric the connection and curvature have the
closed Lie-algebra form

    conn(X, Y)      = (1/2)[X, Y]
    curv(X, Y)Z     = -(1/4)[[X, Y], Z]
    K0(X, Y)        = (1/4) <[X, Y], [X, Y]>          (= (1/4) integral g([X,Y], Y x X))

for an orthonormal pair.  The sectional curvature of the right-invariant
structure is the five-term integral expression evaluated by
:func:`rightinv_curvature_terms`; on verified curl eigenpairs it collapses
to the four-term eigenfield formula of :func:`sectional_curvature_eigenpair`.

The pairing is indefinite, so "orthonormal" means |<X, X>| = 1 with a
recorded sign; :func:`orthonormalize_pair` does the bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .fields import EPS_GUARD, SpectralVectorField, ensure_exact
from .forms import biinvariant_form, l2_inner
from .operators import cross, curl, curl_inv, lie_bracket, relative_difference


def biinvariant_connection(x: SpectralVectorField, y: SpectralVectorField) -> SpectralVectorField:
    """Covariant derivative of the bi-invariant structure: (1/2)[X, Y]."""
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    return 0.5 * lie_bracket(x, y)


def biinvariant_curvature(
    x: SpectralVectorField,
    y: SpectralVectorField,
    z: SpectralVectorField,
) -> SpectralVectorField:
    """Curvature tensor of the bi-invariant structure: -(1/4)[[X, Y], Z]."""
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    ensure_exact(z, what="Z")
    return -0.25 * lie_bracket(lie_bracket(x, y), z)


def sectional_biinvariant_both(
    x: SpectralVectorField,
    y: SpectralVectorField,
) -> tuple[float, float]:
    """Both routes to the bi-invariant sectional curvature of span(X, Y).

    Returns ((1/4)<B, B>, (1/4)(B, Y x X)) with B = [X, Y]; the two agree
    analytically because B = curl(Y x X) and curl_inv strips exactly the
    non-exact part of Y x X.
    """
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    b = lie_bracket(x, y)
    via_form = 0.25 * biinvariant_form(b, b)
    via_integral = 0.25 * l2_inner(b, cross(y, x))
    return via_form, via_integral


def sectional_curvature_biinvariant(
    x: SpectralVectorField,
    y: SpectralVectorField,
    normalize: bool = False,
) -> float:
    """Bi-invariant sectional curvature (1/4)<[X, Y], [X, Y]>.

    With ``normalize`` the pair is first orthonormalized with respect to the
    absolute value of the pairing (raising :class:`DomainError` on a
    degenerate pair); otherwise the raw bilinear value is returned, which is
    zero exactly when the fields commute.
    """
    if normalize:
        x, y, _ = orthonormalize_pair(x, y, form="biinvariant")
    return sectional_biinvariant_both(x, y)[0]


@dataclass(frozen=True)
class RightInvariantCurvatureTerms:
    """The five integrals of the right-invariant sectional curvature.

    double_bracket_right = -(1/2) (X, [[X, Y], Y])
    double_bracket_left  = -(1/2) ([X, [X, Y]], Y)
    bracket_energy       = -(3/4) ([X, Y], [X, Y])
    vorticity_stretch    =  (curl_inv [X, curl X], Y x curl Y)
    mixed_transport      = -(1/4) (curl_inv([X, curl Y] - [curl X, Y]),
                                   X x curl Y - curl X x Y)
    """

    double_bracket_right: float
    double_bracket_left: float
    bracket_energy: float
    vorticity_stretch: float
    mixed_transport: float

    @property
    def total(self) -> float:
        return (
            self.double_bracket_right
            + self.double_bracket_left
            + self.bracket_energy
            + self.vorticity_stretch
            + self.mixed_transport
        )

    def as_dict(self) -> dict[str, float]:
        return {
            "double_bracket_right": self.double_bracket_right,
            "double_bracket_left": self.double_bracket_left,
            "bracket_energy": self.bracket_energy,
            "vorticity_stretch": self.vorticity_stretch,
            "mixed_transport": self.mixed_transport,
        }


def rightinv_curvature_terms(
    x: SpectralVectorField,
    y: SpectralVectorField,
) -> RightInvariantCurvatureTerms:
    """Evaluate the five-term right-invariant sectional curvature integrals.

    Inputs must be exact and band-limited enough for the nested products;
    the formula assumes the pair was normalized by the caller's convention.
    """
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    bxy = lie_bracket(x, y)
    wx = curl(x)
    wy = curl(y)

    t1 = -0.5 * l2_inner(x, lie_bracket(bxy, y))
    t2 = -0.5 * l2_inner(lie_bracket(x, bxy), y)
    t3 = -0.75 * l2_inner(bxy, bxy)
    t4 = l2_inner(curl_inv(lie_bracket(x, wx)), cross(y, wy))
    t5 = -0.25 * l2_inner(
        curl_inv(lie_bracket(x, wy) - lie_bracket(wx, y)),
        cross(x, wy) - cross(wx, y),
    )
    return RightInvariantCurvatureTerms(t1, t2, t3, t4, t5)


def sectional_curvature_rightinv(x: SpectralVectorField, y: SpectralVectorField) -> float:
    """Sum of the five right-invariant curvature terms for span(X, Y)."""
    return rightinv_curvature_terms(x, y).total


def sectional_curvature_eigenpair(
    x: SpectralVectorField,
    y: SpectralVectorField,
    lam: float,
    mu: float,
    tol: float = 1e-10,
) -> float:
    """Eigenfield form of the right-invariant sectional curvature.

    Requires curl X = lam X and curl Y = mu Y to within ``tol`` (relative);
    then

    K = -(1/2)(X, [[X, Y], Y]) - (1/2)([X, [X, Y]], Y)
        -(3/4)([X, Y], [X, Y]) - ((lam - mu)^2 / 4)(curl_inv [X, Y], X x Y).
    """
    ensure_exact(x, what="X")
    ensure_exact(y, what="Y")
    for name, f, ev in (("X", x, lam), ("Y", y, mu)):
        res = relative_difference(curl(f), ev * f)
        if res > tol:
            raise DomainError(
                f"field {name} is not a curl eigenfield for eigenvalue {ev} "
                f"(residual {res:.3e} > {tol:.1e})"
            )
    bxy = lie_bracket(x, y)
    t1 = -0.5 * l2_inner(x, lie_bracket(bxy, y))
    t2 = -0.5 * l2_inner(lie_bracket(x, bxy), y)
    t3 = -0.75 * l2_inner(bxy, bxy)
    t4 = -0.25 * (lam - mu) ** 2 * l2_inner(curl_inv(bxy), cross(x, y))
    return t1 + t2 + t3 + t4


def orthonormalize_pair(
    x: SpectralVectorField,
    y: SpectralVectorField,
    form: str = "l2",
    tol: float = 1e-12,
) -> tuple[SpectralVectorField, SpectralVectorField, tuple[int, int]]:
    """Gram-Schmidt under the chosen form with sign bookkeeping.

    ``form`` is "l2" or "biinvariant".  Returns (X', Y', (s1, s2)) with
    |<X', X'>| = 1, <X', Y'> = 0, |<Y', Y'>| = 1 and s_i the signs of the
    diagonal (always +1 for l2; either sign for the indefinite pairing).
    Raises :class:`DomainError` when the pair's Gram matrix is singular or a
    null direction blocks the normalization.
    """
    if form == "l2":
        inner = l2_inner
    elif form == "biinvariant":
        inner = biinvariant_form
    else:
        raise ValueError(f"form must be 'l2' or 'biinvariant', got {form!r}")

    g11 = inner(x, x)
    g12 = inner(x, y)
    g22 = inner(y, y)
    scale = max(abs(g11), abs(g12), abs(g22), EPS_GUARD)
    det = g11 * g22 - g12 * g12
    if abs(det) <= tol * scale**2:
        raise DomainError(f"pair is degenerate under the {form} form (|det| = {abs(det):.3e})")
    if abs(g11) <= tol * scale:
        raise DomainError(f"first field is null under the {form} form; cannot normalize")

    s1 = 1 if g11 > 0 else -1
    x_unit = (1.0 / math.sqrt(abs(g11))) * x
    # <x_unit, x_unit> = s1, so the projection coefficient carries s1
    y_perp = y - (s1 * inner(y, x_unit)) * x_unit
    g_perp = inner(y_perp, y_perp)
    if abs(g_perp) <= tol * scale:
        raise DomainError(f"second field is null after projection under the {form} form")
    s2 = 1 if g_perp > 0 else -1
    y_unit = (1.0 / math.sqrt(abs(g_perp))) * y_perp
    return x_unit, y_unit, (s1, s2)
