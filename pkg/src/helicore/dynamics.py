"""Ideal Euler dynamics on the algebra of exact fields.

The state variable is the vorticity X = curl V, evolved by

    dX/dt = [X, curl_inv X],

which is the vorticity-transport form of the ideal incompressible Euler
equation.  Working in the vorticity keeps the right-hand side
well-conditioned (curl_inv is smoothing) and the bracket route keeps the
state exactly divergence-free and mean-free, so the algebra constraints are
structural, not enforced by projection.

Energy (1/2)(V, V) and helicity (X, V) of the recovered velocity
V = curl_inv X are first integrals; fixed-step RK4 preserves them to the
scheme's order and the per-step diagnostics track their drift.  Curl
eigenfields (Beltrami fields) make the bracket vanish and are fixed points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpError
from .fields import EPS_GUARD, SpectralVectorField, cross3, ensure_exact
from .forms import energy, l2_inner, l2_norm
from .grid import (
    full_spectrum,
    half_spectrum,
    transform_forward_half,
    transform_inverse_half,
)
from .operators import _cross_arr, _curl_arr, _curl_inv_arr, curl, curl_inv, lie_bracket


@dataclass(frozen=True)
class EvolveConfig:
    """Fixed-step integration plan: dt, step count, recording cadence."""

    dt: float
    steps: int
    record_every: int = 1
    snapshot_every: int = 0  # 0 = never
    scheme: str = "rk4"

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive and finite, got {self.dt}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not (1 <= self.record_every <= self.steps):
            raise ValueError(
                f"record_every must be in [1, steps={self.steps}], got {self.record_every}"
            )
        if self.snapshot_every < 0:
            raise ValueError(f"snapshot_every must be >= 0, got {self.snapshot_every}")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}; only 'rk4' is implemented")

    @property
    def total_time(self) -> float:
        return self.dt * self.steps


@dataclass(frozen=True)
class DiagnosticsRow:
    step: int
    t: float
    energy: float
    helicity: float
    stationarity_residual: float
    max_divergence: float

    def as_tuple(self) -> tuple:
        return (
            self.step,
            self.t,
            self.energy,
            self.helicity,
            self.stationarity_residual,
            self.max_divergence,
        )


@dataclass
class DiagnosticsSeries:
    """Per-step conservation records; first row is always step 0."""

    rows: list[DiagnosticsRow] = field(default_factory=list)

    def append(self, row: DiagnosticsRow) -> None:
        if self.rows:
            if row.t <= self.rows[-1].t:
                raise ValueError("diagnostic times must be strictly increasing")
        elif row.step != 0:
            raise ValueError("first diagnostics row must be at step 0")
        self.rows.append(row)

    @property
    def first(self) -> DiagnosticsRow:
        return self.rows[0]

    @property
    def last(self) -> DiagnosticsRow:
        return self.rows[-1]

    def energy_drift(self) -> float:
        """|E_last - E_0| / max(|E_0|, guard)."""
        return abs(self.last.energy - self.first.energy) / max(abs(self.first.energy), EPS_GUARD)

    def helicity_drift(self) -> float:
        """|m_last - m_0| / max(|m_0|, guard); helicity may legitimately be ~0."""
        return abs(self.last.helicity - self.first.helicity) / max(
            abs(self.first.helicity), EPS_GUARD
        )


def _rhs_arr(grid, coeffs):
    # [X, curl_inv X] = curl((curl_inv X) x X); exact-by-construction output
    v = _curl_inv_arr(grid, coeffs)
    return _curl_arr(grid, _cross_arr(grid, v, coeffs))


def _rhs_half(grid, ch):
    # same right-hand side on the Hermitian half spectrum (real-field fast path)
    v = cross3(grid.kvec_half, ch)
    v *= grid.inv_k2_half
    v *= 1j
    phys = transform_inverse_half(grid, np.concatenate([v, ch]))
    prod = cross3(phys[:3], phys[3:])
    sp = transform_forward_half(grid, prod)
    sp *= grid.dealias_mask_half
    out = cross3(grid.kvec_half, sp)
    out *= 1j
    return out


def _step_rk4_half(grid, ch, dt):
    k1 = _rhs_half(grid, ch)
    k2 = _rhs_half(grid, ch + (0.5 * dt) * k1)
    k3 = _rhs_half(grid, ch + (0.5 * dt) * k2)
    k4 = _rhs_half(grid, ch + dt * k3)
    return ch + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def euler_rhs(x: SpectralVectorField) -> SpectralVectorField:
    """Right-hand side [X, curl_inv X] of the vorticity equation."""
    ensure_exact(x, what="vorticity state")
    return SpectralVectorField(x.grid, _rhs_arr(x.grid, x.coeffs))


def step_rk4(x: SpectralVectorField, dt: float) -> SpectralVectorField:
    """One classical four-stage Runge-Kutta step of the vorticity equation.

    The step input is validated once; the stage states are exact by
    construction (linear combinations of exact fields and bracket outputs).
    """
    g = x.grid
    c = x.coeffs
    k1 = euler_rhs(x).coeffs
    k2 = _rhs_arr(g, c + (0.5 * dt) * k1)
    k3 = _rhs_arr(g, c + (0.5 * dt) * k2)
    k4 = _rhs_arr(g, c + dt * k3)
    return SpectralVectorField(g, c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def stationarity_residual(y: SpectralVectorField) -> float:
    """||[Y, curl_inv Y]|| / max(||Y||^2, guard); zero iff Y is a steady state.

    Steady states of the vorticity equation are exactly the critical points
    of the kinetic energy on the transport orbit of Y, i.e. the fields
    commuting with their own velocity; Beltrami fields are the eigenfield
    case.
    """
    ensure_exact(y, what="field")
    num = l2_norm(lie_bracket(y, curl_inv(y)))
    return num / max(l2_norm(y) ** 2, EPS_GUARD)


def beltrami_check(y: SpectralVectorField) -> tuple[float, float]:
    """Rayleigh estimate of a curl eigenvalue and the eigen-residual.

    Returns (lambda_hat, residual) with lambda_hat = (curl Y, Y)/(Y, Y) and
    residual = ||curl Y - lambda_hat Y|| / ||Y||.  Zero fields are rejected.
    """
    ensure_exact(y, what="field")
    ysq = l2_inner(y, y)
    if ysq <= 0.0:
        raise ValueError("beltrami_check requires a nonzero field")
    w = curl(y)
    lam = l2_inner(w, y) / ysq
    residual = l2_norm(w - lam * y) / math.sqrt(ysq)
    return lam, residual


def evolve(
    x0: SpectralVectorField,
    cfg: EvolveConfig,
) -> tuple[SpectralVectorField, DiagnosticsSeries, list[tuple[int, SpectralVectorField]]]:
    """Integrate the vorticity equation from x0 under ``cfg``.

    Returns (final state, diagnostics, snapshots), where diagnostics rows
    are recorded at step 0, every ``record_every`` steps, and at the final
    step, and snapshots are (step, state) pairs taken every
    ``snapshot_every`` steps (including step 0) when enabled.

    Raises :class:`BlowUpError` as soon as the state stops being finite
    (dt too large for the data); the partial diagnostics ride along on the
    exception.

    The loop runs on the Hermitian half spectrum (the state is a real
    field), which matches the full-cube :func:`step_rk4` to roundoff.
    """
    ensure_exact(x0, what="initial vorticity")
    grid = x0.grid
    series = DiagnosticsSeries()
    snapshots: list[tuple[int, SpectralVectorField]] = []

    def materialize(ch: np.ndarray) -> SpectralVectorField:
        return SpectralVectorField(grid, full_spectrum(grid, ch))

    def record(step: int, state: SpectralVectorField) -> None:
        v = curl_inv(state)
        series.append(
            DiagnosticsRow(
                step=step,
                t=step * cfg.dt,
                energy=energy(v),
                helicity=l2_inner(state, v),
                stationarity_residual=stationarity_residual(state),
                max_divergence=state.divergence_residual(),
            )
        )

    record(0, x0)
    if cfg.snapshot_every > 0:
        snapshots.append((0, x0))

    ch = half_spectrum(grid, x0.coeffs)
    x = x0
    for step in range(1, cfg.steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):  # blow-up caught below
            ch = _step_rk4_half(grid, ch, cfg.dt)
            sq = np.vdot(ch, ch)  # single-pass finiteness probe
        if not math.isfinite(abs(sq)):
            raise BlowUpError(
                f"non-finite state at step {step} (t={step * cfg.dt:.6g}); "
                "reduce dt or the initial amplitude",
                step=step,
                diagnostics=series,
            )
        want_record = step % cfg.record_every == 0 or step == cfg.steps
        want_snapshot = cfg.snapshot_every > 0 and step % cfg.snapshot_every == 0
        if want_record or want_snapshot:
            x = materialize(ch)
            if want_record:
                record(step, x)
            if want_snapshot:
                snapshots.append((step, x))

    # the final step always records, so x is the materialized final state
    return x, series, snapshots
