"""Euler dynamics: right-hand side, RK4, conservation, stationarity."""

import numpy as np
import pytest

from helicore import (
    BlowUpError,
    DomainError,
    EvolveConfig,
    GridSpec,
    abc_field,
    advective_commutator,
    beltrami_check,
    curl,
    curl_inv,
    energy,
    euler_rhs,
    evolve,
    helical_mode,
    l2_inner,
    l2_norm,
    random_exact_field,
    relative_difference,
    stationarity_residual,
    step_rk4,
    zero_field,
)

from test_fields import constant_field


class TestEvolveConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            EvolveConfig(dt=0.0, steps=10)
        with pytest.raises(ValueError):
            EvolveConfig(dt=1e-3, steps=0)
        with pytest.raises(ValueError):
            EvolveConfig(dt=1e-3, steps=10, record_every=11)
        with pytest.raises(ValueError):
            EvolveConfig(dt=1e-3, steps=10, snapshot_every=-1)
        with pytest.raises(ValueError):
            EvolveConfig(dt=1e-3, steps=10, scheme="euler")

    def test_total_time(self):
        assert EvolveConfig(dt=0.25, steps=8).total_time == 2.0


class TestEulerRhs:
    def test_beltrami_is_stationary(self, grid16):
        v = abc_field(grid16, 1, 1, 1)
        assert l2_norm(euler_rhs(v)) <= 1e-13 * l2_norm(v) ** 2

    def test_single_helical_mode_is_stationary(self, grid32):
        m = helical_mode(grid32, (2, 1, 0), +1)
        assert l2_norm(euler_rhs(m)) <= 1e-13 * l2_norm(m) ** 2

    def test_velocity_form_equivalence(self, grid32):
        # dX/dt = [X, curl_inv X] matches the advective-route [curl V, V]
        x = random_exact_field(grid32, 7, 2)
        v = curl_inv(x)
        assert relative_difference(euler_rhs(x), advective_commutator(curl(v), v)) < 1e-12

    def test_rejects_nonexact(self, grid16):
        with pytest.raises(DomainError):
            euler_rhs(constant_field(grid16, (1.0, 0, 0)))


class TestStepRk4:
    def test_beltrami_fixed_point(self, grid16):
        v = abc_field(grid16, 1, 1, 1)
        assert relative_difference(step_rk4(v, 0.3), v) < 1e-13

    def test_zero_dt_is_identity(self, grid32):
        x = random_exact_field(grid32, 3, 2)
        assert np.array_equal(step_rk4(x, 0.0).coeffs, x.coeffs)

    def test_local_order_is_five(self, grid16):
        # single-step error against a finely resolved reference drops ~2^5
        x = random_exact_field(grid16, 11, 2, amplitude=1.0)
        dt = 0.05

        def reference(h, substeps=64):
            y = x
            for _ in range(substeps):
                y = step_rk4(y, h / substeps)
            return y

        err_full = l2_norm(step_rk4(x, dt) - reference(dt))
        err_half = l2_norm(step_rk4(x, dt / 2) - reference(dt / 2))
        ratio = err_full / err_half
        assert 20.0 < ratio < 48.0


class TestEvolve:
    def test_zero_field_stays_zero(self, grid16):
        cfg = EvolveConfig(dt=1e-2, steps=5)
        final, series, snaps = evolve(zero_field(grid16), cfg)
        assert l2_norm(final) == 0.0
        assert all(r.energy == 0.0 for r in series.rows)

    def test_record_cadence(self, grid16):
        x0 = random_exact_field(grid16, 1, 2, 0.5)
        cfg = EvolveConfig(dt=1e-3, steps=10, record_every=5)
        _, series, _ = evolve(x0, cfg)
        assert [r.step for r in series.rows] == [0, 5, 10]
        assert series.rows[1].t == pytest.approx(5e-3)

    def test_final_step_recorded_when_not_multiple(self, grid16):
        x0 = random_exact_field(grid16, 1, 2, 0.5)
        cfg = EvolveConfig(dt=1e-3, steps=7, record_every=3)
        _, series, _ = evolve(x0, cfg)
        assert [r.step for r in series.rows] == [0, 3, 6, 7]

    def test_snapshot_cadence(self, grid16):
        x0 = random_exact_field(grid16, 1, 2, 0.5)
        cfg = EvolveConfig(dt=1e-3, steps=10, record_every=10, snapshot_every=5)
        _, _, snaps = evolve(x0, cfg)
        assert [s for s, _ in snaps] == [0, 5, 10]

    def test_matches_public_stepper(self, grid16):
        # the half-spectrum loop and the full-cube step agree to roundoff
        x0 = random_exact_field(grid16, 2, 2, 1.0)
        cfg = EvolveConfig(dt=2e-3, steps=3, record_every=3)
        final, _, _ = evolve(x0, cfg)
        manual = x0
        for _ in range(3):
            manual = step_rk4(manual, 2e-3)
        assert relative_difference(final, manual) < 1e-13

    def test_short_run_conservation(self, grid16):
        x0 = random_exact_field(grid16, 5, 2, 0.5)
        cfg = EvolveConfig(dt=1e-3, steps=100, record_every=50)
        _, series, _ = evolve(x0, cfg)
        assert series.energy_drift() < 1e-9
        assert series.helicity_drift() < 1e-9
        assert max(r.max_divergence for r in series.rows) < 1e-12

    def test_beltrami_invariance(self, grid16):
        v = abc_field(grid16, 1, 1, 1)
        cfg = EvolveConfig(dt=1e-3, steps=100, record_every=100)
        final, series, _ = evolve(v, cfg)
        assert relative_difference(final, v) < 1e-12
        assert series.last.stationarity_residual < 1e-13

    def test_blowup_aborts_with_diagnostics(self, grid16):
        x0 = random_exact_field(grid16, 4, 2, amplitude=50.0)
        cfg = EvolveConfig(dt=1.0, steps=50, record_every=1)
        with pytest.raises(BlowUpError) as info:
            evolve(x0, cfg)
        assert info.value.step is not None and info.value.step <= 50
        assert info.value.diagnostics is not None
        assert info.value.diagnostics.rows[0].step == 0


class TestStationarity:
    def test_beltrami(self, grid16):
        assert stationarity_residual(abc_field(grid16, 1, 1, 1)) < 1e-13

    def test_zero_field(self, grid16):
        assert stationarity_residual(zero_field(grid16)) == 0.0

    def test_mixed_modes_not_stationary(self, grid32):
        y = helical_mode(grid32, (1, 0, 0), +1) + helical_mode(grid32, (1, 1, 0), +1)
        assert stationarity_residual(y) > 1e-3


class TestBeltramiCheck:
    def test_abc(self, grid16):
        lam, res = beltrami_check(abc_field(grid16, 1, 1, 1))
        assert lam == pytest.approx(1.0, abs=1e-13)
        assert res < 1e-13

    def test_helical_mode(self, grid32):
        lam, res = beltrami_check(helical_mode(grid32, (2, 2, 1), -1))
        assert lam == pytest.approx(-3.0, rel=1e-13)
        assert res < 1e-13

    def test_balanced_mix_has_no_eigenvalue(self, grid32):
        plus = helical_mode(grid32, (1, 0, 0), +1)
        minus = helical_mode(grid32, (0, 1, 0), -1)
        y = plus + minus  # equal energy on +1 and -1
        lam, res = beltrami_check(y)
        assert abs(lam) < 1e-12
        assert res == pytest.approx(1.0, rel=1e-10)

    def test_zero_field_rejected(self, grid16):
        with pytest.raises(ValueError):
            beltrami_check(zero_field(grid16))
