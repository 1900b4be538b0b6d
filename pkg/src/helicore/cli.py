"""Command-line surface: identity checks, evolution runs, curvature tables.

Exit codes: 0 success, 1 identity-suite failure, 2 invalid arguments or
configuration (including operator domain errors), 3 blow-up abort.
Set HELICORE_THREADS to cap FFT parallelism; results do not depend on it.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .curvature import (
    orthonormalize_pair,
    rightinv_curvature_terms,
    sectional_biinvariant_both,
    sectional_curvature_eigenpair,
)
from .dynamics import EvolveConfig, beltrami_check, evolve
from .errors import BlowUpError, ConfigError, DomainError, SnapshotFormatError
from .fields import hodge_decompose, leray_project, random_exact_field
from .forms import ad_invariance_residual, eta_partial, l2_norm, transport_invariance_residual
from .grid import GridSpec
from .io import (
    RunConfig,
    load_run_config,
    make_initial_field,
    parse_field_spec,
    parse_run_config,
    snapshot_path,
    write_diagnostics_csv,
    write_snapshot,
)
from .operators import (
    bracket_route_residual,
    gradient,
    inverse_curl_bracket_residual,
    jacobi_residual,
    projected_advection_residuals,
    projected_cross_skew_residual,
    vector_identity_residuals,
)


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


# -- check -----------------------------------------------------------------


def identity_suite(n: int, seed: int, band: int) -> list[tuple[str, float, float]]:
    """Run every operator identity on seeded fields; (name, residual, threshold)."""
    import numpy as np

    from .fields import helical_mode

    grid = GridSpec(n)
    x = random_exact_field(grid, seed, band)
    y = random_exact_field(grid, seed + 1, band)
    z = random_exact_field(grid, seed + 2, band)

    # a deliberately non-divergence-free transport field: x plus a gradient
    sin_coeffs = np.zeros((n, n, n), dtype=np.complex128)
    sin_coeffs[1, 0, 0] = -0.5j
    sin_coeffs[-1, 0, 0] = 0.5j  # sin(x1)
    x_dirty = x + gradient(grid, sin_coeffs)

    rows = [
        ("inverse-curl bracket identity", inverse_curl_bracket_residual(x, y), 1e-12),
        ("projected-cross skew-symmetry", projected_cross_skew_residual(x, y, z), 1e-12),
        ("pairing transport invariance", transport_invariance_residual(x, y, z), 1e-11),
        ("pairing transport invariance (div X != 0)",
         transport_invariance_residual(x_dirty, y, z), 1e-11),
        ("pairing ad-invariance", ad_invariance_residual(x, y, z), 1e-11),
    ]
    v1, v2 = vector_identity_residuals(x, y)
    rows += [
        ("cross/gradient identity", v1, 1e-11),
        ("self-advection identity", v2, 1e-11),
    ]
    p1, p2 = projected_advection_residuals(x, y)
    rows += [
        ("projected advection (pair)", p1, 1e-11),
        ("projected advection (self)", p2, 1e-11),
        ("jacobi identity", jacobi_residual(x, y, z), 1e-11),
        ("bracket route equivalence", bracket_route_residual(x, y), 1e-12),
    ]

    form_val, integral_val = sectional_biinvariant_both(x, y)
    denom = max(abs(form_val), abs(integral_val), 1e-30)
    rows.append(("sectional curvature cross-check", abs(form_val - integral_val) / denom, 1e-11))

    ex = helical_mode(grid, (1, 0, 0), +1)
    ey = helical_mode(grid, (1, 1, 0), -1)
    k_full = rightinv_curvature_terms(ex, ey).total
    k_eigen = sectional_curvature_eigenpair(ex, ey, 1.0, -float(np.sqrt(2.0)))
    rows.append(
        (
            "eigenpair curvature reduction",
            abs(k_full - k_eigen) / max(abs(k_full), abs(k_eigen), 1e-30),
            1e-10,
        )
    )
    return rows


def cmd_check(args: argparse.Namespace) -> int:
    if args.n < 6 * args.band:
        raise ConfigError(f"need n >= 6*band for alias-free nesting (n={args.n}, band={args.band})")
    rows = identity_suite(args.n, args.seed, args.band)
    width = max(len(name) for name, _, _ in rows)
    ok = True
    print(f"identity suite: n={args.n} seed={args.seed} band={args.band}")
    for name, residual, threshold in rows:
        passed = residual <= threshold
        ok = ok and passed
        verdict = "PASS" if passed else "FAIL"
        print(f"  {name:<{width}}  {residual:.3e}  <= {threshold:.0e}  {verdict}")
    print("all identities PASS" if ok else "identity FAILURE")
    return 0 if ok else 1


# -- evolve ------------------------------------------------------------------


def cmd_evolve(args: argparse.Namespace) -> int:
    if args.config:
        if args.init is not None:
            raise ConfigError("give either --config or --init flags, not both")
        cfg = load_run_config(args.config)
    else:
        if args.init is None:
            raise ConfigError("an initial field is required: --init or --config")
        cfg = parse_run_config(
            {
                "n": args.n,
                "init": parse_field_spec(args.init),
                "dt": args.dt,
                "steps": args.steps,
                "record_every": args.record_every,
                "snapshot_every": args.snapshot_every,
                "out": args.out,
            }
        )

    grid = GridSpec(cfg.n)
    x0 = make_initial_field(grid, cfg.init)
    plan = EvolveConfig(
        dt=cfg.dt,
        steps=cfg.steps,
        record_every=cfg.record_every,
        snapshot_every=cfg.snapshot_every,
    )
    csv_path = f"{cfg.out}.csv"
    try:
        final, series, snaps = evolve(x0, plan)
    except BlowUpError as exc:
        if exc.diagnostics is not None and exc.diagnostics.rows:
            write_diagnostics_csv(csv_path, exc.diagnostics)
            print(f"partial diagnostics written to {csv_path}", file=sys.stderr)
        raise

    write_diagnostics_csv(csv_path, series)
    for step, snap in snaps:
        write_snapshot(snapshot_path(cfg.out, step), snap)

    print(f"run complete: {cfg.steps} steps, dt={cfg.dt:g}, T={plan.total_time:g}")
    print(f"diagnostics: {csv_path} ({len(series.rows)} rows)")
    if snaps:
        print(f"snapshots: {len(snaps)} files ({snapshot_path(cfg.out, snaps[0][0])} ...)")
    print(f"energy drift   |dH|/|H| = {series.energy_drift():.3e}")
    print(f"helicity drift |dm|/|m| = {series.helicity_drift():.3e}")
    print(f"final stationarity residual = {series.last.stationarity_residual:.3e}")
    print(f"final max divergence        = {series.last.max_divergence:.3e}")
    return 0


# -- curvature ----------------------------------------------------------------


def cmd_curvature(args: argparse.Namespace) -> int:
    grid = GridSpec(args.n)
    x = make_initial_field(grid, parse_field_spec(args.x))
    y = make_initial_field(grid, parse_field_spec(args.y))

    form_val, integral_val = sectional_biinvariant_both(x, y)
    print(f"bi-invariant sectional curvature of span(x, y), n={args.n}")
    print(f"  (1/4)<[X,Y],[X,Y]>      = {form_val:.12e}")
    print(f"  (1/4)([X,Y], Y x X)     = {integral_val:.12e}")

    terms = rightinv_curvature_terms(x, y)
    print("right-invariant sectional curvature terms:")
    for name, value in terms.as_dict().items():
        print(f"  {name:<22} = {value:.12e}")
    print(f"  {'total':<22} = {terms.total:.12e}")

    lam_x, res_x = beltrami_check(x)
    lam_y, res_y = beltrami_check(y)
    if res_x <= 1e-10 and res_y <= 1e-10:
        k_eigen = sectional_curvature_eigenpair(x, y, lam_x, lam_y)
        print(f"eigenpair form (lambda={lam_x:.6g}, mu={lam_y:.6g}) = {k_eigen:.12e}")
    else:
        print(f"eigenpair form skipped (eigen-residuals {res_x:.2e}, {res_y:.2e})")

    try:
        _, _, signs = orthonormalize_pair(x, y, form="biinvariant")
        print(f"pairing orthonormalization signs: ({signs[0]:+d}, {signs[1]:+d})")
    except DomainError as exc:
        print(f"pairing orthonormalization degenerate: {exc}")
    return 0


# -- spectrum -----------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    grid = GridSpec(args.n)
    report = eta_partial(args.s, args.kmax, grid)
    print(f"curl spectrum inside max-norm ball kmax={report.kmax} (s={report.s:g})")
    print("  |k|^2  lattice-vectors  multiplicity-per-sign")
    for ksq, count, per_sign in report.multiplicity_table:
        print(f"  {ksq:>5}  {count:>15}  {per_sign:>21}")
    print(f"positive eigenvalues: {report.positive_count}")
    print(f"negative eigenvalues: {report.negative_count}")
    print(f"eta_partial(s={report.s:g}) = {report.eta_partial}")
    if args.csv:
        lines = ["k_squared,lattice_vectors,multiplicity_per_sign"]
        lines += [f"{a},{b},{c}" for a, b, c in report.multiplicity_table]
        from .io import _atomic_write

        _atomic_write(args.csv, ("\n".join(lines) + "\n").encode("ascii"))
        print(f"table written to {args.csv}")
    return 0


# -- decompose ----------------------------------------------------------------


def cmd_decompose(args: argparse.Namespace) -> int:
    grid = GridSpec(args.n)
    x = make_initial_field(grid, parse_field_spec(args.field))
    grad_part, exact_part, harm_part = hodge_decompose(x)
    residual = l2_norm(x - grad_part - exact_part - harm_part)
    print(f"hodge decomposition of {args.field!r} on n={args.n}")
    print(f"  ||gradient part|| = {l2_norm(grad_part):.12e}")
    print(f"  ||exact part||    = {l2_norm(exact_part):.12e}")
    print(f"  ||harmonic part|| = {l2_norm(harm_part):.12e}")
    print(f"  reassembly residual = {residual:.3e}")
    print(f"  ||X - P(X)||      = {l2_norm(x - leray_project(x)):.12e}")
    return 0


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helicore",
        description="Curl calculus, ideal Euler dynamics, and curvature on the flat 3-torus.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the operator identity suite")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--band", type=int, default=2)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("evolve", help="integrate the vorticity equation")
    p.add_argument("--config", help="JSON run configuration (exclusive with flags)")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--init", help="initial vorticity spec, e.g. abc:1,1,1 or random:7,2")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--record-every", dest="record_every", type=int, default=1)
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int, default=0)
    p.add_argument("--out", default="run")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("curvature", help="sectional curvature tables for a pair")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--x", required=True, help="field spec for X")
    p.add_argument("--y", required=True, help="field spec for Y")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("spectrum", help="signed eta sums over the curl spectrum")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--csv", help="optional CSV output path for the multiplicity table")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("decompose", help="print Hodge component norms of a field")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--field", required=True, help="field spec")
    p.set_defaults(func=cmd_decompose)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlowUpError as exc:
        _fail(str(exc))
        return 3
    except (ConfigError, DomainError, SnapshotFormatError, ValueError) as exc:
        _fail(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
