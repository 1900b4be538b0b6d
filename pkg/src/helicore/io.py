"""Bit-exact file formats and run configuration.

Snapshot format (``.hfd``): magic ``HFD1``, then three little-endian u32
fields (version = 1, n, layout = 0), then 3*n^3 little-endian float64
physical samples, component-major, C order within a component (third index
fastest).  Physical samples rather than coefficients keep the payload
human-checkable; stored fields are band-limited, so the transform round
trip loses nothing.

Diagnostics CSV: header ``step,t,energy,helicity,stationarity_residual,
max_divergence``, floats printed with 17 significant digits so every f64
reloads exactly.

All writes are atomic (temp file in the target directory, then rename).
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from dataclasses import dataclass
from typing import Any

import numpy as np

from .dynamics import DiagnosticsRow, DiagnosticsSeries
from .errors import ConfigError, SnapshotFormatError
from .fields import (
    SpectralVectorField,
    abc_field,
    field_from_samples,
    helical_mode,
    random_exact_field,
)
from .grid import GridSpec

SNAPSHOT_MAGIC = b"HFD1"
SNAPSHOT_VERSION = 1
SNAPSHOT_LAYOUT_PHYSICAL = 0
_HEADER = struct.Struct("<4sIII")

CSV_HEADER = "step,t,energy,helicity,stationarity_residual,max_divergence"


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_snapshot(path: str, field: SpectralVectorField) -> None:
    """Serialize a field's physical samples to ``path`` atomically."""
    samples = np.ascontiguousarray(field.to_samples(), dtype="<f8")
    header = _HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, field.grid.n, SNAPSHOT_LAYOUT_PHYSICAL)
    _atomic_write(path, header + samples.tobytes())


def read_snapshot(path: str) -> SpectralVectorField:
    """Load a snapshot, validating every header field and the payload size."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise SnapshotFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, n, layout = _HEADER.unpack_from(raw)
    if magic != SNAPSHOT_MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {magic!r}, expected {SNAPSHOT_MAGIC!r}")
    if version != SNAPSHOT_VERSION:
        raise SnapshotFormatError(f"{path}: unsupported version {version}")
    if n < 8 or n % 2:
        raise SnapshotFormatError(f"{path}: invalid resolution n={n}")
    if layout != SNAPSHOT_LAYOUT_PHYSICAL:
        raise SnapshotFormatError(f"{path}: unsupported layout {layout}")
    expected = 3 * n**3 * 8
    payload = raw[_HEADER.size :]
    if len(payload) != expected:
        raise SnapshotFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} for n={n}"
        )
    samples = np.frombuffer(payload, dtype="<f8").reshape(3, n, n, n)
    return field_from_samples(GridSpec(n), samples.astype(np.float64))


def snapshot_path(prefix: str, step: int) -> str:
    return f"{prefix}_step{step:06d}.hfd"


# -- diagnostics CSV -----------------------------------------------------------


def format_diagnostics_csv(series: DiagnosticsSeries) -> str:
    lines = [CSV_HEADER]
    for r in series.rows:
        lines.append(
            f"{r.step},{r.t:.17g},{r.energy:.17g},{r.helicity:.17g},"
            f"{r.stationarity_residual:.17g},{r.max_divergence:.17g}"
        )
    return "\n".join(lines) + "\n"


def write_diagnostics_csv(path: str, series: DiagnosticsSeries) -> None:
    _atomic_write(path, format_diagnostics_csv(series).encode("ascii"))


def read_diagnostics_csv(path: str) -> DiagnosticsSeries:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise SnapshotFormatError(f"{path}: missing or wrong CSV header")
    series = DiagnosticsSeries()
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 6:
            raise SnapshotFormatError(f"{path}: malformed row {ln!r}")
        series.append(
            DiagnosticsRow(
                step=int(parts[0]),
                t=float(parts[1]),
                energy=float(parts[2]),
                helicity=float(parts[3]),
                stationarity_residual=float(parts[4]),
                max_divergence=float(parts[5]),
            )
        )
    return series


# -- run configuration ----------------------------------------------------------

_RUN_KEYS = {"n", "init", "dt", "steps", "record_every", "snapshot_every", "out"}
_INIT_KEYS = {
    "abc": {"kind", "A", "B", "C"},
    "helical": {"kind", "k", "sign", "amplitude"},
    "random": {"kind", "seed", "band", "amplitude"},
    "file": {"kind", "path"},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated evolve-run plan mirroring the CLI flags."""

    n: int
    init: dict
    dt: float
    steps: int
    record_every: int = 1
    snapshot_every: int = 0
    out: str = "run"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def parse_init_spec(obj: Any) -> dict:
    """Validate an initial-field description (a JSON object)."""
    _require(isinstance(obj, dict), f"init must be an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    _require(kind in _INIT_KEYS, f"init.kind must be one of {sorted(_INIT_KEYS)}, got {kind!r}")
    unknown = set(obj) - _INIT_KEYS[kind]
    _require(not unknown, f"unknown init keys for kind {kind!r}: {sorted(unknown)}")
    if kind == "abc":
        out = {"kind": kind}
        for key in ("A", "B", "C"):
            val = obj.get(key, 0.0)
            _require(isinstance(val, (int, float)), f"init.{key} must be a number")
            out[key] = float(val)
        return out
    if kind == "helical":
        k = obj.get("k")
        _require(
            isinstance(k, (list, tuple))
            and len(k) == 3
            and all(isinstance(c, int) for c in k)
            and any(c != 0 for c in k),
            "init.k must be a nonzero triple of integers",
        )
        sign = obj.get("sign", "+")
        _require(sign in ("+", "-"), f"init.sign must be '+' or '-', got {sign!r}")
        amp = obj.get("amplitude", 1.0)
        _require(isinstance(amp, (int, float)), "init.amplitude must be a number")
        return {"kind": kind, "k": tuple(int(c) for c in k), "sign": sign, "amplitude": float(amp)}
    if kind == "random":
        seed = obj.get("seed", 0)
        band = obj.get("band")
        amp = obj.get("amplitude", 1.0)
        _require(isinstance(seed, int) and seed >= 0, "init.seed must be a nonnegative integer")
        _require(isinstance(band, int) and band >= 1, "init.band must be a positive integer")
        _require(isinstance(amp, (int, float)), "init.amplitude must be a number")
        return {"kind": kind, "seed": seed, "band": band, "amplitude": float(amp)}
    path = obj.get("path")
    _require(isinstance(path, str) and bool(path), "init.path must be a nonempty string")
    return {"kind": "file", "path": path}


def parse_run_config(obj: Any) -> RunConfig:
    """Validate a full run document; every range is checked before compute."""
    _require(isinstance(obj, dict), "run config must be a JSON object")
    unknown = set(obj) - _RUN_KEYS
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    for key in ("n", "init", "dt", "steps"):
        _require(key in obj, f"missing required config key {key!r}")

    n = obj["n"]
    _require(isinstance(n, int) and n >= 8 and n % 2 == 0, "n must be an even integer >= 8")
    dt = obj["dt"]
    _require(isinstance(dt, (int, float)) and dt > 0, "dt must be a positive number")
    steps = obj["steps"]
    _require(isinstance(steps, int) and steps >= 1, "steps must be a positive integer")
    record_every = obj.get("record_every", 1)
    _require(
        isinstance(record_every, int) and 1 <= record_every <= steps,
        "record_every must be an integer in [1, steps]",
    )
    snapshot_every = obj.get("snapshot_every", 0)
    _require(
        isinstance(snapshot_every, int) and snapshot_every >= 0,
        "snapshot_every must be a nonnegative integer",
    )
    out = obj.get("out", "run")
    _require(isinstance(out, str) and bool(out), "out must be a nonempty string")

    init = parse_init_spec(obj["init"])
    if init["kind"] == "helical":
        _require(
            max(abs(c) for c in init["k"]) <= int(GridSpec(n).kmax_dealias),
            f"init.k {init['k']} lies outside the dealias mask of n={n}",
        )
    if init["kind"] == "random":
        _require(
            init["band"] <= int(GridSpec(n).kmax_dealias),
            f"init.band {init['band']} exceeds the dealias mask of n={n}",
        )

    return RunConfig(
        n=n,
        init=init,
        dt=float(dt),
        steps=steps,
        record_every=record_every,
        snapshot_every=snapshot_every,
        out=out,
    )


def load_run_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_run_config(doc)


def make_initial_field(grid: GridSpec, init: dict) -> SpectralVectorField:
    """Build the initial vorticity described by a validated init spec."""
    kind = init["kind"]
    if kind == "abc":
        return abc_field(grid, init["A"], init["B"], init["C"])
    if kind == "helical":
        sign = +1 if init["sign"] == "+" else -1
        return helical_mode(grid, init["k"], sign, init["amplitude"])
    if kind == "random":
        return random_exact_field(grid, init["seed"], init["band"], init["amplitude"])
    field = read_snapshot(init["path"])
    _require(
        field.grid.n == grid.n,
        f"snapshot {init['path']} has n={field.grid.n}, expected n={grid.n}",
    )
    return field


def parse_field_spec(spec: str) -> dict:
    """Parse a CLI field spec string into an init dict.

    Forms: ``abc:A,B,C``, ``helical:k1,k2,k3,SIGN[,amp]``,
    ``random:seed,band[,amp]``, ``file:PATH``, or a bare ``*.hfd`` path.
    """
    if spec.endswith(".hfd") and ":" not in spec:
        return {"kind": "file", "path": spec}
    kind, _, rest = spec.partition(":")
    try:
        if kind == "abc":
            a, b, c = (float(v) for v in rest.split(","))
            return parse_init_spec({"kind": "abc", "A": a, "B": b, "C": c})
        if kind == "helical":
            parts = rest.split(",")
            if len(parts) not in (4, 5):
                raise ValueError("expected k1,k2,k3,SIGN[,amp]")
            k = [int(v) for v in parts[:3]]
            sign = parts[3]
            amp = float(parts[4]) if len(parts) == 5 else 1.0
            return parse_init_spec({"kind": "helical", "k": k, "sign": sign, "amplitude": amp})
        if kind == "random":
            parts = rest.split(",")
            if len(parts) not in (2, 3):
                raise ValueError("expected seed,band[,amp]")
            amp = float(parts[2]) if len(parts) == 3 else 1.0
            return parse_init_spec(
                {"kind": "random", "seed": int(parts[0]), "band": int(parts[1]), "amplitude": amp}
            )
        if kind == "file":
            return parse_init_spec({"kind": "file", "path": rest})
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse field spec {spec!r}: {exc}") from exc
    raise ConfigError(
        f"unknown field spec {spec!r}; use abc:, helical:, random:, file:, or a .hfd path"
    )
