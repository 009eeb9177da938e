"""Flat INI-style run configuration with strict validation.

Sections and keys are fixed; unknown ones are rejected.  Validation gathers
every violated constraint into a single ConfigurationError so a bad file is
diagnosed in one pass.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError
from .propagator import alpha_window

_SCHEMA = {
    "model": {"delta", "chi", "b", "m", "alpha", "n"},
    "grid": {"N", "L"},
    "time": {"T", "dt", "store_every"},
    "data": {"kind", "eps", "core_cutoff", "path", "width"},
    "picard": {"max_iter", "tol"},
    "output": {"dir", "formats"},
}

_DATA_KINDS = ("gaussian", "homogeneous", "file")
_FORMATS = ("csv", "trj")


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters (see the section schema in load_config)."""

    delta: float = 1.0
    chi: float = 1.0
    b: float = 0.0
    m: float = 1.0
    alpha: float = 2.0
    n: int = 2
    N: tuple[int, ...] = (64, 64)
    L: tuple[float, ...] = (10.0, 10.0)
    T: float = 0.5
    dt: float = 0.01
    store_every: int = 1
    data_kind: str = "gaussian"
    eps: float = 0.01
    core_cutoff: float = 0.5
    data_path: str = ""
    width: float = 1.0
    max_iter: int = 25
    tol: float = 1e-10
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "trj")

    def canonical_items(self) -> list[tuple[str, str]]:
        pairs = [
            ("model.delta", f"{self.delta:.17g}"),
            ("model.chi", f"{self.chi:.17g}"),
            ("model.b", f"{self.b:.17g}"),
            ("model.m", f"{self.m:.17g}"),
            ("model.alpha", f"{self.alpha:.17g}"),
            ("model.n", str(self.n)),
            ("grid.N", " ".join(str(v) for v in self.N)),
            ("grid.L", " ".join(f"{v:.17g}" for v in self.L)),
            ("time.T", f"{self.T:.17g}"),
            ("time.dt", f"{self.dt:.17g}"),
            ("time.store_every", str(self.store_every)),
            ("data.kind", self.data_kind),
            ("data.eps", f"{self.eps:.17g}"),
            ("data.core_cutoff", f"{self.core_cutoff:.17g}"),
            ("data.path", self.data_path),
            ("data.width", f"{self.width:.17g}"),
            ("picard.max_iter", str(self.max_iter)),
            ("picard.tol", f"{self.tol:.17g}"),
            ("output.dir", self.out_dir),
            ("output.formats", ",".join(self.formats)),
        ]
        return pairs

    def config_hash(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(text.encode()).hexdigest()


def _parse_float(raw: str, where: str, errors: list[str]) -> float:
    try:
        return float(raw)
    except ValueError:
        errors.append(f"{where}: not a number: {raw!r}")
        return float("nan")


def _parse_int(raw: str, where: str, errors: list[str]) -> int:
    try:
        return int(raw)
    except ValueError:
        errors.append(f"{where}: not an integer: {raw!r}")
        return 0


def load_config(path) -> RunConfig:
    """Parse and validate an INI run file, reporting every violation at once."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(path.read_text())
    except configparser.Error as err:
        raise ConfigurationError(f"config parse error: {err}") from err

    errors: list[str] = []
    for section in parser.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]")
            continue
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                errors.append(f"unknown key {key!r} in section [{section}]")

    def get(section, key, default):
        if parser.has_option(section, key):
            return parser.get(section, key).strip()
        return default

    n = _parse_int(get("model", "n", "2"), "model.n", errors)
    if n not in (2, 3):
        errors.append(f"model.n: dimension must be 2 or 3, got {n}")
        n = 2
    delta = _parse_float(get("model", "delta", "1"), "model.delta", errors)
    chi = _parse_float(get("model", "chi", "1"), "model.chi", errors)
    b = _parse_float(get("model", "b", "0"), "model.b", errors)
    m = _parse_float(get("model", "m", "1"), "model.m", errors)
    alpha = _parse_float(get("model", "alpha", "2"), "model.alpha", errors)
    if delta not in (-1.0, 1.0):
        errors.append(f"model.delta: must be +1 or -1, got {delta:g}")
    if chi not in (-1.0, 0.0, 1.0):
        errors.append(f"model.chi: must be +1, -1, or 0, got {chi:g}")
    if not (m > 0):
        errors.append(f"model.m: must be positive, got {m:g}")
    lo, hi = alpha_window(n)
    if not (lo < alpha < hi):
        errors.append(f"model.alpha: alpha must lie in ({lo:g}, {hi:g}), got {alpha:g}")

    def per_axis(raw, where, cast, check, what):
        parts = raw.split()
        if len(parts) == 1:
            parts = parts * n
        if len(parts) != n:
            errors.append(f"{where}: need 1 or {n} values, got {len(parts)}")
            parts = (parts + parts)[:n]
        vals = []
        for part in parts:
            try:
                v = cast(part)
            except ValueError:
                errors.append(f"{where}: bad value {part!r}")
                v = cast(0) if cast is int else float("nan")
            else:
                if not check(v):
                    errors.append(f"{where}: {what}, got {part}")
            vals.append(v)
        return tuple(vals)

    N = per_axis(get("grid", "N", "64"), "grid.N", int,
                 lambda v: v >= 8 and (v & (v - 1)) == 0, "must be a power of two >= 8")
    L = per_axis(get("grid", "L", "10"), "grid.L", float,
                 lambda v: v > 0, "must be positive")

    T = _parse_float(get("time", "T", "0.5"), "time.T", errors)
    dt = _parse_float(get("time", "dt", "0.01"), "time.dt", errors)
    store_every = _parse_int(get("time", "store_every", "1"), "time.store_every", errors)
    if not (dt > 0):
        errors.append(f"time.dt: must be positive, got {dt:g}")
    elif not (T >= dt):
        errors.append(f"time.T: must be at least dt, got {T:g}")
    elif abs(round(T / dt) - T / dt) > 1e-9 * max(1.0, round(T / dt)):
        errors.append(f"time: T/dt = {T / dt:g} is not an integer step count")
    if store_every < 1:
        errors.append(f"time.store_every: must be >= 1, got {store_every}")

    kind = get("data", "kind", "gaussian")
    if kind not in _DATA_KINDS:
        errors.append(f"data.kind: must be one of {_DATA_KINDS}, got {kind!r}")
    eps = _parse_float(get("data", "eps", "0.01"), "data.eps", errors)
    if not (eps > 0):
        errors.append(f"data.eps: must be positive, got {eps:g}")
    core = _parse_float(get("data", "core_cutoff", "0.5"), "data.core_cutoff", errors)
    width = _parse_float(get("data", "width", "1"), "data.width", errors)
    data_path = get("data", "path", "")
    if kind == "file" and not data_path:
        errors.append("data.path: required when data.kind = file")

    max_iter = _parse_int(get("picard", "max_iter", "25"), "picard.max_iter", errors)
    tol = _parse_float(get("picard", "tol", "1e-10"), "picard.tol", errors)
    if max_iter < 1:
        errors.append(f"picard.max_iter: must be >= 1, got {max_iter}")
    if not (tol > 0):
        errors.append(f"picard.tol: must be positive, got {tol:g}")

    out_dir = get("output", "dir", "out")
    formats = tuple(v.strip() for v in get("output", "formats", "csv,trj").split(",") if v.strip())
    for fmt in formats:
        if fmt not in _FORMATS:
            errors.append(f"output.formats: unknown format {fmt!r}")

    if errors:
        raise ConfigurationError("invalid configuration:\n  " + "\n  ".join(errors))
    return RunConfig(delta=delta, chi=chi, b=b, m=m, alpha=alpha, n=n, N=N, L=L,
                     T=T, dt=dt, store_every=store_every, data_kind=kind, eps=eps,
                     core_cutoff=core, data_path=data_path, width=width,
                     max_iter=max_iter, tol=tol, out_dir=out_dir, formats=formats)
