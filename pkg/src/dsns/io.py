"""Binary field/trajectory files and deterministic CSV emission.

Field file ("DSFLD1"): magic b"DSFLD1\\0\\0", u8 dimension, then per axis
u64 N and f64 L, f64 time tag, then prod(N) complex samples as little-endian
f64 (re, im) pairs, row-major with axis 1 slowest.

Trajectory file ("DSTRJ1"): magic b"DSTRJ1\\0\\0", u64 slice count, f64 slice
spacing, then the slices as consecutive DSFLD1 records.

CSV: single header row, comma separator, '.' decimal, LF endings, floats at
17 significant digits -- byte-stable for regression diffing.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .fields import Field, GridSpec, Trajectory

FIELD_MAGIC = b"DSFLD1\x00\x00"
TRAJ_MAGIC = b"DSTRJ1\x00\x00"


def _pack_field(f: Field) -> bytes:
    head = [FIELD_MAGIC, struct.pack("<B", f.spec.n)]
    for N, L in zip(f.spec.N, f.spec.L):
        head.append(struct.pack("<Qd", N, L))
    head.append(struct.pack("<d", f.time))
    body = np.ascontiguousarray(f.samples, dtype="<c16").tobytes(order="C")
    return b"".join(head) + body


def write_field(path, f: Field) -> None:
    Path(path).write_bytes(_pack_field(f))


def _read_exact(fh, count: int) -> bytes:
    data = fh.read(count)
    if len(data) != count:
        raise OSError("unexpected end of field record")
    return data


def _unpack_field(fh) -> Field:
    magic = _read_exact(fh, 8)
    if magic != FIELD_MAGIC:
        raise OSError(f"bad field magic {magic!r}")
    (n,) = struct.unpack("<B", _read_exact(fh, 1))
    Ns, Ls = [], []
    for _ in range(n):
        N, L = struct.unpack("<Qd", _read_exact(fh, 16))
        Ns.append(N)
        Ls.append(L)
    (time,) = struct.unpack("<d", _read_exact(fh, 8))
    spec = GridSpec(n, tuple(Ns), tuple(Ls))
    count = int(np.prod(Ns))
    raw = _read_exact(fh, count * 16)
    samples = np.frombuffer(raw, dtype="<c16").reshape(spec.shape)
    return Field(spec, samples.astype(np.complex128), time)


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        return _unpack_field(fh)


def write_trajectory(path, u: Trajectory) -> None:
    with open(path, "wb") as fh:
        fh.write(TRAJ_MAGIC)
        fh.write(struct.pack("<Qd", len(u.slices), u.dt))
        for s in u.slices:
            fh.write(_pack_field(s))


def read_trajectory(path) -> Trajectory:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != TRAJ_MAGIC:
            raise OSError(f"bad trajectory magic {magic!r}")
        count, dt = struct.unpack("<Qd", _read_exact(fh, 16))
        slices = [_unpack_field(fh) for _ in range(count)]
    return Trajectory(tuple(slices), slices[0].time, dt)


def sniff_format(path) -> str:
    """'field', 'trajectory', or 'unknown' from the magic bytes."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
    if magic == FIELD_MAGIC:
        return "field"
    if magic == TRAJ_MAGIC:
        return "trajectory"
    return "unknown"


def format_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows) -> None:
    """Deterministic CSV: header + rows, LF endings, 17-digit floats."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
