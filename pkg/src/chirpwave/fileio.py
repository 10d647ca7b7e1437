"""``.cfield`` field files and 16-bit PGM rendering."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .grid import ComplexField, Grid2D

PGM_MAX = 65535
LOG_FLOOR_DB = -80.0
IMAGE_MODES = ("amplitude", "phase", "log_amplitude")


def write_cfield(fld: ComplexField, path) -> None:
    """JSON header line, then n*n*2 little-endian float64 (re, im), row-major."""
    header = {
        "n": fld.grid.n,
        "pitch_mm": fld.grid.pitch,
        "wavelength_mm": fld.wavelength,
        "plane_z_mm": fld.plane_z,
    }
    body = np.empty((fld.grid.n, fld.grid.n, 2), dtype="<f8")
    body[..., 0] = fld.samples.real
    body[..., 1] = fld.samples.imag
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(body.tobytes())


def read_cfield(path) -> ComplexField:
    data = Path(path).read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise InvalidArgumentError(f"{path}: missing header line")
    try:
        header = json.loads(data[:nl].decode("utf-8"))
        n = int(header["n"])
        pitch = float(header["pitch_mm"])
        wavelength = float(header["wavelength_mm"])
        plane_z = float(header["plane_z_mm"])
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"{path}: bad header: {exc}") from exc
    body = data[nl + 1:]
    if len(body) != n * n * 16:
        raise InvalidArgumentError(f"{path}: expected {n * n * 16} payload bytes, got {len(body)}")
    arr = np.frombuffer(body, dtype="<f8").reshape(n, n, 2)
    return ComplexField(Grid2D(n, pitch), arr[..., 0] + 1j * arr[..., 1], wavelength, plane_z)


def image_levels(samples: np.ndarray, mode: str = "amplitude") -> np.ndarray:
    """Map complex samples to uint16 levels following the PGM rendering rules."""
    if mode not in IMAGE_MODES:
        raise InvalidArgumentError(f"mode must be one of {IMAGE_MODES}, got {mode!r}")
    z = np.asarray(samples, dtype=np.complex128)
    if not np.all(np.isfinite(z)):
        raise InvalidArgumentError("cannot render non-finite samples")
    if mode == "phase":
        t = (np.angle(z) + np.pi) / (2 * np.pi)
    else:
        a = np.abs(z)
        if mode == "log_amplitude":
            top = a.max()
            if top == 0:
                return np.zeros(z.shape, dtype=np.uint16)
            with np.errstate(divide="ignore"):
                db = 20.0 * np.log10(a / top)
            t = (np.clip(db, LOG_FLOOR_DB, 0.0) - LOG_FLOOR_DB) / -LOG_FLOOR_DB
        else:
            lo, hi = a.min(), a.max()
            if hi == 0:
                return np.zeros(z.shape, dtype=np.uint16)
            # all-equal maps to full scale
            t = np.ones_like(a) if hi == lo else (a - lo) / (hi - lo)
    return np.rint(np.clip(t, 0.0, 1.0) * PGM_MAX).astype(np.uint16)


def export_image(fld: ComplexField | np.ndarray, mode: str, path) -> None:
    """Binary P5 PGM with 16-bit big-endian samples."""
    samples = fld.samples if isinstance(fld, ComplexField) else np.asarray(fld)
    lv = image_levels(samples, mode)
    h, w = lv.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{PGM_MAX}\n".encode("ascii"))
        fh.write(lv.astype(">u2").tobytes())


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise InvalidArgumentError(f"{path}: not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=">u2").reshape(h, w)
