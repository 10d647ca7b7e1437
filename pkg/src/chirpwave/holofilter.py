"""Order isolation in synthetic off-axis holograms with a chirplet band-pass.

The hologram is ``I = |O + R|^2`` with ``R = A exp(1j w_r (x cos phi + y sin phi))``.
Its spectrum holds the zero order (``|O|^2 + A^2``) at the origin, the term
``A conj(O) R`` at ``+(w_r cos phi, w_r sin phi)`` (called the +1 order here)
and its mirror ``A O conj(R)`` at the opposite frequency.

The filter is the CWT round-trip window ``|Psi(s u, s v)|^2`` moved so its
peak sits on the chosen order and scaled to unit peak gain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chirplet import ChirpletParams, psi_hat
from .errors import AliasingError, GeometryError, InvalidArgumentError
from .grid import ComplexField, Grid2D, _fwd, _inv

SUPPRESSION_CAP_DB = 300.0


@dataclass(frozen=True)
class HologramSpec:
    object: ComplexField
    reference_tilt_w: float
    reference_angle_phi: float = np.pi / 4
    amplitude_ratio: float = 1.0

    def __post_init__(self):
        if not self.amplitude_ratio > 0:
            raise InvalidArgumentError(f"amplitude_ratio must be > 0, got {self.amplitude_ratio}")
        if not self.reference_tilt_w > 0:
            raise InvalidArgumentError(f"reference_tilt_w must be > 0, got {self.reference_tilt_w}")

    @property
    def order_center(self) -> tuple[float, float]:
        return (self.reference_tilt_w * np.cos(self.reference_angle_phi),
                self.reference_tilt_w * np.sin(self.reference_angle_phi))


def reference_wave(hspec: HologramSpec) -> np.ndarray:
    g = hspec.object.grid
    ru, rv = hspec.order_center
    if max(abs(ru), abs(rv)) >= g.nyquist:
        raise AliasingError(
            f"reference tilt ({ru:.6g}, {rv:.6g}) rad/mm reaches the lattice Nyquist limit "
            f"pi/pitch = {g.nyquist:.6g}")
    x = g.coords
    return hspec.amplitude_ratio * np.outer(np.exp(1j * rv * x), np.exp(1j * ru * x))


def synth_hologram(hspec: HologramSpec) -> ComplexField:
    """Intensity ``|O + R|^2`` as a field with zero imaginary part."""
    tot = hspec.object.samples + reference_wave(hspec)
    inten = tot.real**2 + tot.imag**2
    return hspec.object.replace(samples=inten.astype(np.complex128))


def window_width(wavelet: ChirpletParams, scale_s: float) -> float:
    """Standard deviation (rad/mm) of the filter window ``|Psi(s u, s v)|^2``."""
    return wavelet.bump_width / scale_s


def _check_center(grid: Grid2D, center, radius: float = 0.0, what: str = "order_center"):
    cu, cv = center
    lim = grid.nyquist
    if abs(cu) + radius > lim or abs(cv) + radius > lim:
        raise GeometryError(
            f"{what} ({cu:.6g}, {cv:.6g}) rad/mm with radius {radius:.6g} leaves the lattice "
            f"|u|, |v| <= {lim:.6g}")


def filter_window(grid: Grid2D, wavelet: ChirpletParams, scale_s: float, order_center) -> np.ndarray:
    """Unit-peak window ``|Psi(s (u - u1) + c)|^2 / |Psi(c)|^2`` on the dual lattice."""
    _check_center(grid, order_center)
    U, V = grid.freq_mesh()
    cu, cv = wavelet.carrier
    vals = np.abs(psi_hat(wavelet, scale_s * (U - order_center[0]) + cu,
                          scale_s * (V - order_center[1]) + cv)) ** 2
    peak = np.abs(psi_hat(wavelet, cu, cv)) ** 2
    return vals / peak


def filter_order(hologram: ComplexField, wavelet: ChirpletParams, scale_s: float,
                 order_center) -> ComplexField:
    g = hologram.grid
    W = filter_window(g, wavelet, scale_s, order_center)
    return hologram.replace(samples=_inv(_fwd(hologram.samples, g.pitch) * W, g.pitch))


def recenter(fld: ComplexField, order_center) -> ComplexField:
    """Shift the spectrum by ``-order_center`` (demodulate the carrier)."""
    x = fld.grid.coords
    ph = np.outer(np.exp(-1j * order_center[1] * x), np.exp(-1j * order_center[0] * x))
    return fld.replace(samples=fld.samples * ph)


def _disc_mass(F2: np.ndarray, grid: Grid2D, center, radius) -> float:
    U, V = grid.freq_mesh()
    m = (U - center[0]) ** 2 + (V - center[1]) ** 2 <= radius * radius
    return float(np.sum(F2[m]))


def _db(before: float, after: float) -> float:
    if after <= 0:
        return SUPPRESSION_CAP_DB if before > 0 else 0.0
    if before <= 0:
        return -SUPPRESSION_CAP_DB
    return float(np.clip(10.0 * np.log10(before / after), -SUPPRESSION_CAP_DB, SUPPRESSION_CAP_DB))


def suppression_metrics(before: ComplexField, after: ComplexField, dc_radius: float,
                        order_center, order_radius: float) -> dict:
    """Spectral-mass ratios (dB, positive = attenuation) in three fixed discs."""
    g = before.grid
    if after.grid != g:
        raise GeometryError("before and after must share a grid")
    if dc_radius <= 0 or order_radius <= 0:
        raise InvalidArgumentError("disc radii must be > 0")
    _check_center(g, (0.0, 0.0), dc_radius, "DC disc")
    _check_center(g, order_center, order_radius, "+1 disc")
    minus = (-order_center[0], -order_center[1])
    Fb = np.abs(_fwd(before.samples, g.pitch)) ** 2
    Fa = np.abs(_fwd(after.samples, g.pitch)) ** 2
    out = {}
    for key, c, r in (("dc", (0.0, 0.0), dc_radius), ("plus1", order_center, order_radius),
                      ("minus1", minus, order_radius)):
        mb, ma = _disc_mass(Fb, g, c, r), _disc_mass(Fa, g, c, r)
        out[f"{key}_mass_before"] = mb
        out[f"{key}_mass_after"] = ma
        out[f"{key}_db"] = _db(mb, ma)
    out["dc_suppression_db"] = out["dc_db"]
    out["minus1_suppression_db"] = out["minus1_db"]
    out["plus1_loss_db"] = out["plus1_db"]
    out["radii"] = {"dc": dc_radius, "order": order_radius}
    out["order_center"] = [float(order_center[0]), float(order_center[1])]
    return out
