"""Fresnel propagation and the three inverse-propagation integrals.

All distances are positive; the direction is encoded in the function name.
Every fast path has a literal double-sum counterpart for small grids.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CostGuardError, GeometryError, InvalidArgumentError, SamplingError, AliasingError
from .grid import ComplexField, Grid2D, Spectrum, _fwd, _inv, ft_forward, ft_inverse

METHODS = ("transfer_function", "direct_quadrature")
DIRECT_MAX_N = 128
_TOL = 1e-12


def _positive(**kw):
    for name, val in kw.items():
        if not np.isfinite(val) or val <= 0:
            raise InvalidArgumentError(f"{name} must be > 0, got {val}")


def scale_from_distance(wavelength: float, z: float) -> float:
    """Wavelet scale ``a = sqrt(wavelength * z / pi)`` in mm."""
    _positive(wavelength=wavelength, z=z)
    return float(np.sqrt(wavelength * z / np.pi))


def distance_from_scale(wavelength: float, scale: float) -> float:
    _positive(wavelength=wavelength, scale=scale)
    return float(np.pi * scale**2 / wavelength)


def propagator_constant(wavelength: float, z: float) -> complex:
    """``exp(2j*pi*z/wavelength) / (1j*wavelength*z)``."""
    _positive(wavelength=wavelength, z=z)
    # reduce the phase first: 2*pi*z/lambda is ~1e8 rad for desk geometries
    turns = np.fmod(z / wavelength, 1.0)
    return complex(np.exp(2j * np.pi * turns) / (1j * wavelength * z))


@dataclass(frozen=True)
class PropagationParams:
    wavelength: float
    z: float
    method: str = "transfer_function"

    def __post_init__(self):
        _positive(wavelength=self.wavelength, z=self.z)
        if self.method not in METHODS:
            raise InvalidArgumentError(f"method must be one of {METHODS}, got {self.method!r}")

    @property
    def scale(self) -> float:
        return scale_from_distance(self.wavelength, self.z)

    @property
    def lz(self) -> float:
        return self.wavelength * self.z


def _chirp(grid: Grid2D, rate: float) -> np.ndarray:
    x = grid.coords
    c = np.exp(1j * rate * x * x)
    return np.outer(c, c)


def fresnel_impulse_response(params: PropagationParams, grid: Grid2D) -> ComplexField:
    """Sampled ``K * exp(1j*pi*(x^2 + y^2)/(wavelength*z))``.

    The lattice is separable, so the chirp must be resolved per axis:
    ``pitch <= wavelength*z / (2*half_window)``.
    """
    bound = params.lz / (2.0 * grid.half_window)
    if grid.pitch > bound * (1 + _TOL):
        raise AliasingError(
            f"impulse response aliases: pitch {grid.pitch:.6g} mm > wavelength*z/(2*half_window) = "
            f"{params.lz:.6g}/(2*{grid.half_window:.6g}) = {bound:.6g} mm")
    h = propagator_constant(params.wavelength, params.z) * _chirp(grid, np.pi / params.lz)
    return ComplexField(grid, h, params.wavelength, params.z)


def transfer_function(params: PropagationParams, grid: Grid2D) -> Spectrum:
    """Analytic FT of the Fresnel impulse response on the dual lattice."""
    u = grid.freqs
    turns = np.fmod(params.z / params.wavelength, 1.0)
    q = np.exp(-1j * params.lz * u * u / (4.0 * np.pi))
    return Spectrum(grid, np.exp(2j * np.pi * turns) * np.outer(q, q))


def _fresnel_direct(fld: ComplexField, params: PropagationParams) -> np.ndarray:
    g = fld.grid
    if g.n > DIRECT_MAX_N:
        raise CostGuardError(
            f"direct_quadrature is O(N^4); n = {g.n} > {DIRECT_MAX_N}. Use method='transfer_function'")
    x = g.coords
    rate = np.pi / params.lz
    dx2 = (x[:, None] - x[None, :]) ** 2  # (a, i)
    f = fld.samples
    out = np.empty_like(f)
    for b in range(g.n):
        dy2 = (x[b] - x) ** 2  # (j,)
        kern = np.exp(1j * rate * (dy2[:, None, None] + dx2[None, :, :]))  # (j, a, i)
        out[b] = np.einsum("ji,jai->a", f, kern)
    return propagator_constant(params.wavelength, params.z) * g.pitch**2 * out


def fresnel_forward(fld: ComplexField, params: PropagationParams) -> ComplexField:
    """Diffracted field at ``plane_z + z`` (same lattice)."""
    g = fld.grid
    if params.method == "direct_quadrature":
        out = _fresnel_direct(fld, params)
    else:
        need = np.sqrt(params.lz / g.n)
        if g.pitch < need * (1 - _TOL):
            raise SamplingError(
                f"transfer_function needs pitch >= sqrt(wavelength*z/n) = sqrt({params.lz:.6g}/{g.n}) "
                f"= {need:.6g} mm, got pitch = {g.pitch:.6g} mm")
        H = transfer_function(params, g).samples
        out = _inv(_fwd(fld.samples, g.pitch) * H, g.pitch)
    return fld.replace(samples=out, plane_z=fld.plane_z + params.z)


def native_inverse_grid(grid: Grid2D, params: PropagationParams) -> Grid2D:
    """Output lattice of the single-FT inverses: pitch ``wavelength*z/(n*pitch)``."""
    return Grid2D(grid.n, params.lz / (grid.n * grid.pitch))


def _single_ft_inverse(fld: ComplexField, params: PropagationParams, outer_chirp: bool,
                       max_window: float | None) -> ComplexField:
    g = fld.grid
    out_grid = native_inverse_grid(g, params)
    if max_window is not None and out_grid.window > max_window * (1 + _TOL):
        raise GeometryError(
            f"native output window wavelength*z/pitch = {out_grid.window:.6g} mm exceeds the "
            f"requested {max_window:.6g} mm")
    rate = np.pi / params.lz
    G = _fwd(fld.samples * _chirp(g, -rate), g.pitch)
    # the kernel exp(+2j*pi*x0*x/(lambda z)) samples G at u = -2*pi*x/(lambda z)
    G = np.roll(np.flip(G, axis=(0, 1)), 1, axis=(0, 1))
    pref = np.conj(propagator_constant(params.wavelength, params.z))
    out = pref * G
    if outer_chirp:
        out = out * _chirp(out_grid, -rate)
    return ComplexField(out_grid, out, fld.wavelength, fld.plane_z - params.z)


def fraunhofer_inverse(fld: ComplexField, params: PropagationParams,
                       max_window: float | None = None) -> ComplexField:
    """Back-propagate with the far-field single transform (no outer chirp).

    Returns the native output lattice of pitch ``wavelength*z/(n*pitch)``.
    """
    return _single_ft_inverse(fld, params, False, max_window)


def fresnel_inverse(fld: ComplexField, params: PropagationParams,
                    max_window: float | None = None) -> ComplexField:
    """Exact Fresnel back-propagation in single-transform form (native lattice)."""
    return _single_ft_inverse(fld, params, True, max_window)


def single_ft_inverse_direct(fld: ComplexField, params: PropagationParams,
                             outer_chirp: bool = True) -> ComplexField:
    """Literal double sum of the single-FT inverse integrals on the native lattice."""
    g = fld.grid
    if g.n > DIRECT_MAX_N:
        raise CostGuardError(f"direct quadrature is O(N^4); n = {g.n} > {DIRECT_MAX_N}")
    out_grid = native_inverse_grid(g, params)
    x0 = g.coords
    x = out_grid.coords
    lz = params.lz
    inner = fld.samples * np.exp(-1j * np.pi / lz * (x0[None, :] ** 2 + x0[:, None] ** 2))
    kx = np.exp(2j * np.pi / lz * np.outer(x, x0))  # (a, i)
    out = np.empty((g.n, g.n), dtype=np.complex128)
    for b in range(g.n):
        kern = kx[b][:, None, None] * kx[None, :, :]  # (j, a, i)
        out[b] = np.einsum("ji,jai->a", inner, kern)
    out *= np.conj(propagator_constant(params.wavelength, params.z)) * g.pitch**2
    if outer_chirp:
        out *= np.exp(-1j * np.pi / lz * (x[None, :] ** 2 + x[:, None] ** 2))
    return ComplexField(out_grid, out, fld.wavelength, fld.plane_z - params.z)


def angular_spectrum_multiplier(grid: Grid2D, wavelength: float, z: float) -> tuple[np.ndarray, np.ndarray]:
    """``exp(1j*z*sqrt(k^2 - u^2 - v^2))`` for signed ``z`` and the propagating mask.

    Evanescent bins (``u^2 + v^2 > k^2``) are set to zero.
    """
    _positive(wavelength=wavelength)
    k = 2.0 * np.pi / wavelength
    U, V = grid.freq_mesh()
    kz2 = k * k - U * U - V * V
    prop = kz2 >= 0
    kz = np.sqrt(np.where(prop, kz2, 0.0))
    return np.where(prop, np.exp(1j * z * kz), 0.0), prop


def angular_spectrum_propagate(fld: ComplexField, wavelength: float, z: float) -> ComplexField:
    """Band-limited angular-spectrum propagation by signed distance ``z``."""
    m, _ = angular_spectrum_multiplier(fld.grid, wavelength, z)
    out = ft_inverse(Spectrum(fld.grid, ft_forward(fld).samples * m)).samples
    return fld.replace(samples=out, plane_z=fld.plane_z + z)


def angular_spectrum_inverse(fld: ComplexField, params: PropagationParams) -> ComplexField:
    """Back-propagate by ``z`` with ``exp(-1j*z*sqrt(k^2 - u^2 - v^2))``; evanescent bins zeroed."""
    return angular_spectrum_propagate(fld, params.wavelength, -params.z)
