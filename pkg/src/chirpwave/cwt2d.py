"""Single-scale 2D continuous wavelet transform with optical chirplets.

Forward (correlation form, normalization ``1/s``)::

    CWT(a, b) = (1/s) * integral g(x, y) conj(psi((x - a)/s, (y - b)/s)) dx dy

Inverse (``psi`` is *not* conjugated)::

    ICWT(x, y) = K_s / (s^2 C) * integral CWT(a, b) psi((x - a)/s, (y - b)/s) da db

``K_s`` is the Fresnel constant at the distance ``z = pi s^2 / wavelength`` and
``C`` the lattice admissibility constant of the mother wavelet.  In the
spectral domain the two transforms are pointwise multipliers
``s * conj(Psi(s u, s v))`` and ``(K_s / C) * Psi(s u, s v)``, so the round trip
is the fixed band-pass ``KAPPA * |Psi(s u, s v)|^2 / C`` with the convention
constant ``KAPPA = s * K_s`` (see :func:`convention_constant`).

The spectral paths are circular on the grid; the direct paths are literal
(linear) lattice sums.  They agree when the dilated wavelet's footprint plus
the pattern's support fit inside the window.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .chirplet import (
    AXIS_FRACTION_LIMIT,
    ChirpletParams,
    admissibility_details,
    psi,
    psi_hat,
)
from .errors import (
    AdmissibilityUndefinedError,
    AdmissibilityWarning,
    AliasingError,
    CostGuardError,
    GeometryError,
    InvalidArgumentError,
)
from .grid import ComplexField, Grid2D, Spectrum, _fwd, _inv
from .propagate import distance_from_scale, propagator_constant, scale_from_distance

DIRECT_MAX_N = 128


def mother_wavelet(scale_s: float, wavelength: float, sigma_mm: float, carrier: float = 0.0,
                   theta: float = np.pi / 4) -> ChirpletParams:
    """Mother chirplet whose dilation by ``scale_s`` is the physical kernel.

    The mother sits at the unit-scale distance ``z = pi / wavelength``, so its
    chirp rate is 1 and dilation by ``s`` gives the Fresnel chirp
    ``pi / (wavelength * z)`` with ``z = pi s^2 / wavelength``.  ``sigma_mm`` and
    ``carrier`` (rad/mm) are the *physical* window width and carrier after
    dilation.
    """
    if scale_s <= 0:
        raise InvalidArgumentError(f"scale_s must be > 0, got {scale_s}")
    return ChirpletParams(
        sigma=sigma_mm / scale_s,
        wavelength=wavelength,
        z=np.pi / wavelength,
        carrier_w0=carrier * scale_s,
        carrier_theta=theta,
    )


@dataclass(frozen=True)
class CwtQuery:
    scale_s: float
    wavelet: ChirpletParams

    def __post_init__(self):
        if not np.isfinite(self.scale_s) or self.scale_s <= 0:
            raise InvalidArgumentError(f"scale_s must be > 0, got {self.scale_s}")

    @classmethod
    def from_distance(cls, wavelength: float, z: float, sigma_mm: float, carrier: float = 0.0,
                      theta: float = np.pi / 4) -> "CwtQuery":
        s = scale_from_distance(wavelength, z)
        return cls(s, mother_wavelet(s, wavelength, sigma_mm, carrier, theta))


@dataclass(frozen=True)
class CwtResult:
    coefficients: ComplexField
    scale_s: float
    k_constant: complex
    admissibility_c: float | None
    axis_fraction: float | None = None


def k_constant(wavelet: ChirpletParams, scale_s: float) -> complex:
    return propagator_constant(wavelet.wavelength, distance_from_scale(wavelet.wavelength, scale_s))


def convention_constant(wavelet: ChirpletParams, scale_s: float) -> complex:
    """``KAPPA = s * K_s``: round-trip gain between the spectral multipliers."""
    return scale_s * k_constant(wavelet, scale_s)


def scaled_spectrum(wavelet: ChirpletParams, scale_s: float, grid: Grid2D) -> np.ndarray:
    """``Psi(s u, s v)`` on the dual lattice of ``grid``."""
    U, V = grid.freq_mesh()
    return psi_hat(wavelet, scale_s * U, scale_s * V)


def dilated_wavelet(wavelet: ChirpletParams, scale_s: float, grid: Grid2D,
                    shift: tuple[float, float] = (0.0, 0.0)) -> ComplexField:
    """Samples of ``(1/s) psi((x - a)/s, (y - b)/s)``."""
    X, Y = grid.mesh()
    vals = psi(wavelet, (X - shift[0]) / scale_s, (Y - shift[1]) / scale_s) / scale_s
    return ComplexField(grid, vals, wavelet.wavelength)


def dilated_spectrum(wavelet: ChirpletParams, scale_s: float, grid: Grid2D,
                     shift: tuple[float, float] = (0.0, 0.0)) -> Spectrum:
    """Closed form ``s Psi(s u, s v) exp(-1j (u a + v b))``."""
    U, V = grid.freq_mesh()
    vals = scale_s * psi_hat(wavelet, scale_s * U, scale_s * V) * np.exp(-1j * (U * shift[0] + V * shift[1]))
    return Spectrum(grid, vals)


def lattice_admissibility(wavelet: ChirpletParams, scale_s: float, grid: Grid2D):
    """``C`` summed on the lattice ``s * u_k``, i.e. with ``Psi(s u, s v)``.

    ``C`` is scale-invariant in the continuum; on a lattice this is the value
    matching the discretization used by the transforms.  Returns
    ``(C, axis_fraction)`` or ``(None, None)`` when undefined.
    """
    try:
        res = admissibility_details(wavelet, Grid2D(grid.n, grid.pitch / scale_s))
    except (AdmissibilityUndefinedError, GeometryError):
        return None, None
    return res.c, res.axis_fraction


def _check_direct(grid: Grid2D, wavelet: ChirpletParams, scale_s: float):
    if grid.n > DIRECT_MAX_N:
        raise CostGuardError(
            f"direct CWT is O(N^4); n = {grid.n} > {DIRECT_MAX_N}. Use the spectral path")
    # local frequency of the dilated wavelet over its footprint
    foot = min(grid.window, 12.0 * wavelet.sigma * scale_s)
    beta_p = wavelet.beta / scale_s**2
    rate = 2.0 * beta_p * foot + wavelet.carrier_w0 / scale_s
    if rate > grid.nyquist:
        raise AliasingError(
            f"dilated wavelet aliases: 2*beta/s^2*footprint + w0/s = {rate:.6g} rad/mm > "
            f"pi/pitch = {grid.nyquist:.6g}")


def cwt_forward_direct(pattern: ComplexField, query: CwtQuery) -> CwtResult:
    """Literal lattice sum of the forward transform (reference path)."""
    g = pattern.grid
    s, wav = query.scale_s, query.wavelet
    _check_direct(g, wav, s)
    x = g.coords
    dx = (x[None, :] - x[:, None]) / s  # (a, i): (x_i - x_a)/s
    f = pattern.samples
    out = np.empty_like(f)
    for b in range(g.n):
        dy = ((x - x[b]) / s)[:, None, None]  # (j, 1, 1)
        kern = np.conj(psi(wav, dx[None, :, :], dy))  # (j, a, i)
        out[b] = np.einsum("ji,jai->a", f, kern)
    out *= g.pitch**2 / s
    return _result(pattern, out, query)


def cwt_forward_spectral(pattern: ComplexField, query: CwtQuery) -> CwtResult:
    g = pattern.grid
    s = query.scale_s
    mult = s * np.conj(scaled_spectrum(query.wavelet, s, g))
    out = _inv(_fwd(pattern.samples, g.pitch) * mult, g.pitch)
    return _result(pattern, out, query)


def _result(pattern: ComplexField, coeffs: np.ndarray, query: CwtQuery) -> CwtResult:
    c, frac = lattice_admissibility(query.wavelet, query.scale_s, pattern.grid)
    return CwtResult(
        coefficients=pattern.replace(samples=coeffs),
        scale_s=query.scale_s,
        k_constant=k_constant(query.wavelet, query.scale_s),
        admissibility_c=c,
        axis_fraction=frac,
    )


def _inverse_prefactor(result: CwtResult) -> complex:
    c = result.admissibility_c
    if c is None or not np.isfinite(c) or c <= 0:
        raise AdmissibilityUndefinedError(
            "inverse needs a finite admissibility constant C > 0; a pure-chirp wavelet "
            "(carrier_w0 = 0) or an off-lattice carrier leaves C undefined")
    if result.axis_fraction is not None and result.axis_fraction > AXIS_FRACTION_LIMIT:
        warnings.warn(
            f"axis-adjacent bins carry {100 * result.axis_fraction:.1f}% of C; the inverse's "
            "absolute gain depends on the lattice", AdmissibilityWarning, stacklevel=3)
    return result.k_constant / c


def icwt_direct(result: CwtResult, wavelet: ChirpletParams) -> ComplexField:
    """Literal lattice sum of the inverse (reference path)."""
    pref = _inverse_prefactor(result)
    coef = result.coefficients
    g = coef.grid
    s = result.scale_s
    _check_direct(g, wavelet, s)
    x = g.coords
    dx = (x[None, :] - x[:, None]) / s  # (out_x, a): (x - a)/s
    out = np.empty_like(coef.samples)
    for row in range(g.n):
        dy = ((x[row] - x) / s)[:, None, None]  # (b, 1, 1)
        kern = psi(wavelet, dx.T[None, :, :], dy)  # (b, out_x, a)
        out[row] = np.einsum("ba,bxa->x", coef.samples, kern)
    out *= pref * g.pitch**2 / s**2
    return coef.replace(samples=out)


def icwt_spectral(result: CwtResult, wavelet: ChirpletParams) -> ComplexField:
    pref = _inverse_prefactor(result)
    coef = result.coefficients
    g = coef.grid
    mult = pref * scaled_spectrum(wavelet, result.scale_s, g)
    return coef.replace(samples=_inv(_fwd(coef.samples, g.pitch) * mult, g.pitch))


def roundtrip_response(wavelet: ChirpletParams, scale_s: float, grid: Grid2D,
                       admissibility_c: float | None = None) -> Spectrum:
    """``KAPPA * |Psi(s u, s v)|^2 / C``, the spectral transfer of ICWT after CWT.

    The values share the constant phase of ``K_s``; divided by that phase
    they are real and nonnegative.
    """
    if admissibility_c is None:
        admissibility_c, _ = lattice_admissibility(wavelet, scale_s, grid)
        if admissibility_c is None:
            raise AdmissibilityUndefinedError("roundtrip response needs a defined admissibility constant")
    kappa = convention_constant(wavelet, scale_s)
    mag2 = np.abs(scaled_spectrum(wavelet, scale_s, grid)) ** 2
    return Spectrum(grid, kappa * mag2 / admissibility_c)
