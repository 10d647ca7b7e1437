"""The optical chirplet wavelet, its closed-form spectrum and wavelet checks.

The wavelet is a normalized Gaussian window times a quadratic-phase chirp
and an optional linear carrier::

    psi(x, y) = 1/(sqrt(2 pi) sigma) * exp(-(x^2 + y^2) / (4 sigma^2))
                * exp(1j*(beta*(x^2 + y^2) + w0*(x cos(theta) + y sin(theta))))

with ``beta = pi / (wavelength * z)``.  ``carrier_w0 = 0`` gives the pure
chirp.  Its spectrum under the package FT convention is::

    Psi(u, v) = 1/(sqrt(2 pi) sigma) * pi / (alpha - 1j*beta)
                * exp(-((u - w0 cos)^2 + (v - w0 sin)^2) / (4 (alpha - 1j*beta)))

with ``alpha = 1 / (4 sigma^2)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import (
    AdmissibilityUndefinedError,
    AdmissibilityWarning,
    AliasingError,
    CoverageError,
    CoverageWarning,
    GeometryError,
    InvalidArgumentError,
    MomentRangeError,
)
from .grid import ComplexField, Grid2D, Spectrum

MAX_MOMENT_ORDER = 35
# an aliased carrier must land this many |Psi| exponent units from the origin
ALIAS_EXPONENT_MARGIN = 200.0
AXIS_FRACTION_LIMIT = 0.10
RESOLVE_BINS = 16


@dataclass(frozen=True)
class ChirpletParams:
    """Parameters of one chirplet; lengths in mm, angles in radians.

    ``carrier_w0=None`` resolves to the optical wavenumber ``2*pi/wavelength``.
    """

    sigma: float
    wavelength: float
    z: float
    carrier_w0: float | None = None
    carrier_theta: float = np.pi / 4

    def __post_init__(self):
        for name in ("sigma", "wavelength", "z"):
            val = getattr(self, name)
            if not np.isfinite(val) or val <= 0:
                raise InvalidArgumentError(f"{name} must be > 0, got {val}")
        if self.carrier_w0 is None:
            object.__setattr__(self, "carrier_w0", 2.0 * np.pi / self.wavelength)
        if not np.isfinite(self.carrier_w0) or self.carrier_w0 < 0:
            raise InvalidArgumentError(f"carrier_w0 must be >= 0, got {self.carrier_w0}")
        if not np.isfinite(self.carrier_theta):
            raise InvalidArgumentError("carrier_theta must be finite")

    @property
    def alpha(self) -> float:
        return 1.0 / (4.0 * self.sigma**2)

    @property
    def beta(self) -> float:
        return np.pi / (self.wavelength * self.z)

    @property
    def norm(self) -> float:
        return 1.0 / (np.sqrt(2.0 * np.pi) * self.sigma)

    @property
    def carrier(self) -> tuple[float, float]:
        """Carrier angular frequency ``(w0 cos theta, w0 sin theta)``."""
        return (self.carrier_w0 * np.cos(self.carrier_theta),
                self.carrier_w0 * np.sin(self.carrier_theta))

    @property
    def spectral_rate(self) -> float:
        """``a`` in ``|Psi| ~ exp(-a d^2)``, ``d`` the distance to the carrier."""
        a, b = self.alpha, self.beta
        return a / (4.0 * (a * a + b * b))

    @property
    def bump_width(self) -> float:
        """Standard deviation (rad/mm) of the Gaussian ``|Psi|**2``."""
        return 1.0 / (2.0 * np.sqrt(self.spectral_rate))

    def to_dict(self) -> dict:
        return asdict(self)


def psi(params: ChirpletParams, x, y) -> np.ndarray:
    """Evaluate the wavelet at arbitrary coordinates (broadcasting)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    cu, cv = params.carrier
    phase = params.beta * r2 + cu * x + cv * y
    return params.norm * np.exp(-params.alpha * r2) * np.exp(1j * phase)


def psi_hat(params: ChirpletParams, u, v) -> np.ndarray:
    """Closed-form spectrum at arbitrary angular frequencies (broadcasting)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cu, cv = params.carrier
    q = params.alpha - 1j * params.beta
    d2 = (u - cu) ** 2 + (v - cv) ** 2
    return params.norm * (np.pi / q) * np.exp(-d2 / (4.0 * q))


def _max_axis_rate(params: ChirpletParams, grid: Grid2D) -> float:
    """Largest per-axis local angular frequency of the sampled wavelet."""
    x = grid.coords
    ends = np.array([x[0], x[-1]])
    worst = 0.0
    for c in params.carrier:
        worst = max(worst, float(np.max(np.abs(2.0 * params.beta * ends + c))))
    return worst


def check_nyquist(params: ChirpletParams, grid: Grid2D) -> None:
    """Refuse lattices on which the chirp or carrier phase aliases.

    The lattice is separable, so the condition is applied per axis:
    ``|2*beta*x + w0_axis| <= pi / pitch`` at both window edges.
    """
    rate = _max_axis_rate(params, grid)
    if rate > grid.nyquist * (1 + 1e-12):
        raise AliasingError(
            f"chirplet aliases: max |2*beta*x + w0_axis| = {rate:.6g} rad/mm > pi/pitch = "
            f"{grid.nyquist:.6g} rad/mm (beta={params.beta:.6g}, w0={params.carrier_w0:.6g}, "
            f"pitch={grid.pitch:.6g})"
        )


def chirplet_sample(params: ChirpletParams, grid: Grid2D) -> ComplexField:
    if grid.window < 6.0 * params.sigma:
        warnings.warn(
            f"window {grid.window:.6g} mm < 6*sigma = {6 * params.sigma:.6g} mm; "
            "the sampled wavelet is truncated", CoverageWarning, stacklevel=2)
    check_nyquist(params, grid)
    X, Y = grid.mesh()
    return ComplexField(grid, psi(params, X, Y), params.wavelength, 0.0)


def chirplet_spectrum(params: ChirpletParams, grid: Grid2D) -> Spectrum:
    U, V = grid.freq_mesh()
    return Spectrum(grid, psi_hat(params, U, V))


def spectrum_at_origin(params: ChirpletParams) -> float:
    return float(np.abs(psi_hat(params, 0.0, 0.0)))


def log_spectrum_at_origin(params: ChirpletParams) -> float:
    """Natural log of ``|Psi(0, 0)|``, finite even where the value underflows."""
    a, b = params.alpha, params.beta
    return float(np.log(params.norm * np.pi / np.hypot(a, b))
                 - params.carrier_w0**2 * params.spectral_rate)


# -- verification quadratures -------------------------------------------------

def _csum(a: np.ndarray) -> complex:
    """Row-wise pairwise sums folded with exactly rounded ``math.fsum``."""
    rows = np.sum(a, axis=-1)
    if np.iscomplexobj(rows):
        return complex(math.fsum(rows.real.ravel()), math.fsum(rows.imag.ravel()))
    return math.fsum(rows.ravel())


def _check_coverage(params: ChirpletParams, grid: Grid2D, factor: float = 8.0) -> None:
    if grid.window < factor * params.sigma:
        raise CoverageError(
            f"window {grid.window:.6g} mm < {factor:g}*sigma = {factor * params.sigma:.6g} mm")


def _check_quadrature_alias(params: ChirpletParams, grid: Grid2D) -> None:
    """Guard lattice sums against a carrier alias landing near the origin.

    A Riemann sum over the lattice equals the spectrum summed over the
    aliases ``2*pi*m/pitch``.  An undersampled carrier is harmless for the
    zero-frequency quantities (mean, moments) provided the nearest alias of
    the spectral bump is far from the origin; that is what is checked here.
    The chirp itself must always be resolved.
    """
    edge = grid.half_window
    if 2.0 * params.beta * edge > grid.nyquist:
        raise AliasingError(
            f"chirp aliases: 2*beta*half_window = {2 * params.beta * edge:.6g} > pi/pitch = "
            f"{grid.nyquist:.6g}")
    if _max_axis_rate(params, grid) <= grid.nyquist:
        return
    period = 2.0 * np.pi / grid.pitch
    cu, cv = params.carrier
    du = cu - period * np.round(cu / period)
    dv = cv - period * np.round(cv / period)
    expo = params.spectral_rate * (du * du + dv * dv)
    if expo < ALIAS_EXPONENT_MARGIN:
        raise AliasingError(
            f"carrier alias at ({du:.6g}, {dv:.6g}) rad/mm sits too close to the origin: "
            f"a*d^2 = {expo:.3g} < {ALIAS_EXPONENT_MARGIN:g} (pitch={grid.pitch:.6g})")


def _sampled_for_quadrature(params: ChirpletParams, grid: Grid2D) -> np.ndarray:
    _check_coverage(params, grid)
    _check_quadrature_alias(params, grid)
    X, Y = grid.mesh()
    return psi(params, X, Y)


def verify_energy(params: ChirpletParams, grid: Grid2D) -> float:
    _check_coverage(params, grid)
    X, Y = grid.mesh()
    mag2 = params.norm**2 * np.exp(-2.0 * params.alpha * (X * X + Y * Y))
    return float(grid.pitch**2 * _csum(mag2))


def verify_mean(params: ChirpletParams, grid: Grid2D) -> float:
    """``|pitch^2 * sum psi|``, the quadrature of the wavelet's mean."""
    s = _sampled_for_quadrature(params, grid)
    return float(abs(grid.pitch**2 * _csum(s)))


def mean_closed_form(params: ChirpletParams) -> float:
    """``|Psi(0, 0)|``, the exact value of ``|integral psi|``."""
    return spectrum_at_origin(params)


def verify_moments(params: ChirpletParams, grid: Grid2D, n_max: int = MAX_MOMENT_ORDER) -> list[tuple[int, float]]:
    """Normalized residuals ``|sum psi x^n y^n| / sum |psi| |x|^n |y|^n``."""
    if not isinstance(n_max, (int, np.integer)) or n_max < 1 or n_max > MAX_MOMENT_ORDER:
        raise InvalidArgumentError(f"n_max must be in 1..{MAX_MOMENT_ORDER}, got {n_max}")
    s = _sampled_for_quadrature(params, grid)
    x = grid.coords
    xmax = float(np.max(np.abs(x)))
    if xmax > 1 and 2 * n_max * np.log10(xmax) > 300:
        raise MomentRangeError(
            f"|x|^n |y|^n overflows float64: 2*{n_max}*log10({xmax:.6g}) > 300")
    mag = np.abs(s)
    out = []
    for n in range(1, n_max + 1):
        xn = x**n
        w = np.outer(xn, xn)  # rows y, cols x
        num = abs(_csum(s * w))
        den = _csum(mag * np.abs(w))
        out.append((n, float(num / den)))
    return out


# -- admissibility ------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityResult:
    c: float
    axis_fraction: float
    resolved: bool
    grid: Grid2D


def admissibility_grid(params: ChirpletParams, bins_per_width: float = 32.0 / 6.0) -> Grid2D:
    """A (virtual) lattice whose dual resolves the spectral bump.

    Only the lattice geometry is used; nothing of size ``n**2`` is allocated.
    """
    w = params.bump_width
    du = w / bins_per_width
    reach = max(abs(c) for c in params.carrier) + 12.0 * w
    half = int(np.ceil(reach / du)) + 2
    n = max(4, 2 * half)
    return Grid2D(n, 2.0 * np.pi / (n * du))


def _index_box(center: float, halfwidth: float, grid: Grid2D) -> tuple[int, int]:
    du = grid.dfreq
    lo = int(np.floor((center - halfwidth) / du)) + grid.n // 2
    hi = int(np.ceil((center + halfwidth) / du)) + grid.n // 2
    return max(lo, 0), min(hi, grid.n - 1)


def admissibility_details(params: ChirpletParams, grid: Grid2D | None = None) -> AdmissibilityResult:
    """Quadrature of ``|Psi|^2 / |u v|`` over the dual lattice, axes excluded.

    Bins outside a box of 12 bump widths around the carrier contribute less
    than ``exp(-72)`` of the peak and are skipped, so very large virtual
    lattices are cheap.
    """
    if params.carrier_w0 == 0:
        raise AdmissibilityUndefinedError(
            "admissibility constant undefined for carrier_w0 = 0: |Psi|^2 is maximal at the "
            "origin and the 1/|uv| integral diverges on both axes")
    if grid is None:
        grid = admissibility_grid(params)
    cu, cv = params.carrier
    if abs(cu) > grid.nyquist or abs(cv) > grid.nyquist:
        raise GeometryError(
            f"spectral bump at ({cu:.6g}, {cv:.6g}) rad/mm lies outside the dual lattice "
            f"|u| <= {grid.nyquist:.6g}")
    w = params.bump_width
    k0, k1 = _index_box(cu, 12 * w, grid)
    l0, l1 = _index_box(cv, 12 * w, grid)
    du = grid.dfreq
    u = (np.arange(k0, k1 + 1) - grid.n // 2) * du
    total = 0.0
    near = 0.0
    uk = np.arange(k0, k1 + 1) - grid.n // 2
    keep_u = uk != 0
    for start in range(l0, l1 + 1, 256):
        lk = np.arange(start, min(start + 256, l1 + 1)) - grid.n // 2
        v = lk * du
        keep = (lk != 0)[:, None] & keep_u[None, :]
        U, V = np.meshgrid(u, v, indexing="xy")
        with np.errstate(divide="ignore", invalid="ignore"):
            integ = np.where(keep, np.abs(psi_hat(params, U, V)) ** 2 / np.abs(U * V), 0.0)
        adj = ((np.abs(lk) == 1)[:, None] | (np.abs(uk) == 1)[None, :]) & keep
        total += _csum(integ)
        near += _csum(np.where(adj, integ, 0.0))
    c = total * du * du
    if not np.isfinite(c) or c <= 0:
        raise GeometryError(f"admissibility quadrature returned {c}; the bump is not sampled by the lattice")
    frac = near / total
    return AdmissibilityResult(float(c), float(frac), bool(du <= 6.0 * w / RESOLVE_BINS), grid)


def admissibility_constant(params: ChirpletParams, grid: Grid2D | None = None) -> float:
    res = admissibility_details(params, grid)
    if res.axis_fraction > AXIS_FRACTION_LIMIT:
        warnings.warn(
            f"axis-adjacent bins carry {100 * res.axis_fraction:.1f}% of C (> "
            f"{100 * AXIS_FRACTION_LIMIT:.0f}%); C is not converged and grows under refinement",
            AdmissibilityWarning, stacklevel=2)
    if not res.resolved:
        warnings.warn(
            f"frequency step {res.grid.dfreq:.4g} rad/mm resolves the spectral bump "
            f"(width {params.bump_width:.4g}) with fewer than {RESOLVE_BINS} bins",
            AdmissibilityWarning, stacklevel=2)
    return res.c


@dataclass
class WaveletReport:
    energy: float
    mean_abs: float
    moments: list = field(default_factory=list)
    admissibility_c: float | None = None
    admissibility_axis_fraction: float | None = None
    spectrum_origin_abs: float = 0.0
    spectrum_origin_log: float = 0.0
    parameters: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["moments"] = [[int(n), float(r)] for n, r in self.moments]
        return d


def wavelet_report(params: ChirpletParams, grid: Grid2D, n_max: int = MAX_MOMENT_ORDER) -> WaveletReport:
    if params.carrier_w0 > 0:
        res = admissibility_details(params)
        c, frac = res.c, res.axis_fraction
    else:
        c = frac = None
    return WaveletReport(
        energy=verify_energy(params, grid),
        mean_abs=verify_mean(params, grid),
        moments=verify_moments(params, grid, n_max),
        admissibility_c=c,
        admissibility_axis_fraction=frac,
        spectrum_origin_abs=spectrum_at_origin(params),
        spectrum_origin_log=log_spectrum_at_origin(params),
        parameters={**params.to_dict(), "alpha": params.alpha, "beta": params.beta,
                    "grid_n": grid.n, "grid_pitch_mm": grid.pitch},
    )
