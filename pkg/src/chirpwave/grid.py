"""Centered sampling lattices, complex fields and the discrete Fourier pair.

Conventions used by every other module:

* ``x_i = (i - n/2) * pitch`` for ``i in [0, n)``; ``n`` is even so the
  sample at index ``n/2`` is the origin.
* Samples are stored row-major with the row index running over ``y``.
* The dual lattice is ``u_k = 2*pi*(k - n/2) / (n*pitch)`` in rad/mm.
* Forward transform (angular frequency, non-unitary)::

      F[k, l] = pitch**2 * sum_ij f[i, j] * exp(-1j*(u_k*x_i + v_l*y_j))

  and its exact inverse carries the ``(2*pi)**-2 * du * dv`` weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class Grid2D:
    """Square, uniform, centered lattice with ``n`` samples per axis."""

    n: int
    pitch: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise InvalidArgumentError(f"n must be an integer, got {self.n!r}")
        if self.n < 4 or self.n % 2:
            raise InvalidArgumentError(f"n must be even and >= 4, got n={self.n}")
        if not np.isfinite(self.pitch) or self.pitch <= 0:
            raise InvalidArgumentError(f"pitch must be > 0, got pitch={self.pitch}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "pitch", float(self.pitch))

    @property
    def window(self) -> float:
        """Physical side length ``n * pitch`` in mm."""
        return self.n * self.pitch

    @property
    def half_window(self) -> float:
        return 0.5 * self.n * self.pitch

    @property
    def dfreq(self) -> float:
        """Angular-frequency step ``2*pi / (n*pitch)`` in rad/mm."""
        return 2.0 * np.pi / (self.n * self.pitch)

    @property
    def nyquist(self) -> float:
        """Largest representable angular frequency ``pi / pitch``."""
        return np.pi / self.pitch

    @property
    def coords(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.pitch

    @property
    def freqs(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dfreq

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(X, Y)`` with rows indexing ``y``."""
        x = self.coords
        return np.meshgrid(x, x, indexing="xy")

    def freq_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(U, V)`` on the dual lattice, rows indexing ``v``."""
        u = self.freqs
        return np.meshgrid(u, u, indexing="xy")


def make_grid(n: int, pitch: float) -> Grid2D:
    return Grid2D(n, pitch)


def _checked_samples(samples, n: int, what: str) -> np.ndarray:
    arr = np.asarray(samples, dtype=np.complex128)
    if arr.shape != (n, n):
        raise InvalidArgumentError(f"{what} must have shape ({n}, {n}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{what} contains non-finite values")
    return arr


@dataclass(frozen=True)
class ComplexField:
    """Complex samples on a :class:`Grid2D` with wavelength and plane metadata.

    ``wavelength`` and ``plane_z`` are in mm; ``plane_z`` is 0 for a source plane.
    """

    grid: Grid2D
    samples: np.ndarray = field(repr=False)
    wavelength: float = 5.5e-4
    plane_z: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "samples", _checked_samples(self.samples, self.grid.n, "field samples"))
        if not np.isfinite(self.wavelength) or self.wavelength <= 0:
            raise InvalidArgumentError(f"wavelength must be > 0, got {self.wavelength}")
        if not np.isfinite(self.plane_z):
            raise InvalidArgumentError("plane_z must be finite")

    def replace(self, samples=None, grid=None, plane_z=None) -> "ComplexField":
        return ComplexField(
            grid=self.grid if grid is None else grid,
            samples=self.samples if samples is None else samples,
            wavelength=self.wavelength,
            plane_z=self.plane_z if plane_z is None else plane_z,
        )

    def energy(self) -> float:
        """Quadrature ``pitch**2 * sum |f|**2``."""
        return float(self.grid.pitch**2 * np.sum(np.abs(self.samples) ** 2))


@dataclass(frozen=True)
class Spectrum:
    """Samples on the angular-frequency lattice dual to ``grid``."""

    grid: Grid2D
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", _checked_samples(self.samples, self.grid.n, "spectrum samples"))


def _fwd(f: np.ndarray, pitch: float) -> np.ndarray:
    return pitch**2 * np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(f)))


def _inv(F: np.ndarray, pitch: float) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(F))) / pitch**2


def ft_forward(fld: ComplexField) -> Spectrum:
    """Exact centered discrete sum of the continuous angular-frequency FT."""
    return Spectrum(fld.grid, _fwd(fld.samples, fld.grid.pitch))


def ft_inverse(spectrum: Spectrum, grid: Grid2D | None = None, wavelength: float = 5.5e-4,
               plane_z: float = 0.0) -> ComplexField:
    """Inverse of :func:`ft_forward`; ``grid`` (if given) must match the spectrum's."""
    if grid is not None and grid != spectrum.grid:
        raise InvalidArgumentError(f"grid mismatch: spectrum is dual to {spectrum.grid}, got {grid}")
    return ComplexField(spectrum.grid, _inv(spectrum.samples, spectrum.grid.pitch), wavelength, plane_z)


def ft_direct(fld: ComplexField) -> Spectrum:
    """O(N^4) literal evaluation of the defining sum; reference path only."""
    g = fld.grid
    x = g.coords
    u = g.freqs
    kern = np.exp(-1j * np.outer(u, x))
    out = np.empty((g.n, g.n), dtype=np.complex128)
    f = fld.samples
    for l in range(g.n):
        # row l of the output: sum over (j, i) of f[j, i] * e^{-j v_l y_j} e^{-j u_k x_i}
        ph = kern[l][:, None, None] * kern[None, :, :]  # (j, k, i)
        out[l] = np.einsum("ji,jki->k", f, ph)
    return Spectrum(g, g.pitch**2 * out)
