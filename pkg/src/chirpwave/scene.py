"""Binary test objects on a lattice (closed boundaries)."""
from __future__ import annotations

import numpy as np

from .errors import GeometryError, InvalidArgumentError
from .grid import ComplexField, Grid2D

# boundary samples count as inside; the slack absorbs x_i = k*pitch rounding
_EDGE_SLACK = 1e-9


def _inside(coord: np.ndarray, half: float, pitch: float) -> np.ndarray:
    return np.abs(coord) <= half + _EDGE_SLACK * pitch


def _fits(extent: float, grid: Grid2D, what: str):
    if extent > grid.window:
        raise GeometryError(f"{what} {extent:.6g} mm exceeds the grid window {grid.window:.6g} mm")


def rect_aperture(width: float, height: float, grid: Grid2D, wavelength: float = 5.5e-4,
                  center: tuple[float, float] = (0.0, 0.0)) -> ComplexField:
    """Unit-amplitude rectangle ``|x - cx| <= width/2 and |y - cy| <= height/2``."""
    if not (width > 0 and height > 0):
        raise InvalidArgumentError(f"width and height must be > 0, got {width} x {height}")
    _fits(width, grid, "aperture width")
    _fits(height, grid, "aperture height")
    x = grid.coords
    mx = _inside(x - center[0], width / 2, grid.pitch)
    my = _inside(x - center[1], height / 2, grid.pitch)
    return ComplexField(grid, np.outer(my, mx).astype(np.complex128), wavelength, 0.0)


def circ_aperture(radius: float, grid: Grid2D, wavelength: float = 5.5e-4) -> ComplexField:
    if radius < 0:
        raise InvalidArgumentError(f"radius must be >= 0, got {radius}")
    _fits(2 * radius, grid, "aperture diameter")
    X, Y = grid.mesh()
    # compare squared distances in lattice units so the mask is exactly symmetric
    i = np.round(X / grid.pitch)
    j = np.round(Y / grid.pitch)
    r = radius / grid.pitch
    mask = i * i + j * j <= r * r + _EDGE_SLACK
    return ComplexField(grid, mask.astype(np.complex128), wavelength, 0.0)


def double_slit(slit_width: float, separation: float, height: float, grid: Grid2D,
                wavelength: float = 5.5e-4) -> ComplexField:
    """Two rectangles centered at ``x = +-separation/2``."""
    if separation < slit_width:
        raise GeometryError(f"slits overlap: separation {separation} < slit width {slit_width}")
    _fits(separation + slit_width, grid, "double-slit extent")
    a = rect_aperture(slit_width, height, grid, wavelength, center=(-separation / 2, 0.0))
    b = rect_aperture(slit_width, height, grid, wavelength, center=(separation / 2, 0.0))
    return a.replace(samples=a.samples + b.samples)
