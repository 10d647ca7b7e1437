import numpy as np
import pytest

from chirpwave import propagate, scene
from chirpwave.errors import GeometryError, InvalidArgumentError
from chirpwave.grid import make_grid

LAM = 5.5e-4


def test_fig2_rect_count_and_energy():
    g = make_grid(512, 0.25)
    r = scene.rect_aperture(6.0, 2.0, g)
    assert np.count_nonzero(r.samples) == 225
    assert set(np.unique(r.samples)) <= {0, 1}
    assert r.energy() == pytest.approx(0.25**2 * 225)


def test_rect_errors():
    g = make_grid(64, 0.25)
    with pytest.raises(GeometryError):
        scene.rect_aperture(20.0, 1.0, g)
    with pytest.raises(InvalidArgumentError):
        scene.rect_aperture(0.0, 1.0, g)


def test_rect_energy_monotone():
    g = make_grid(128, 0.1)
    e = [scene.rect_aperture(w, h, g).energy() for w, h in ((1, 1), (1.5, 1), (1.5, 2), (3, 2))]
    assert all(b >= a for a, b in zip(e, e[1:]))


def test_circ_zero_radius_is_center_sample():
    g = make_grid(16, 0.5)
    c = scene.circ_aperture(0.0, g).samples
    assert np.count_nonzero(c) == 1 and c[8, 8] == 1


def test_circ_count_and_symmetry():
    g = make_grid(64, 0.25)
    c = scene.circ_aperture(2.0, g).samples.real
    count = sum(1 for i in range(-32, 32) for j in range(-32, 32) if i * i + j * j <= 64)
    assert np.count_nonzero(c) == count == 197
    inner = c[1:, 1:]  # drop the unpaired -n/2 row and column
    assert np.array_equal(inner, inner[::-1, :])
    assert np.array_equal(inner, inner[:, ::-1])
    assert np.array_equal(inner, inner.T)


def test_double_slit_is_sum_of_rects():
    g = make_grid(128, 0.1)
    d = scene.double_slit(0.5, 3.0, 2.0, g)
    a = scene.rect_aperture(0.5, 2.0, g, center=(-1.5, 0.0))
    b = scene.rect_aperture(0.5, 2.0, g, center=(1.5, 0.0))
    assert np.array_equal(d.samples, a.samples + b.samples)
    assert set(np.unique(d.samples)) <= {0, 1}


def test_double_slit_errors():
    g = make_grid(64, 0.25)
    with pytest.raises(GeometryError, match="overlap"):
        scene.double_slit(1.0, 0.5, 1.0, g)
    with pytest.raises(GeometryError):
        scene.double_slit(0.5, 100.0, 1.0, g)


def test_double_slit_fringe_spacing():
    g = make_grid(512, 0.25)
    d = scene.double_slit(0.5, 3.0, 2.0, g, LAM)
    far = propagate.fresnel_forward(d, propagate.PropagationParams(LAM, 54000.0))
    row = np.abs(far.samples[256]) ** 2
    spec = np.abs(np.fft.rfft(row - row.mean()))
    # the single-slit envelope (width ~ lambda z / slit = 59 mm) owns the first few bins
    k = 5 + int(np.argmax(spec[5:]))
    spacing = g.window / k
    # one bin around the peak in frequency
    assert g.window / (k + 1) <= 29.7 / 3.0 <= g.window / (k - 1)
    assert spacing == pytest.approx(9.9, rel=0.1)
