import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chirpwave.errors import InvalidArgumentError
from chirpwave.grid import ComplexField, Grid2D, Spectrum, ft_direct, ft_forward, ft_inverse, make_grid

from conftest import rel_l2


def test_lattice_is_centered_with_origin_at_half_n():
    g = make_grid(8, 0.5)
    assert g.coords[4] == 0.0
    assert g.coords[0] == -2.0 and g.coords[-1] == 1.5
    assert g.freqs[4] == 0.0
    assert np.isclose(g.dfreq, 2 * np.pi / (8 * 0.5))
    assert np.isclose(g.nyquist, np.pi / 0.5)
    assert np.isclose(-g.freqs[0], g.nyquist)


def test_mesh_is_row_y():
    g = make_grid(6, 1.0)
    X, Y = g.mesh()
    assert np.all(X[0] == g.coords)
    assert np.all(Y[:, 0] == g.coords)


@pytest.mark.parametrize("n, pitch", [(7, 1.0), (2, 1.0), (8, 0.0), (8, -1.0), (8, np.inf)])
def test_grid_rejects_bad_geometry(n, pitch):
    with pytest.raises(InvalidArgumentError):
        Grid2D(n, pitch)


def test_field_rejects_wrong_shape_and_nonfinite():
    g = make_grid(4, 1.0)
    with pytest.raises(InvalidArgumentError):
        ComplexField(g, np.zeros((4, 6)))
    bad = np.zeros((4, 4), complex)
    bad[1, 1] = np.nan
    with pytest.raises(InvalidArgumentError):
        ComplexField(g, bad)


def test_fft_matches_direct_sum(rng):
    g = make_grid(16, 0.3)
    f = ComplexField(g, rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)))
    assert rel_l2(ft_forward(f).samples, ft_direct(f).samples) < 1e-12


def test_gaussian_transform_is_analytic():
    g = make_grid(128, 0.15)
    X, Y = g.mesh()
    U, V = g.freq_mesh()
    f = ComplexField(g, np.exp(-(X**2 + Y**2) / 2))
    expected = 2 * np.pi * np.exp(-(U**2 + V**2) / 2)
    assert rel_l2(ft_forward(f).samples, expected) < 1e-12


def test_inverse_requires_matching_grid():
    g = make_grid(8, 1.0)
    with pytest.raises(InvalidArgumentError):
        ft_inverse(Spectrum(g, np.zeros((8, 8))), make_grid(8, 0.5))


@settings(max_examples=25, deadline=None)
@given(n=st.sampled_from([4, 8, 16, 32]), pitch=st.floats(0.01, 10.0), seed=st.integers(0, 2**32 - 1))
def test_roundtrip_and_parseval(n, pitch, seed):
    r = np.random.default_rng(seed)
    g = make_grid(n, pitch)
    f = ComplexField(g, r.standard_normal((n, n)) + 1j * r.standard_normal((n, n)))
    F = ft_forward(f)
    back = ft_inverse(F)
    assert rel_l2(back.samples, f.samples) < 1e-12
    # Parseval: integral |f|^2 = (1/4pi^2) integral |F|^2
    spec_energy = np.sum(np.abs(F.samples) ** 2) * g.dfreq**2 / (4 * np.pi**2)
    assert np.isclose(spec_energy, f.energy(), rtol=1e-12)


@settings(max_examples=25, deadline=None)
@given(a=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       seed=st.integers(0, 2**32 - 1))
def test_transform_is_linear(a, seed):
    r = np.random.default_rng(seed)
    g = make_grid(16, 0.7)
    f1, f2 = (r.standard_normal((16, 16)) + 1j * r.standard_normal((16, 16)) for _ in range(2))
    lhs = ft_forward(ComplexField(g, a * f1 + f2)).samples
    rhs = a * ft_forward(ComplexField(g, f1)).samples + ft_forward(ComplexField(g, f2)).samples
    assert np.allclose(lhs, rhs, atol=1e-10 * (1 + abs(a)) * np.abs(rhs).max())
