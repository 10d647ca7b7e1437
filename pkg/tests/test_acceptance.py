"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` and the lines are repeated in the
"acceptance criteria" section of the terminal summary.
"""
import filecmp
import warnings

import numpy as np
import pytest

from chirpwave import cli, cwt2d, holofilter, propagate, scene
from chirpwave.chirplet import (
    ChirpletParams,
    chirplet_sample,
    chirplet_spectrum,
    log_spectrum_at_origin,
    spectrum_at_origin,
    verify_energy,
    verify_mean,
    verify_moments,
)
from chirpwave.errors import AdmissibilityWarning
from chirpwave.grid import ComplexField, ft_forward, make_grid

from conftest import ncc, record, rel_l2

LAM = 5.5e-4
Z_FIG2 = 54000.0


def _random_field(rng, grid, block=None):
    n = grid.n if block is None else block
    vals = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if block is None:
        return ComplexField(grid, vals, LAM)
    out = np.zeros((grid.n, grid.n), dtype=complex)
    lo = (grid.n - block) // 2
    out[lo:lo + block, lo:lo + block] = vals
    return ComplexField(grid, out, LAM)


def test_c01_wavelet_conditions():
    p = ChirpletParams(1.0, LAM, Z_FIG2)
    g = make_grid(1024, 40.0 / 1024)
    energy_err = abs(verify_energy(p, g) - 1.0)
    mean = verify_mean(p, g)
    worst_moment = max(r for _, r in verify_moments(p, g, 35))
    origin = spectrum_at_origin(p)
    origin_log10 = log_spectrum_at_origin(p) / np.log(10)
    ok = (energy_err <= 1e-9 and mean <= 1e-10 and worst_moment <= 1e-10
          and origin <= 1e-100 and origin_log10 <= -100)
    record(1, "wavelet conditions", ok,
           f"|E-1|={energy_err:.2e} mean={mean:.2e} max moment(1..35)={worst_moment:.2e} "
           f"log10|Psi(0,0)|={origin_log10:.4g}")
    assert ok


def test_c02_spectrum_cross_validation():
    cases = [
        ("w0=0", ChirpletParams(0.5, LAM, Z_FIG2, 0.0), make_grid(512, 0.02)),
        ("w0=2pi/lambda", ChirpletParams(0.01, LAM, Z_FIG2), make_grid(512, 3.5e-4)),
    ]
    errs = {}
    for name, p, g in cases:
        errs[name] = rel_l2(ft_forward(chirplet_sample(p, g)).samples, chirplet_spectrum(p, g).samples)
    ok = all(e <= 1e-3 for e in errs.values())
    record(2, "spectrum cross-validation", ok, " ".join(f"{k}: {v:.2e}" for k, v in errs.items()))
    assert ok


def test_c03_propagator_oracle(rng):
    n = 64
    g = make_grid(n, np.sqrt(LAM * Z_FIG2 / n))
    f = _random_field(rng, g)
    tf = propagate.fresnel_forward(f, propagate.PropagationParams(LAM, Z_FIG2, "transfer_function"))
    dq = propagate.fresnel_forward(f, propagate.PropagationParams(LAM, Z_FIG2, "direct_quadrature"))
    err = rel_l2(tf.samples, dq.samples)
    energy = abs(tf.energy() - f.energy()) / f.energy()
    ok = err <= 1e-6 and energy <= 1e-9
    record(3, "propagator oracle", ok, f"TF vs direct {err:.2e}, energy drift {energy:.2e}")
    assert ok


def test_c04_cwt_oracle(rng):
    g = make_grid(64, 1.0)
    errs = []
    for beta, sigma, s in ((0.025, 1.6, 1.0), (0.02, 1.4, 1.5)):
        wav = ChirpletParams(sigma, LAM, np.pi / (LAM * beta), 0.5)
        q = cwt2d.CwtQuery(s, wav)
        f = _random_field(rng, g, block=32)
        fwd = rel_l2(cwt2d.cwt_forward_direct(f, q).coefficients.samples,
                     cwt2d.cwt_forward_spectral(f, q).coefficients.samples)
        c, frac = cwt2d.lattice_admissibility(wav, s, g)
        res = cwt2d.CwtResult(_random_field(rng, g, block=32), s, cwt2d.k_constant(wav, s), c, frac)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AdmissibilityWarning)
            inv = rel_l2(cwt2d.icwt_direct(res, wav).samples, cwt2d.icwt_spectral(res, wav).samples)
        errs += [fwd, inv]
    ok = max(errs) <= 1e-6
    record(4, "CWT oracle", ok, "forward/inverse direct vs spectral " + ", ".join(f"{e:.1e}" for e in errs))
    assert ok


def test_c05_dilation_identity():
    wav = ChirpletParams(1.0, LAM, np.pi / (LAM * 0.01), 1.0)
    g = make_grid(320, 0.2)
    worst = 0.0
    for s in (0.5, 1.0, 2.0):
        for shift in ((0.0, 0.0), (3.2, -1.4)):
            lat = ft_forward(cwt2d.dilated_wavelet(wav, s, g, shift)).samples
            worst = max(worst, rel_l2(lat, cwt2d.dilated_spectrum(wav, s, g, shift).samples))
    ok = worst <= 1e-9
    record(5, "dilation identity", ok, f"max relative error over s in {{0.5,1,2}} x 2 shifts: {worst:.2e}")
    assert ok


def test_c06_diffraction_cwt_correspondence():
    g = make_grid(512, 0.25)
    obj = scene.rect_aperture(6.0, 2.0, g, LAM)
    fres = propagate.fresnel_forward(obj, propagate.PropagationParams(LAM, Z_FIG2))
    ref = np.abs(fres.samples) / np.linalg.norm(fres.samples)
    nccs, gaps = [], []
    for ratio in (2, 4, 8):
        q = cwt2d.CwtQuery.from_distance(LAM, Z_FIG2, ratio * g.half_window, 0.0)
        res = cwt2d.cwt_forward_spectral(obj, q)
        mag = np.abs(res.k_constant * res.coefficients.samples)
        nccs.append(ncc(mag, ref))
        gaps.append(float(np.linalg.norm(mag / np.linalg.norm(mag) - ref)))
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    ok = nccs[-1] >= 0.99 and monotone
    assert abs(q.scale_s - 3.0747) < 1e-4
    record(6, "diffraction/CWT correspondence", ok,
           f"NCC {', '.join(f'{v:.6f}' for v in nccs)}; L2 gap {', '.join(f'{v:.2e}' for v in gaps)}")
    assert ok


def test_c07_roundtrip_filter(rng):
    g = make_grid(128, 1.0)
    s = 2.0
    wav = cwt2d.mother_wavelet(s, LAM, 3.0, 0.8)
    f = _random_field(rng, g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdmissibilityWarning)
        res = cwt2d.cwt_forward_spectral(f, cwt2d.CwtQuery(s, wav))
        out = cwt2d.icwt_spectral(res, wav)
    measured = ft_forward(out).samples / ft_forward(f).samples
    expected = cwt2d.roundtrip_response(wav, s, g, res.admissibility_c).samples
    diff = np.abs(measured - expected)
    peak_rel = float(diff.max() / np.abs(expected).max())
    sig = np.abs(expected) > 1e-3 * np.abs(expected).max()
    point_rel = float(np.max(diff[sig] / np.abs(expected[sig])))
    ok = peak_rel <= 1e-9 and point_rel <= 1e-9
    record(7, "round-trip filter identity", ok,
           f"max |dT|/max|T| = {peak_rel:.2e}, pointwise (|T| > 1e-3 peak) {point_rel:.2e}")
    assert ok


@pytest.fixture(scope="module")
def fig2_run():
    return cli.run_fig2()


def test_c08_rect_reconstruction(fig2_run):
    val = fig2_run["report"]["metrics"]["icwt_vs_object_ncc"]
    ok = val >= 0.95
    record(8, "rect-aperture reconstruction", ok, f"NCC(|ICWT(CWT(mask))|, mask) = {val:.6f} (threshold 0.95)")
    assert ok


def test_c09_inverse_propagation():
    n = 512
    g = make_grid(n, np.sqrt(LAM * Z_FIG2 / n))
    obj = scene.rect_aperture(6.0, 2.0, g, LAM)
    pp = propagate.PropagationParams(LAM, Z_FIG2)
    far = propagate.fresnel_forward(obj, pp)
    back = propagate.fresnel_inverse(far, pp)
    fraun = propagate.fraunhofer_inverse(far, pp)
    assert back.grid == g
    c_fres = ncc(back.samples, obj.samples)
    c_fraun = ncc(fraun.samples, obj.samples)
    m_fwd, prop = propagate.angular_spectrum_multiplier(g, LAM, 25.0)
    m_bwd, _ = propagate.angular_spectrum_multiplier(g, LAM, -25.0)
    self_inv = float(np.max(np.abs(m_fwd * m_bwd - prop)))
    ok = c_fres >= 0.99 and c_fraun >= 0.9 and self_inv <= 1e-12
    record(9, "inverse propagation", ok,
           f"Fresnel NCC {c_fres:.6f}, Fraunhofer NCC {c_fraun:.6f}, AS self-inverse {self_inv:.1e}")
    assert ok


def test_c10_holofilter():
    g = make_grid(512, 0.125)
    obj = scene.rect_aperture(6.0, 2.0, g, LAM)
    wav = cwt2d.mother_wavelet(1.0, LAM, 1.0, 0.0)
    w = holofilter.window_width(wav, 1.0)
    hspec = holofilter.HologramSpec(obj, 8 * w, np.pi / 4, 1.0)
    holo = holofilter.synth_hologram(hspec)
    out = holofilter.filter_order(holo, wav, 1.0, hspec.order_center)
    m = holofilter.suppression_metrics(holo, out, 2 * w, hspec.order_center, 2 * w)
    rec = holofilter.recenter(out, hspec.order_center)
    c = ncc(rec.samples, obj.samples)
    ok = m["dc_db"] >= 40 and m["minus1_db"] >= 40 and m["plus1_db"] <= 3 and c >= 0.9
    record(10, "holofilter", ok,
           f"DC {m['dc_db']:.1f} dB, twin {m['minus1_db']:.1f} dB, +1 loss {m['plus1_db']:.2f} dB, "
           f"recovered NCC {c:.4f}")
    assert ok


def test_c11_fig2_end_to_end(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.run(["fig2", "--out", str(a)]) == 0
    assert cli.run(["fig2", "--out", str(b)]) == 0
    names = ["object.pgm", "fresnel_amp.pgm", "cwt_amp.pgm", "icwt_amp.pgm", "report.json"]
    present = all((a / n).is_file() for n in names)
    match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    ok = present and match == names
    record(11, "fig2 end-to-end", ok, f"{len(match)}/{len(names)} outputs byte-identical across two runs")
    assert ok
