"""Command-line entry point.

Wavelengths are given in nm on the command line; every other length is mm.
Exit codes: 0 success, 1 usage error, 2 numeric/validity refusal or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import chirplet, cwt2d, holofilter, propagate, scene
from .errors import OpticsError
from .fileio import IMAGE_MODES, export_image, read_cfield, write_cfield
from .grid import ComplexField, Spectrum, _fwd, make_grid

FIG2 = dict(width_mm=6.0, height_mm=2.0, z_mm=54000.0, lambda_nm=550.0, n=512, pitch_mm=0.25,
            sigma_over_half_window=2.0, carrier_rad_per_mm=0.02, theta_rad=float(np.pi / 4))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _nm(v: float) -> float:
    return v * 1e-6


def ncc(a, b) -> float:
    """Normalized cross-correlation of two magnitude patterns."""
    a = np.abs(np.asarray(a)).ravel()
    b = np.abs(np.asarray(b)).ravel()
    den = np.linalg.norm(a) * np.linalg.norm(b)
    return float(a @ b / den) if den > 0 else 0.0


def _dump(obj: dict, path, stamp: bool) -> None:
    if stamp:
        obj = {**obj, "stamp": datetime.now(timezone.utc).isoformat()}
    text = json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _jsonable(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not serializable: {type(o)}")


def _maybe_image(fld, args):
    if getattr(args, "image", None):
        export_image(fld, args.image_mode, args.image)


def _load_or_rect(args) -> ComplexField:
    if args.input:
        fld = read_cfield(args.input)
        if args.lambda_nm is not None:
            fld = ComplexField(fld.grid, fld.samples, _nm(args.lambda_nm), fld.plane_z)
        return fld
    g = make_grid(args.n, args.pitch_mm)
    lam = _nm(args.lambda_nm if args.lambda_nm is not None else FIG2["lambda_nm"])
    return scene.rect_aperture(FIG2["width_mm"], FIG2["height_mm"], g, lam)


# -- subcommands --------------------------------------------------------------

def cmd_scene(args) -> int:
    g = make_grid(args.n, args.pitch_mm)
    lam = _nm(args.lambda_nm)
    if args.kind == "rect":
        fld = scene.rect_aperture(args.width_mm, args.height_mm, g, lam)
    elif args.kind == "circ":
        fld = scene.circ_aperture(args.radius_mm, g, lam)
    else:
        fld = scene.double_slit(args.slit_width_mm, args.separation_mm, args.height_mm, g, lam)
    write_cfield(fld, args.out)
    _maybe_image(fld, args)
    return 0


def cmd_propagate(args) -> int:
    fld = _load_or_rect(args)
    params = propagate.PropagationParams(fld.wavelength, args.z_mm, args.method)
    if args.inverse is None:
        out = propagate.fresnel_forward(fld, params)
    elif args.inverse == "fraunhofer":
        out = propagate.fraunhofer_inverse(fld, params)
    elif args.inverse == "fresnel":
        out = propagate.fresnel_inverse(fld, params)
    else:
        out = propagate.angular_spectrum_inverse(fld, params)
    write_cfield(out, args.out)
    _maybe_image(out, args)
    return 0


def _query(args, wavelength: float) -> cwt2d.CwtQuery:
    if args.scale_mm is not None:
        s = args.scale_mm
    else:
        s = propagate.scale_from_distance(wavelength, args.from_z_mm)
    if args.carrier == "off":
        carrier = 0.0
    elif args.carrier_rad_per_mm is not None:
        carrier = args.carrier_rad_per_mm
    else:
        carrier = 2 * np.pi / (wavelength * s)  # mother carrier 2*pi/lambda
    return cwt2d.CwtQuery(s, cwt2d.mother_wavelet(s, wavelength, args.sigma_mm, carrier, args.theta_rad))


def _cwt_meta(res: cwt2d.CwtResult, query: cwt2d.CwtQuery) -> dict:
    return {
        "scale_mm": res.scale_s,
        "k_constant": res.k_constant,
        "admissibility_c": res.admissibility_c,
        "admissibility_axis_fraction": res.axis_fraction,
        "mother_wavelet": query.wavelet.to_dict(),
    }


def cmd_cwt(args) -> int:
    fld = read_cfield(args.input)
    q = _query(args, fld.wavelength)
    fn = cwt2d.cwt_forward_direct if args.method == "direct" else cwt2d.cwt_forward_spectral
    res = fn(fld, q)
    write_cfield(res.coefficients, args.out)
    _dump(_cwt_meta(res, q), str(args.out) + ".json", args.stamp)
    _maybe_image(res.coefficients, args)
    return 0


def cmd_icwt(args) -> int:
    coef = read_cfield(args.input)
    q = _query(args, coef.wavelength)
    c, frac = cwt2d.lattice_admissibility(q.wavelet, q.scale_s, coef.grid)
    res = cwt2d.CwtResult(coef, q.scale_s, cwt2d.k_constant(q.wavelet, q.scale_s), c, frac)
    fn = cwt2d.icwt_direct if args.method == "direct" else cwt2d.icwt_spectral
    out = fn(res, q.wavelet)
    write_cfield(out, args.out)
    _maybe_image(out, args)
    return 0


def cmd_verify(args) -> int:
    lam = _nm(args.lambda_nm)
    w0 = 0.0 if args.carrier == "off" else args.carrier_rad_per_mm
    params = chirplet.ChirpletParams(args.sigma_mm, lam, args.z_mm, w0, args.theta_rad)
    g = make_grid(args.n, args.window_sigmas * args.sigma_mm / args.n)
    report = chirplet.wavelet_report(params, g, args.moments)
    _dump(report.to_dict(), args.out, args.stamp)
    return 0


def cmd_holofilter(args) -> int:
    if args.hologram:
        holo = read_cfield(args.hologram)
        obj = None
    else:
        obj = _load_or_rect(args)
    plus_center = (args.tilt_rad_per_mm * np.cos(args.phi_rad), args.tilt_rad_per_mm * np.sin(args.phi_rad))
    if obj is not None:
        hspec = holofilter.HologramSpec(obj, args.tilt_rad_per_mm, args.phi_rad, args.amplitude_ratio)
        holo = holofilter.synth_hologram(hspec)
    center = plus_center if args.order == "+1" else (-plus_center[0], -plus_center[1])
    wav = cwt2d.mother_wavelet(args.scale_mm, holo.wavelength, args.sigma_mm, 0.0)
    out = holofilter.filter_order(holo, wav, args.scale_mm, center)
    metrics = holofilter.suppression_metrics(holo, out, args.dc_radius, center, args.order_radius)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_cfield(out, outdir / "filtered.cfield")
    g = holo.grid
    export_image(_fwd(holo.samples, g.pitch), "log_amplitude", outdir / "spectrum_before.pgm")
    export_image(_fwd(out.samples, g.pitch), "log_amplitude", outdir / "spectrum_after.pgm")
    report = {
        "parameters": {
            "tilt_rad_per_mm": args.tilt_rad_per_mm, "phi_rad": args.phi_rad, "order": args.order,
            "sigma_mm": args.sigma_mm, "scale_mm": args.scale_mm, "amplitude_ratio": args.amplitude_ratio,
            "n": g.n, "pitch_mm": g.pitch, "wavelength_mm": holo.wavelength,
            "window_width_rad_per_mm": holofilter.window_width(wav, args.scale_mm),
        },
        "metrics": metrics,
    }
    if obj is not None:
        rec = holofilter.recenter(out, center)
        report["metrics"]["recovered_object_ncc"] = ncc(rec.samples, obj.samples)
    _dump(report, outdir / "metrics.json", args.stamp)
    return 0


def run_fig2(n: int = FIG2["n"], pitch_mm: float = FIG2["pitch_mm"], z_mm: float = FIG2["z_mm"],
             lambda_nm: float = FIG2["lambda_nm"],
             sigma_over_half_window: float = FIG2["sigma_over_half_window"],
             carrier_rad_per_mm: float = FIG2["carrier_rad_per_mm"],
             theta_rad: float = FIG2["theta_rad"]) -> dict:
    """Object, Fresnel pattern, CWT amplitude and ICWT reconstruction of the rect aperture."""
    lam = _nm(lambda_nm)
    g = make_grid(n, pitch_mm)
    obj = scene.rect_aperture(FIG2["width_mm"], FIG2["height_mm"], g, lam)
    pp = propagate.PropagationParams(lam, z_mm)
    fres = propagate.fresnel_forward(obj, pp)
    q = cwt2d.CwtQuery.from_distance(lam, z_mm, sigma_over_half_window * g.half_window,
                                     carrier_rad_per_mm, theta_rad)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = cwt2d.cwt_forward_spectral(obj, q)
        rec = cwt2d.icwt_spectral(res, q.wavelet)
    back = propagate.fresnel_inverse(fres, pp)
    back_mask = scene.rect_aperture(FIG2["width_mm"], FIG2["height_mm"], back.grid, lam).samples
    sup = back_mask.real > 0
    report = {
        "parameters": {
            "aperture_mm": [FIG2["width_mm"], FIG2["height_mm"]], "z_mm": z_mm, "lambda_nm": lambda_nm,
            "n": n, "pitch_mm": pitch_mm, "scale_mm": q.scale_s,
            "sigma_mm": sigma_over_half_window * g.half_window,
            "carrier_rad_per_mm": carrier_rad_per_mm, "theta_rad": theta_rad,
            "mother_wavelet": q.wavelet.to_dict(),
        },
        "k_constant": res.k_constant,
        "admissibility_c": res.admissibility_c,
        "admissibility_axis_fraction": res.axis_fraction,
        "metrics": {
            "cwt_vs_fresnel_ncc": ncc(res.k_constant * res.coefficients.samples, fres.samples),
            "icwt_vs_object_ncc": ncc(rec.samples, obj.samples),
            "fresnel_inverse_support_ncc": ncc(back.samples[sup], back_mask[sup]),
        },
        "warnings": sorted({str(w.message) for w in caught}),
    }
    return {"report": report, "object": obj, "fresnel": fres, "cwt": res.coefficients, "icwt": rec}


def cmd_fig2(args) -> int:
    out = run_fig2(args.n, args.pitch_mm, args.z_mm, args.lambda_nm, args.sigma_over_half_window,
                   args.carrier_rad_per_mm, args.theta_rad)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    export_image(out["object"], "amplitude", outdir / "object.pgm")
    export_image(out["fresnel"], "amplitude", outdir / "fresnel_amp.pgm")
    export_image(out["cwt"], "amplitude", outdir / "cwt_amp.pgm")
    export_image(out["icwt"], "amplitude", outdir / "icwt_amp.pgm")
    _dump(out["report"], outdir / "report.json", args.stamp)
    return 0


# -- parser -------------------------------------------------------------------

def _image_flags(p):
    p.add_argument("--image", help="also render a 16-bit PGM of the output")
    p.add_argument("--image-mode", choices=IMAGE_MODES, default="amplitude")


def _wavelet_flags(p, carrier_default="on"):
    sc = p.add_mutually_exclusive_group(required=True)
    sc.add_argument("--scale-mm", type=float)
    sc.add_argument("--from-z-mm", type=float, help="scale from distance: sqrt(lambda z / pi)")
    p.add_argument("--sigma-mm", type=float, required=True, help="physical window width at this scale")
    p.add_argument("--carrier", choices=("on", "off"), default=carrier_default)
    p.add_argument("--carrier-rad-per-mm", type=float, help="physical carrier (default 2*pi/(lambda*s))")
    p.add_argument("--theta-rad", type=float, default=np.pi / 4)
    p.add_argument("--method", choices=("spectral", "direct"), default="spectral")


def _grid_flags(p, n=512, pitch=0.25):
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--pitch-mm", type=float, default=pitch)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="chirpwave", description="Chirplet-wavelet diffraction toolkit")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scene", help="write a binary test object")
    p.add_argument("kind", choices=("rect", "circ", "slit"))
    p.add_argument("--width-mm", type=float, default=6.0)
    p.add_argument("--height-mm", type=float, default=2.0)
    p.add_argument("--radius-mm", type=float, default=2.0)
    p.add_argument("--slit-width-mm", type=float, default=0.5)
    p.add_argument("--separation-mm", type=float, default=3.0)
    p.add_argument("--lambda-nm", type=float, default=550.0)
    _grid_flags(p)
    p.add_argument("--out", required=True)
    _image_flags(p)
    p.set_defaults(func=cmd_scene)

    p = sub.add_parser("propagate", help="Fresnel forward or inverse propagation")
    p.add_argument("--in", dest="input", help=".cfield input (default: the 6x2 mm rect aperture)")
    _grid_flags(p)
    p.add_argument("--method", choices=propagate.METHODS, default="transfer_function")
    p.add_argument("--z-mm", type=float, default=54000.0)
    p.add_argument("--lambda-nm", type=float)
    p.add_argument("--inverse", choices=("fraunhofer", "fresnel", "angular"))
    p.add_argument("--out", required=True)
    _image_flags(p)
    p.set_defaults(func=cmd_propagate)

    for name, func in (("cwt", cmd_cwt), ("icwt", cmd_icwt)):
        p = sub.add_parser(name, help=f"single-scale {name.upper()}")
        p.add_argument("--in", dest="input", required=True)
        _wavelet_flags(p)
        p.add_argument("--out", required=True)
        p.add_argument("--stamp", action="store_true")
        _image_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="numerical wavelet-condition report (JSON)")
    p.add_argument("--sigma-mm", type=float, default=1.0)
    p.add_argument("--lambda-nm", type=float, default=550.0)
    p.add_argument("--z-mm", type=float, default=54000.0)
    p.add_argument("--moments", type=int, default=chirplet.MAX_MOMENT_ORDER)
    p.add_argument("--carrier", choices=("on", "off"), default="on")
    p.add_argument("--carrier-rad-per-mm", type=float, default=None, help="default 2*pi/lambda")
    p.add_argument("--theta-rad", type=float, default=np.pi / 4)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--window-sigmas", type=float, default=40.0)
    p.add_argument("--out", default="-")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("holofilter", help="isolate one order of an off-axis hologram")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--object", dest="input", help=".cfield object to record (default: rect aperture)")
    src.add_argument("--hologram", help=".cfield hologram intensity")
    _grid_flags(p, 512, 0.125)
    p.add_argument("--lambda-nm", type=float)
    p.add_argument("--tilt-rad-per-mm", type=float, required=True)
    p.add_argument("--phi-rad", type=float, default=np.pi / 4)
    p.add_argument("--order", choices=("+1", "-1"), default="+1")
    p.add_argument("--sigma-mm", type=float, default=1.0)
    p.add_argument("--scale-mm", type=float, default=1.0)
    p.add_argument("--amplitude-ratio", type=float, default=1.0)
    p.add_argument("--dc-radius", type=float, required=True, help="rad/mm")
    p.add_argument("--order-radius", type=float, required=True, help="rad/mm")
    p.add_argument("--out", required=True)
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_holofilter)

    p = sub.add_parser("fig2", help="rect aperture: object, Fresnel, CWT, ICWT panels + report")
    p.add_argument("--out", required=True)
    _grid_flags(p, FIG2["n"], FIG2["pitch_mm"])
    p.add_argument("--z-mm", type=float, default=FIG2["z_mm"])
    p.add_argument("--lambda-nm", type=float, default=FIG2["lambda_nm"])
    p.add_argument("--sigma-over-half-window", type=float, default=FIG2["sigma_over_half_window"])
    p.add_argument("--carrier-rad-per-mm", type=float, default=FIG2["carrier_rad_per_mm"])
    p.add_argument("--theta-rad", type=float, default=FIG2["theta_rad"])
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_fig2)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "carrier_rad_per_mm", 0) is None and args.command == "verify":
        args.carrier_rad_per_mm = 2 * np.pi / _nm(args.lambda_nm)
    try:
        return args.func(args)
    except OpticsError as exc:
        sys.stderr.write(f"chirpwave {args.command}: {type(exc).__name__}: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"chirpwave {args.command}: I/O error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
