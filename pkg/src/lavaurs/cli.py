"""Command-line front end: reproducible runs with manifests.

Every subcommand writes its delimited outputs, report figures, and a
manifest.json (sorted keys) into the --out directory.  Exit codes:
0 success, 2 validation failure, 3 precision failure, 64 usage error.
"""

import argparse
import cmath
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, cfrac, circlemap, fatou, figures, hypgeo, maps, parabolic, raster
from .errors import NotCertifiedError, PrecisionError, ResourceLimitError


@dataclass
class RunManifest:
    """What it takes to reproduce a run bit-exactly on one platform."""

    subcommand: str
    parameters: dict
    tool_version: str
    seed: int
    wall_time_s: float
    extra: dict = field(default_factory=dict)

    def to_json(self):
        payload = {k: v for k, v in asdict(self).items() if k != "extra"}
        payload.update(self.extra)
        return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_pq(text):
    try:
        p, q = text.split("/")
        return int(p), int(q)
    except ValueError as exc:
        raise ValueError(f"--pq expects P/Q, got {text!r}") from exc


def _parse_omega(text):
    if text == "golden":
        return cfrac.GOLDEN_MEAN
    if text.startswith("cf:"):
        quotients = tuple(int(a) for a in text[3:].split(","))
        return float(cfrac.reconstruct(quotients))
    return float(text)


def _parse_complex(text):
    re, im = (float(v) for v in text.split(","))
    return complex(re, im)


def _parse_region(text):
    vals = tuple(float(v) for v in text.split(","))
    if len(vals) != 4:
        raise ValueError("--region expects x0,y0,x1,y1")
    return vals


def _add_common(sub):
    sub.add_argument("--pq", default="1/2", help="rotation number P/Q of the polynomial")
    sub.add_argument("--omega", default="golden",
                     help="target rotation number: golden, a decimal, or cf:a1,a2,...")
    sub.add_argument("--sigma", default=None,
                     help="phase sigma as re,im (default: solved for omega at the upper end)")
    sub.add_argument("--out", default="out", help="output directory")
    sub.add_argument("--seed", type=int, default=20260809)


def build_parser():
    parser = _Parser(prog="lavaurs", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("render", help="render a Julia-Lavaurs classification raster")
    _add_common(sub)
    sub.add_argument("--resolution", type=int, default=256)
    sub.add_argument("--maxiter", type=int, default=10_000)
    sub.add_argument("--depth", type=int, default=8)
    sub.add_argument("--region", default="-2,-2,2,2")

    sub = subs.add_parser("area-scan", help="cover-area trend over increasing resolutions")
    _add_common(sub)
    sub.add_argument("--resolutions", default="256,512,1024,2048")
    sub.add_argument("--maxiter", type=int, default=10_000)
    sub.add_argument("--depth", type=int, default=8)
    sub.add_argument("--region", default="-2,-2,2,2")

    sub = subs.add_parser("fatou-check", help="Fatou coordinate residual self-check")
    _add_common(sub)
    sub.add_argument("--samples", type=int, default=50)

    sub = subs.add_parser("sigma-solve", help="solve sigma for a target virtual multiplier")
    _add_common(sub)
    sub.add_argument("--end", choices=["UPPER", "LOWER"], default="UPPER")

    sub = subs.add_parser("horn-probe", help="iterate the horn map and classify the orbit")
    _add_common(sub)
    sub.add_argument("--w", default="0.3,6.0", help="starting point re,im")
    sub.add_argument("--epsilon", type=float, default=0.5)
    sub.add_argument("--budget", type=int, default=200)

    sub = subs.add_parser("circle-tune", help="tune the Blaschke circle map rotation number")
    _add_common(sub)
    sub.add_argument("--tol", type=float, default=1e-8)

    sub = subs.add_parser("partition-report", help="dynamical partition real-bounds report")
    _add_common(sub)
    sub.add_argument("--levels", type=int, default=10)
    sub.add_argument("--tol", type=float, default=1e-8)

    sub = subs.add_parser("scale-match", help="match a scale to a partition level")
    _add_common(sub)
    sub.add_argument("--x", type=float, required=True)
    sub.add_argument("--ell", type=float, required=True)
    sub.add_argument("--tol", type=float, default=1e-8)

    sub = subs.add_parser("ball-sweep", help="partition balls over levels 2..N")
    _add_common(sub)
    sub.add_argument("--levels", type=int, default=6)
    sub.add_argument("--tol", type=float, default=1e-8)

    sub = subs.add_parser("cone-search", help="constants for the downward-cone ball lemma")
    _add_common(sub)
    sub.add_argument("--K", type=float, default=2.0)
    sub.add_argument("--validate", type=int, default=1000)
    return parser


def _system_for(args):
    p, q = _parse_pq(args.pq)
    omega = _parse_omega(args.omega)
    poly = parabolic.ParabolicPolynomial(p, q)
    atlas = fatou.build_atlas(poly)
    if args.sigma is not None:
        sys_ = maps.LavaursSystem(atlas=atlas, sigma=_parse_complex(args.sigma))
    else:
        sys_ = maps.solve_sigma(atlas, omega)
    return sys_, omega


def _write_manifest(outdir, args, extra, t_start):
    manifest = RunManifest(
        subcommand=args.command,
        parameters={k: v for k, v in sorted(vars(args).items()) if k != "command"},
        tool_version=__version__,
        seed=args.seed,
        wall_time_s=round(time.time() - t_start, 3),
        extra=extra,
    )
    path = Path(outdir) / "manifest.json"
    path.write_text(manifest.to_json())
    return path


def _cmd_render(args, outdir, t0):
    sys_, omega = _system_for(args)
    cfg = raster.RasterConfig(region=_parse_region(args.region),
                              resolution=args.resolution,
                              maxiter=args.maxiter,
                              lavaurs_depth=args.depth)
    r = raster.render(sys_, cfg, out_png=outdir / "classification.png")
    figures.raster_figure(r, outdir / "classification_annotated.png")
    counts = r.counts()
    report = raster.AreaReport(region=cfg.region, lavaurs_depth=cfg.lavaurs_depth)
    report.add(r)
    (outdir / "area.csv").write_text(report.to_csv())
    print(f"sigma = {sys_.sigma:.12g}")
    print(f"counts: {counts}  cover_area = {r.cover_area():.6g}")
    _write_manifest(outdir, args, {"sigma": str(sys_.sigma), "counts": counts}, t0)
    return EXIT_OK


def _cmd_area_scan(args, outdir, t0):
    sys_, omega = _system_for(args)
    resolutions = [int(v) for v in args.resolutions.split(",")]
    report = raster.area_scan(sys_, _parse_region(args.region), resolutions,
                              maxiter=args.maxiter, lavaurs_depth=args.depth)
    (outdir / "area.csv").write_text(report.to_csv())
    figures.area_trend_figure(report, outdir / "area_trend.png")
    for row in report.rows:
        print(row)
    _write_manifest(outdir, args, {"sigma": str(sys_.sigma)}, t0)
    return EXIT_OK


def _cmd_fatou_check(args, outdir, t0):
    p, q = _parse_pq(args.pq)
    atlas = fatou.build_atlas(parabolic.ParabolicPolynomial(p, q))
    res = fatou.self_check(atlas, n_samples=args.samples, seed=args.seed)
    lines = ["quantity,value",
             f"abel_residual_max,{res['abel']:.6e}",
             f"psi_residual_max,{res['psi']:.6e}"]
    (outdir / "fatou_check.csv").write_text("\n".join(lines) + "\n")
    print(f"abel residual max {res['abel']:.3e}, psi residual max {res['psi']:.3e}")
    _write_manifest(outdir, args, {"residuals": res}, t0)
    if res["abel"] > 10 * atlas.tol or res["psi"] > 10 * atlas.tol:
        return EXIT_PRECISION
    return EXIT_OK


def _cmd_sigma_solve(args, outdir, t0):
    p, q = _parse_pq(args.pq)
    omega = _parse_omega(args.omega)
    atlas = fatou.build_atlas(parabolic.ParabolicPolynomial(p, q), chosen_end=args.end)
    solved = maps.solve_sigma(atlas, omega, args.end)
    vm = maps.end_translation(solved, args.end)
    target = cmath.exp(2j * cmath.pi * omega)
    print(f"sigma = {solved.sigma:.12g}")
    print(f"measured multiplier = {vm.m:.12g}  (|m - target| = {abs(vm.m - target):.3e})")
    _write_manifest(outdir, args, {"sigma": str(solved.sigma),
                                   "multiplier": str(vm.m),
                                   "nu": str(vm.nu)}, t0)
    return EXIT_OK


def _cmd_horn_probe(args, outdir, t0):
    sys_, omega = _system_for(args)
    w = _parse_complex(args.w)
    verdict = raster.horn_orbit_classify(sys_, w, args.epsilon, args.budget)
    print(f"horn orbit verdict (proxy classes): {verdict}")
    _write_manifest(outdir, args, {"sigma": str(sys_.sigma), "verdict": verdict}, t0)
    return EXIT_OK


def _cmd_circle_tune(args, outdir, t0):
    omega = _parse_omega(args.omega)
    lift = circlemap.tune_rotation(omega, tol=args.tol)
    rho, err = circlemap.rotation_number(lift, tol=args.tol / 4, full=True)
    print(f"t = {lift.t:.16f}  rho = {rho:.12f}  |rho - omega| = {abs(rho - omega):.3e}")
    _write_manifest(outdir, args, {"t": lift.t, "rho": rho,
                                   "rho_error_bound": err}, t0)
    return EXIT_OK


def _cmd_partition_report(args, outdir, t0):
    omega = _parse_omega(args.omega)
    lift = circlemap.tune_rotation(omega, tol=args.tol)
    report = circlemap.real_bounds_report(lift, args.levels)
    (outdir / "bounds.csv").write_text(report.to_csv())
    figures.partition_figure(report, outdir / "partition_bounds.png")
    print(f"K = {report.K:.6f}  K_scale = {report.K_scale:.6f}")
    _write_manifest(outdir, args, {"t": lift.t, "K": report.K,
                                   "K_scale": report.K_scale}, t0)
    return EXIT_OK


def _cmd_scale_match(args, outdir, t0):
    omega = _parse_omega(args.omega)
    lift = circlemap.tune_rotation(omega, tol=args.tol)
    match = circlemap.scale_match(lift, args.x, args.ell)
    print(f"level {match.level}: |I| = {match.length:.6g}, ratio = {match.ratio:.6g}")
    _write_manifest(outdir, args, {"t": lift.t, "level": match.level,
                                   "ratio": match.ratio}, t0)
    return EXIT_OK


def _cmd_ball_sweep(args, outdir, t0):
    omega = _parse_omega(args.omega)
    lift = circlemap.tune_rotation(omega, tol=args.tol)
    levels = list(range(2, args.levels + 1))
    balls, r2, m2 = circlemap.ball_sweep(lift, levels)
    lines = ["level,index,m,interval_length,radius,radius_ratio,distance_ratio"]
    for b in balls:
        lines.append(f"{b.level},{b.index},{b.m},{b.interval_length:.12g},"
                     f"{b.radius:.12g},{b.radius_ratio:.12g},{b.distance_ratio:.12g}")
    (outdir / "balls.csv").write_text("\n".join(lines) + "\n")
    figures.ball_figure(balls, outdir / "balls.png")
    print(f"{len(balls)} balls; r2 = {r2:.6f}, M2 = {m2:.6f}")
    _write_manifest(outdir, args, {"t": lift.t, "r2": r2, "M2": m2,
                                   "n_balls": len(balls)}, t0)
    return EXIT_OK


def _cmd_cone_search(args, outdir, t0):
    constants = hypgeo.cone_search(args.K, n_validate=args.validate, seed=args.seed)
    print(f"K = {constants.K}: r0 = {constants.r0:.6f}, M0 = {constants.M0:.6f} "
          f"(validated on {constants.n_validated} triples)")
    _write_manifest(outdir, args, {"r0": constants.r0, "M0": constants.M0,
                                   "n_validated": constants.n_validated}, t0)
    return EXIT_OK


_COMMANDS = {
    "render": _cmd_render,
    "area-scan": _cmd_area_scan,
    "fatou-check": _cmd_fatou_check,
    "sigma-solve": _cmd_sigma_solve,
    "horn-probe": _cmd_horn_probe,
    "circle-tune": _cmd_circle_tune,
    "partition-report": _cmd_partition_report,
    "scale-match": _cmd_scale_match,
    "ball-sweep": _cmd_ball_sweep,
    "cone-search": _cmd_cone_search,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    t0 = time.time()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        return _COMMANDS[args.command](args, outdir, t0)
    except (PrecisionError, NotCertifiedError, ResourceLimitError) as err:
        print(f"precision failure: {err}", file=sys.stderr)
        return EXIT_PRECISION
    except ValueError as err:
        print(f"validation failure: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
