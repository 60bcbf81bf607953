"""Enriched-escape classification of the plane under (P, g_sigma).

A pixel escapes under plain iteration (ESCAPED_P), escapes after k
applications of the Lavaurs map (ESCAPED_LAVAURS), or stays UNDECIDED.
The UNDECIDED set is a pixel cover of the Julia-Lavaurs boundary (plus
any interior that survives all g-applications, tracked separately as an
interior proxy); shrinking cover area across resolutions is the desk-scale
shadow of the measure-zero theorem.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, fatou
from .errors import NotCertifiedError, PrecisionError

ESCAPES = "ESCAPES"
UPPER_TRAPPED = "UPPER_TRAPPED"
FAR_RECURRENT = "FAR_RECURRENT"
UNDECIDED = "UNDECIDED"

AREA_CSV_HEADER = "resolution,escaped_p,escaped_lavaurs,undecided,cover_area"
_HORN_VERDICTS = (ESCAPES, UPPER_TRAPPED, FAR_RECURRENT, UNDECIDED)


@dataclass(frozen=True)
class RasterConfig:
    region: tuple = (-2.0, -2.0, 2.0, 2.0)  # (x0, y0, x1, y1)
    resolution: int = 256
    maxiter: int = 10_000
    lavaurs_depth: int = 8
    escape_radius: float = 4.0

    def __post_init__(self):
        x0, y0, x1, y1 = self.region
        if not (x1 > x0 and y1 > y0):
            raise ValueError("region must have positive width and height")
        if self.resolution < 16:
            raise ValueError("resolution must be >= 16")
        if self.escape_radius < 4.0:
            raise ValueError("escape radius must be >= 4")
        if self.lavaurs_depth < 0:
            raise ValueError("lavaurs_depth must be >= 0")

    @property
    def pixel_area(self):
        x0, y0, x1, y1 = self.region
        return ((x1 - x0) / self.resolution) * ((y1 - y0) / self.resolution)


@dataclass(frozen=True)
class PixelLabel:
    kind: str  # "ESCAPED_P" | "ESCAPED_LAVAURS" | "UNDECIDED"
    k: int = 0  # g-applications before escape
    n: int = 0  # P-iterations of the final escape test

    def __post_init__(self):
        if self.kind == "ESCAPED_LAVAURS" and self.k == 0:
            raise ValueError("ESCAPED_LAVAURS(0, n) is ESCAPED_P(n)")


def _label_from_code(code, k, n):
    if code == _kernels.CODE_ESCAPED_P:
        return PixelLabel("ESCAPED_P", 0, n)
    if code == _kernels.CODE_ESCAPED_LAVAURS:
        return PixelLabel("ESCAPED_LAVAURS", k, n)
    return PixelLabel("UNDECIDED", k, n)


@dataclass
class ClassificationRaster:
    config: RasterConfig
    sigma: complex
    codes: np.ndarray   # int8, row 0 = max Im
    levels: np.ndarray  # int16: escape level k
    iters: np.ndarray   # int32: escape iteration count
    diags: np.ndarray   # int8: UNDECIDED sub-diagnostics

    def counts(self):
        c = self.codes
        return {
            "escaped_p": int(np.sum(c == _kernels.CODE_ESCAPED_P)),
            "escaped_lavaurs": int(np.sum(c == _kernels.CODE_ESCAPED_LAVAURS)),
            "undecided": int(np.sum(c == _kernels.CODE_UNDECIDED)),
        }

    def cover_area(self):
        return self.counts()["undecided"] * self.config.pixel_area

    def interior_proxy_area(self):
        """Area of UNDECIDED pixels that stayed certified through the full
        Lavaurs depth: a proxy for interior of the filled set (for depth 0,
        for the filled Julia set)."""
        mask = (self.codes == _kernels.CODE_UNDECIDED) & \
               (self.diags == _kernels.DIAG_DEPTH_EXHAUSTED)
        return int(np.sum(mask)) * self.config.pixel_area

    def to_image(self):
        """8-bit RGB, row-major, origin top-left = (min Re, max Im).

        UNDECIDED black; ESCAPED_P on a light gray ramp by n;
        ESCAPED_LAVAURS hue by k, shade by n.
        """
        from matplotlib.colors import hsv_to_rgb

        h, w = self.codes.shape
        img = np.zeros((h, w, 3), dtype=np.uint8)
        ramp = np.log1p(self.iters.astype(np.float64)) / math.log1p(self.config.maxiter)
        ramp = np.clip(ramp, 0.0, 1.0)

        mask_p = self.codes == _kernels.CODE_ESCAPED_P
        shade = (120 + 135 * (1.0 - ramp)).astype(np.uint8)
        for c in range(3):
            img[..., c][mask_p] = shade[mask_p]

        mask_l = self.codes == _kernels.CODE_ESCAPED_LAVAURS
        if np.any(mask_l):
            kk = self.levels.astype(np.float64)
            hue = np.mod(0.02 + 0.61 * (kk - 1.0), 1.0)
            val = 0.45 + 0.5 * (1.0 - ramp)
            hsv = np.stack([hue, np.full_like(hue, 0.85), val], axis=-1)
            rgb = (hsv_to_rgb(hsv) * 255).astype(np.uint8)
            img[mask_l] = rgb[mask_l]
        return img

    def save_png(self, path):
        import matplotlib.image

        matplotlib.image.imsave(path, self.to_image())


@dataclass
class AreaReport:
    region: tuple
    lavaurs_depth: int
    rows: list = field(default_factory=list)
    # rows: dicts with resolution, counts, cover_area, interior_proxy_area

    def add(self, raster):
        row = {"resolution": raster.config.resolution}
        row.update(raster.counts())
        row["cover_area"] = raster.cover_area()
        row["interior_proxy_area"] = raster.interior_proxy_area()
        total = row["escaped_p"] + row["escaped_lavaurs"] + row["undecided"]
        assert total == raster.config.resolution**2
        self.rows.append(row)

    def to_csv(self):
        lines = [AREA_CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r['resolution']},{r['escaped_p']},{r['escaped_lavaurs']},"
                f"{r['undecided']},{r['cover_area']:.12g}"
            )
        return "\n".join(lines) + "\n"


def _kernel_args(sys):
    atlas = sys.atlas
    series = atlas.series
    base_att = (math.pi - np.angle(atlas.germ.a)) / atlas.poly.q
    base_rep = -np.angle(atlas.germ.a) / atlas.poly.q
    return dict(
        q=atlas.poly.q,
        lam=complex(atlas.poly.lam),
        a=complex(atlas.germ.a),
        c0=float(atlas.trap_c0),
        w_eval=float(atlas.w_eval),
        tol_tail=float(atlas.tol * 1e-2),
        alpha=np.ascontiguousarray(series.alpha),
        c_log=complex(series.c_log),
        taylor=np.ascontiguousarray(series.taylor),
        petal_c=np.ascontiguousarray(atlas.petal_constants),
        base_att=float(base_att),
        base_rep=float(base_rep),
        rep_k=int(atlas.repelling_petal_index),
        offset=complex(atlas.offset),
        refine_budget=int(atlas.max_depth),
    )


def classify_point(sys, cfg, z):
    """Label one point under the enriched escape loop (kernel-backed)."""
    ka = _kernel_args(sys)
    code, k, n, _diag = _kernels._classify(
        complex(z), complex(sys.sigma), int(cfg.lavaurs_depth),
        int(cfg.maxiter), float(cfg.escape_radius), ka["q"], ka["lam"],
        ka["a"], ka["c0"], ka["w_eval"], ka["tol_tail"], ka["alpha"],
        ka["c_log"], ka["taylor"], ka["petal_c"], ka["base_att"],
        ka["base_rep"], ka["rep_k"], ka["offset"], ka["refine_budget"],
    )
    return _label_from_code(code, k, n)


def classify_point_reference(sys, cfg, z):
    """Pure-Python reference classifier (for kernel cross-validation).

    Composes the public escape_test / petal_certificate / lavaurs_map
    operations exactly as the spec loop reads.
    """
    from . import maps, parabolic

    atlas = sys.atlas
    cur = complex(z)
    for k in range(cfg.lavaurs_depth + 1):
        res = parabolic.escape_test(atlas.poly, cur, cfg.maxiter, cfg.escape_radius)
        if res.escaped:
            if k == 0:
                return PixelLabel("ESCAPED_P", 0, res.iterations)
            return PixelLabel("ESCAPED_LAVAURS", k, res.iterations)
        if not parabolic.petal_certificate(atlas.poly, atlas.germ, cur,
                                           budget=cfg.maxiter // atlas.poly.q,
                                           radius=cfg.escape_radius):
            return PixelLabel("UNDECIDED", k, cfg.maxiter)
        if k == cfg.lavaurs_depth:
            return PixelLabel("UNDECIDED", k, 0)
        try:
            cur = maps.lavaurs_map(sys, cur)
        except (NotCertifiedError, PrecisionError):
            return PixelLabel("UNDECIDED", k, 0)
    return PixelLabel("UNDECIDED", cfg.lavaurs_depth, 0)


def render(sys, cfg, out_png=None):
    """Classify every pixel center of the configured region."""
    x0, y0, x1, y1 = cfg.region
    res = cfg.resolution
    dx = (x1 - x0) / res
    dy = (y1 - y0) / res
    codes = np.zeros((res, res), dtype=np.int8)
    levels = np.zeros((res, res), dtype=np.int16)
    iters = np.zeros((res, res), dtype=np.int32)
    diags = np.zeros((res, res), dtype=np.int8)
    ka = _kernel_args(sys)
    _kernels._render(
        x0, y1, dx, dy, res, res, codes, levels, iters, diags,
        complex(sys.sigma), int(cfg.lavaurs_depth), int(cfg.maxiter),
        float(cfg.escape_radius), ka["q"], ka["lam"], ka["a"], ka["c0"],
        ka["w_eval"], ka["tol_tail"], ka["alpha"], ka["c_log"], ka["taylor"],
        ka["petal_c"], ka["base_att"], ka["base_rep"], ka["rep_k"],
        ka["offset"], ka["refine_budget"],
    )
    raster = ClassificationRaster(config=cfg, sigma=complex(sys.sigma),
                                  codes=codes, levels=levels, iters=iters,
                                  diags=diags)
    if out_png is not None:
        raster.save_png(out_png)
    return raster


def area_scan(sys, region, resolutions, maxiter=10_000, lavaurs_depth=8,
              escape_radius=4.0, keep_rasters=False):
    """One render per resolution; returns the AreaReport (cover area rows).

    Resolutions must be strictly increasing.
    """
    if any(b <= a for a, b in zip(resolutions, resolutions[1:])):
        raise ValueError("resolutions must be strictly increasing")
    report = AreaReport(region=tuple(region), lavaurs_depth=lavaurs_depth)
    rasters = []
    for res in resolutions:
        cfg = RasterConfig(region=tuple(region), resolution=int(res),
                           maxiter=maxiter, lavaurs_depth=lavaurs_depth,
                           escape_radius=escape_radius)
        raster = render(sys, cfg)
        report.add(raster)
        if keep_rasters:
            rasters.append(raster)
    if keep_rasters:
        return report, rasters
    return report


def horn_orbit_classify(sys, w, epsilon, budget, siegel_height=6.0,
                        min_stay=20, maxiter=10_000):
    """Proxy classifier for horn-map orbits on the cylinder.

    Mirrors the J/R/F/P decomposition in h_sigma coordinates: certification
    failure = ESCAPES, staying above the Siegel height = UPPER_TRAPPED,
    three visits below -epsilon = FAR_RECURRENT, else UNDECIDED.  The
    correspondence to the model classes passes through a surgery map that
    is out of numerical reach, so verdicts are proxies, not the classes.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if budget == 0:
        return UNDECIDED
    ka = _kernel_args(sys)
    verdict, _steps = _kernels._horn_orbit(
        complex(w), int(budget), float(epsilon), float(siegel_height),
        int(min_stay), complex(sys.sigma), ka["q"], ka["lam"], ka["a"],
        ka["c0"], ka["w_eval"], ka["tol_tail"], ka["alpha"], ka["c_log"],
        ka["taylor"], ka["petal_c"], ka["base_att"], ka["base_rep"],
        ka["rep_k"], ka["offset"], int(maxiter), float(sys.atlas.escape_radius),
        ka["refine_budget"],
    )
    return _HORN_VERDICTS[verdict]
