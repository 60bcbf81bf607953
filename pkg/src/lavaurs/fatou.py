"""Numerical Fatou coordinates for the parabolic germ of P^q.

phi (attracting) solves phi(P^q z) = phi(z) + 1 on the interior of the
filled Julia set; psi (repelling parametrization) solves
psi(w+1) = P^q(psi(w)) and extends to an entire function of w.

Both are computed from one high-order asymptotic Abel series: phi by
iterating the orbit into the trap half-plane {Re w > w_eval} of
w = -1/(q a z^q) and evaluating the series there; psi by translating w
deep into the repelling sector, inverting the series with Newton steps,
and pushing forward by P^q.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import _abel, parabolic
from .errors import NotCertifiedError, PrecisionError

UPPER = "UPPER"
LOWER = "LOWER"


@dataclass(frozen=True)
class FatouAtlas:
    """Normalized attracting coordinate and repelling parametrization.

    The normalization anchor is the first trap entry of the critical
    orbit; phi(anchor) = 0.  All downstream quantities (sigma solving,
    multipliers) are invariant under this normalization freedom.
    """

    poly: parabolic.ParabolicPolynomial
    germ: parabolic.ParabolicGerm
    series: _abel.AbelSeries
    chosen_end: str
    attracting_petal_index: int
    repelling_petal_index: int
    normalization_anchor: complex
    offset: complex
    tol: float
    max_depth: int
    trap_c0: float
    w_eval: float
    # Additive constants gluing the q petal coordinates into one phi with
    # phi(P z) = phi(z) + 1/q.  This relative normalization across petals
    # is what gives the horn map its true end translations: with per-petal
    # ad-hoc constants the multiplier product would collapse to 1.
    petal_constants: np.ndarray = None
    escape_radius: float = parabolic.DEFAULT_ESCAPE_RADIUS

    def f_step(self, z):
        """One application of F = P^q."""
        lam = self.poly.lam
        for _ in range(self.poly.q):
            z = lam * z + z * z
        return z

    def w_of(self, z):
        return self.series.w_of(z)


def build_atlas(poly, chosen_end=UPPER, repelling_petal_index=0, tol=1e-9,
                max_depth=100_000, n_taylor=None, escape_radius=None):
    """Construct the Fatou atlas for a parabolic polynomial."""
    if chosen_end not in (UPPER, LOWER):
        raise ValueError(f"chosen_end must be UPPER or LOWER, got {chosen_end!r}")
    if not 0 <= repelling_petal_index < poly.q:
        raise ValueError("repelling_petal_index out of range")
    if n_taylor is None:
        n_taylor = 10 * poly.q + 30
    order = poly.q + n_taylor + poly.q + 2
    germ = parabolic.germ_coefficients(poly, order=order)
    series = _abel.solve_abel_series(germ, n_taylor=n_taylor)
    c0 = 10.0 * (1.0 + abs(series.c_log / poly.q))
    w_eval = max(c0, 12.0)
    radius = parabolic.DEFAULT_ESCAPE_RADIUS if escape_radius is None else escape_radius

    # Anchor: first trap entry of the critical orbit under F = P^q.
    z = poly.critical_point
    anchor = None
    lam = poly.lam
    for _ in range(max_depth):
        zq = z**poly.q
        if zq != 0:
            w = -1.0 / (poly.q * germ.a * zq)
            if w.real > c0:
                anchor = z
                break
        for _ in range(poly.q):
            z = lam * z + z * z
        if abs(z) > radius:
            raise PrecisionError("critical orbit escaped; map is not parabolic?")
    if anchor is None:
        raise PrecisionError("critical orbit never entered the attracting trap")

    att_index = series.petal_index(anchor)
    constants = _petal_constants(poly, germ, series, w_eval)

    atlas = FatouAtlas(
        poly=poly, germ=germ, series=series, chosen_end=chosen_end,
        attracting_petal_index=att_index,
        repelling_petal_index=repelling_petal_index,
        normalization_anchor=anchor, offset=0.0 + 0.0j,
        tol=tol, max_depth=max_depth, trap_c0=c0, w_eval=w_eval,
        petal_constants=constants, escape_radius=radius,
    )
    offset = _phi_raw(atlas, anchor)
    object.__setattr__(atlas, "offset", offset)
    return atlas


def _petal_constants(poly, germ, series, w_eval):
    """Constants C_k gluing the petal coordinates: phi(P z) = phi(z) + 1/q.

    P maps attracting petal j to petal j+p (mod q); measuring the series
    jump delta_j = u_{j+p}(P z) - u_j(z) at one deep point per petal and
    chaining C_{j+p} = C_j + delta_j - 1/q pins all relative constants.
    The chain must close up: sum_j delta_j = 1.
    """
    q = poly.q
    constants = np.zeros(q, dtype=complex)
    if q == 1:
        return constants
    w_deep = max(50.0 * w_eval, 1000.0)
    r = (1.0 / (q * abs(germ.a) * w_deep)) ** (1.0 / q)
    delta = np.zeros(q, dtype=complex)
    for j in range(q):
        z = r * germ.attracting_direction(j)
        nj = (j + poly.p) % q
        delta[j] = (series.evaluate(poly(z), series.attracting_theta(nj))
                    - series.evaluate(z, series.attracting_theta(j)))
    closure = abs(np.sum(delta) - 1.0)
    if closure > 1e-7:
        raise PrecisionError(
            f"petal constant chain does not close: |sum delta - 1| = {closure:.2e}",
            achieved=closure,
        )
    j = 0
    for _ in range(q - 1):
        nj = (j + poly.p) % q
        constants[nj] = constants[j] + delta[j] - 1.0 / q
        j = nj
    return constants


def approx_fatou(germ, z, n_taylor=None):
    """Asymptotic Abel-series value u(z) near the parabolic point.

    u(P^q(z)) - u(z) -> 1 as z -> 0 in a petal; the leading term is
    -1/(q a z^q) and the log branch follows the nearest attracting axis.
    """
    if z == 0:
        raise ValueError("u is singular at z = 0")
    series = getattr(germ, "_abel_series", None)
    if series is None or (n_taylor is not None and len(series.taylor) != n_taylor):
        nt = n_taylor
        if nt is None:
            nt = max(1, min(10 * germ.q + 30, germ.order - 2 * germ.q - 2))
        series = _abel.solve_abel_series(germ, n_taylor=nt)
        object.__setattr__(germ, "_abel_series", series)
    return series.evaluate(z, series.attracting_theta(series.petal_index(z)))


def _phi_raw(atlas, z):
    """lim_n u(F^n z) - n, without the anchor offset."""
    if z == 0:
        raise NotCertifiedError("the parabolic point itself is never certified")
    series = atlas.series
    tol_tail = atlas.tol * 1e-2
    n = 0
    cur = complex(z)
    backoff = 1
    next_try = 0
    while n <= atlas.max_depth:
        if abs(cur) > atlas.escape_radius:
            raise NotCertifiedError(f"orbit escaped after {n} steps of P^q")
        if n >= next_try and cur != 0:
            w = -1.0 / (atlas.poly.q * atlas.germ.a * cur**atlas.poly.q)
            if w.real >= atlas.w_eval and series.tail_estimate(cur) < tol_tail:
                k = series.petal_index(cur)
                theta = series.attracting_theta(k)
                u1 = series.evaluate(cur, theta)
                u2 = series.evaluate(atlas.f_step(cur), theta)
                # Past ~1e13 the Abel residual saturates at the rounding
                # floor of u itself, so the acceptance scale follows |u|.
                if abs(u2 - u1 - 1.0) < max(10.0 * atlas.tol, 5e-14 * abs(u1)):
                    return u1 - atlas.petal_constants[k] - n
                next_try = n + backoff
                backoff = min(2 * backoff, 64)
        cur = atlas.f_step(cur)
        n += 1
    raise NotCertifiedError(
        f"no certified trap entry within max_depth={atlas.max_depth}"
    )


def phi_attracting(atlas, z):
    """Extended attracting Fatou coordinate, phi(anchor) = 0."""
    return _phi_raw(atlas, z) - atlas.offset


def psi_repelling(atlas, w):
    """Extended repelling parametrization psi: C -> C.

    psi(w+1) = P^q(psi(w)); psi approaches the parabolic point as
    |Im w| -> infinity and parametrizes the repelling petal for
    Re w -> -infinity.
    """
    w = complex(w)
    series = atlas.series
    q = atlas.poly.q
    depth = max(atlas.w_eval, abs(w.imag))
    n = max(0, math.ceil(w.real + depth))
    wt = w - n

    # Initial guess on the chosen repelling axis: z0^q = -1/(q a wt),
    # with the angle tracked unwrapped so the petal label is exact.
    s = -wt  # Re s >= depth > 0
    mod = (1.0 / (q * abs(atlas.germ.a) * abs(s))) ** (1.0 / q)
    ang = (-cmath.phase(atlas.germ.a) - cmath.phase(s)
           + 2.0 * math.pi * atlas.repelling_petal_index) / q
    z0 = mod * cmath.exp(1j * ang)

    theta = series.repelling_theta(atlas.repelling_petal_index)
    z_cur = z0
    target_tol = 1e-12 * max(1.0, abs(wt))
    resid = None
    for _ in range(60):
        resid = series.evaluate(z_cur, theta) - wt
        if abs(resid) < target_tol:
            break
        z_cur = z_cur - resid / series.derivative(z_cur)
    else:
        raise PrecisionError(
            "series inversion for psi did not converge", achieved=abs(resid)
        )

    z_cur = complex(z_cur)
    lam = atlas.poly.lam
    for _ in range(n * q):
        # Once the forward orbit is this large it is escaping faster than
        # exponentially; stop before float overflow turns it into nan.
        if abs(z_cur) > 1e100:
            break
        z_cur = lam * z_cur + z_cur * z_cur
    return z_cur


def abel_residual(atlas, z):
    """|phi(P^q z) - phi(z) - 1| at a certified point (diagnostic)."""
    return abs(phi_attracting(atlas, atlas.f_step(z)) - phi_attracting(atlas, z) - 1.0)


def psi_residual(atlas, w):
    """|psi(w+1) - P^q(psi(w))| (diagnostic)."""
    return abs(psi_repelling(atlas, w + 1.0) - atlas.f_step(psi_repelling(atlas, w)))


def sample_petal_points(atlas, n_samples, seed=0, petal=None):
    """Certified petal points at trap-scale radii (for residual sweeps)."""
    rng = np.random.default_rng(seed)
    q = atlas.poly.q
    k = atlas.attracting_petal_index if petal is None else petal
    dir_att = atlas.germ.attracting_direction(k)
    qa = q * abs(atlas.germ.a)
    out = []
    while len(out) < n_samples:
        w_target = atlas.w_eval * 10 ** rng.uniform(0.3, 2.0)
        r = (1.0 / (qa * w_target)) ** (1.0 / q)
        ang = rng.uniform(-0.2, 0.2) * math.pi / q
        out.append(r * dir_att * cmath.exp(1j * ang))
    return out


def self_check(atlas, n_samples=50, seed=0):
    """Sample the atlas invariants; returns the two max residuals."""
    rng = np.random.default_rng(seed)
    max_abel = 0.0
    for z in sample_petal_points(atlas, n_samples, seed=seed):
        max_abel = max(max_abel, abel_residual(atlas, z))
    max_psi = 0.0
    count = 0
    while count < n_samples:
        w = complex(rng.uniform(0.0, 1.0), rng.uniform(-3.0, 3.0))
        if abs(psi_repelling(atlas, w)) > 1e6:
            # wildly escaping psi values are outside any meaningful
            # residual comparison; skip (only occurs for q >= 4)
            continue
        max_psi = max(max_psi, psi_residual(atlas, w))
        count += 1
    return {"abel": max_abel, "psi": max_psi}
