"""Lavaurs maps, horn maps, virtual multipliers, and the phase solver.

g_sigma = psi o T_sigma o phi is the extra return map on the interior of
the filled Julia set; h_sigma = T_sigma o phi o psi is its avatar in
repelling-cylinder coordinates.  h_sigma commutes with w -> w+1 and fixes
both cylinder ends with multipliers exp(+-2 pi i nu) where nu is the limit
translation h(w) - w at the end; shifting sigma by t shifts nu by t at
both ends, which is what makes the target-multiplier equation solvable.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import fatou
from .errors import NotCertifiedError, PrecisionError
from .fatou import LOWER, UPPER


@dataclass(frozen=True)
class LavaursSystem:
    atlas: fatou.FatouAtlas
    sigma: complex
    depth_limit: int = 8

    def with_sigma(self, sigma):
        return LavaursSystem(atlas=self.atlas, sigma=complex(sigma),
                             depth_limit=self.depth_limit)


@dataclass(frozen=True)
class VirtualMultiplier:
    end: str
    nu: complex              # lim h_sigma(w) - w at the end
    m: complex               # exp(+2 pi i nu) upper / exp(-2 pi i nu) lower
    height: float            # |Im w| at which the estimate stabilized
    z0_estimate: complex = None  # phi(critical value) diagnostic, if certified


def lavaurs_map(sys, z):
    """g_sigma(z) = psi(phi(z) + sigma); defined on certified int K only."""
    phi = fatou.phi_attracting(sys.atlas, z)
    return fatou.psi_repelling(sys.atlas, phi + sys.sigma)


def horn_map(sys, w):
    """h_sigma(w) = phi(psi(w)) + sigma; NOT_CERTIFIED outside int K'."""
    z = fatou.psi_repelling(sys.atlas, w)
    return fatou.phi_attracting(sys.atlas, z) + sys.sigma


def end_translation(sys, end, tol=1e-6, h_start=6.0, h_max=40.0, n_samples=16):
    """Measure nu = lim (h_sigma(w) - w) at a cylinder end.

    Averages h(w) - w over a horizontal period segment at height H and
    steps H = h_start, h_start+2, ... until two successive estimates agree
    to tol (the corrections decay like exp(-2 pi H), so this converges at
    the first comparison in practice).
    """
    if end not in (UPPER, LOWER):
        raise ValueError(f"end must be UPPER or LOWER, got {end!r}")
    sign = 1.0 if end == UPPER else -1.0
    prev = None
    h = h_start
    while h <= h_max:
        acc = 0.0 + 0.0j
        for j in range(n_samples):
            w = complex(j / n_samples, sign * h)
            acc += horn_map(sys, w) - w
        est = acc / n_samples
        if prev is not None and abs(est - prev) < tol:
            m = cmath.exp(2j * math.pi * est) if end == UPPER \
                else cmath.exp(-2j * math.pi * est)
            return VirtualMultiplier(end=end, nu=est, m=m, height=h,
                                     z0_estimate=_critical_value_phase(sys))
        prev = est
        h += 2.0
    raise PrecisionError(
        f"virtual translation at {end} did not stabilize below Im w = {h_max}",
        achieved=abs(est - prev) if prev is not None else None,
    )


def _critical_value_phase(sys):
    """phi(critical value) + sigma: numeric stand-in for the base point of
    the critical-value lattice of h_sigma.  None when not certified."""
    try:
        phi = fatou.phi_attracting(sys.atlas, sys.atlas.poly.critical_value)
    except NotCertifiedError:
        return None
    return phi + sys.sigma


def solve_sigma(atlas, omega, end=None, tol=1e-4, depth_limit=8):
    """The unique sigma mod 1 whose virtual multiplier at `end` is
    exp(2 pi i omega).

    nu depends on sigma as nu(sigma) = nu(0) + sigma at both ends, so the
    solve is a translation followed by one verification measurement.
    """
    if end is None:
        end = atlas.chosen_end
    omega = float(omega) % 1.0
    base = LavaursSystem(atlas=atlas, sigma=0.0 + 0.0j, depth_limit=depth_limit)
    nu0 = end_translation(base, end).nu
    if end == UPPER:
        sigma = omega - nu0
    else:
        sigma = -omega - nu0
    sigma = complex(sigma.real % 1.0, sigma.imag)

    solved = base.with_sigma(sigma)
    measured = end_translation(solved, end)
    target = cmath.exp(2j * math.pi * omega)
    err = abs(measured.m - target)
    if err > tol:
        raise PrecisionError(
            f"sigma solve verification failed at {end}: |m - target| = {err:.3e}",
            achieved=err,
        )
    return solved


def multiplier_product(sys):
    """m_plus * m_minus; the paper's inequality says |product| > 1 and the
    value is independent of sigma."""
    mp = end_translation(sys, UPPER).m
    mm = end_translation(sys, LOWER).m
    return mp * mm


def relation_residuals(sys, z_samples, w_samples, value_cap=30.0):
    """Max residuals of the four structural relations on given samples.

    Keys: 'g_shift' (g_{sigma+1} = P^q o g_sigma), 'g_commute'
    (g o P^q = P^q o g), 'semiconjugacy' (psi o h = g o psi), 'h_period'
    (h(w+1) = h(w)+1), plus kept sample counts 'n_z', 'n_w'.

    Samples whose compared values exceed value_cap are skipped: the Lavaurs
    map genuinely takes double-exponentially large values on escaping bands
    (psi is entire), where an absolute residual tolerance is meaningless
    against the rounding of P^q at that magnitude.
    """
    atlas = sys.atlas
    up = sys.with_sigma(sys.sigma + 1.0)
    out = {"g_shift": 0.0, "g_commute": 0.0, "semiconjugacy": 0.0, "h_period": 0.0}
    n_z = 0
    for z in z_samples:
        g = lavaurs_map(sys, z)
        g_up = lavaurs_map(up, z)
        g_of_fz = lavaurs_map(sys, atlas.f_step(z))
        vals = (g, g_up, g_of_fz)
        if any(not np.isfinite(v.real) or abs(v) > value_cap for v in map(complex, vals)):
            continue
        n_z += 1
        out["g_shift"] = max(out["g_shift"], abs(g_up - atlas.f_step(g)))
        out["g_commute"] = max(out["g_commute"], abs(g_of_fz - atlas.f_step(g)))
    n_w = 0
    for w in w_samples:
        h = horn_map(sys, w)
        lhs = fatou.psi_repelling(atlas, h)
        rhs = lavaurs_map(sys, fatou.psi_repelling(atlas, w))
        if abs(lhs) > value_cap or abs(rhs) > value_cap:
            continue
        n_w += 1
        out["semiconjugacy"] = max(out["semiconjugacy"], abs(lhs - rhs))
        out["h_period"] = max(out["h_period"], abs(horn_map(sys, w + 1.0) - h - 1.0))
    out["n_z"] = n_z
    out["n_w"] = n_w
    return out
