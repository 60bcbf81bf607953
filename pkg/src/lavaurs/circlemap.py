"""The Blaschke critical circle map model and its dynamical partitions.

B(z) = z^2 (z-3)/(1-3z) preserves the unit circle and restricts to a
degree-1 monotone circle map with one cubic critical point at z = 1.
Composed with a rotation, f_t = R_t o B gives the one-parameter family
whose rotation number sweeps [0,1]; tuning t is how the model acquires a
prescribed bounded-type rotation number.

The lift has the closed form

    F(x) = t + x - (1/pi) atan( sin(2 pi x) / (3 - cos(2 pi x)) )
    F'(x) = 6 (1 - cos(2 pi x)) / (5 - 3 cos(2 pi x))

(the two Moebius-factor angle terms of B coincide), which is analytic on
the strip |Im x| < log(3)/(2 pi) ~ 0.175; we stay inside |Im x| <= 0.1.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import cfrac, hypgeo
from .errors import PrecisionError, ResourceLimitError

H_STRIP = 0.1
_TWO_PI = 2.0 * math.pi


def blaschke_eval(z):
    """Value and derivative of B(z) = z^2 (z-3)/(1-3z)."""
    z = complex(z)
    if z == 1.0 / 3.0:
        raise ValueError("B has a pole at z = 1/3")
    val = z * z * (z - 3.0) / (1.0 - 3.0 * z)
    # B'/B = 2/z + 1/(z-3) + 3/(1-3z), away from zeros of B
    if z == 0.0 or z == 3.0:
        # expand directly: B' = (2z(z-3) + z^2)(1-3z) + 3 z^2 (z-3) over (1-3z)^2
        num = (3.0 * z * z - 6.0 * z) * (1.0 - 3.0 * z) + 3.0 * z * z * (z - 3.0)
        return val, num / (1.0 - 3.0 * z) ** 2
    logd = 2.0 / z + 1.0 / (z - 3.0) + 3.0 / (1.0 - 3.0 * z)
    return val, val * logd


@dataclass(frozen=True)
class CircleMapLift:
    """Lift of the tuned circle map f_t = R_t o B, critical point at 0."""

    t: float
    omega: float = None          # tuned target rotation number, if any
    quotients: tuple = None      # continued fraction of omega
    h_strip: float = H_STRIP
    critical_point: float = 0.0

    def __call__(self, x):
        if isinstance(x, complex):
            if abs(x.imag) > self.h_strip:
                raise ValueError(f"|Im x| = {abs(x.imag):.3f} exceeds the "
                                 f"strip half-height {self.h_strip}")
            theta = _TWO_PI * x
            return self.t + x - cmath.atan(cmath.sin(theta) / (3.0 - cmath.cos(theta))) / math.pi
        theta = _TWO_PI * x
        return self.t + x - math.atan2(math.sin(theta), 3.0 - math.cos(theta)) / math.pi

    def deriv(self, x):
        if isinstance(x, complex):
            theta = _TWO_PI * x
            return 6.0 * (1.0 - cmath.cos(theta)) / (5.0 - 3.0 * cmath.cos(theta))
        theta = _TWO_PI * x
        return 6.0 * (1.0 - math.cos(theta)) / (5.0 - 3.0 * math.cos(theta))

    def inverse(self, y):
        """Monotone inverse on the real line (bisection to ~1e-15)."""
        lo = y - self.t - 0.5
        hi = y - self.t + 0.5
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if self(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-16:
                break
        return 0.5 * (lo + hi)

    def orbit(self, x0, n):
        out = np.empty(n + 1)
        out[0] = x0
        x = float(x0)
        for i in range(1, n + 1):
            x = self(x)
            out[i] = x
        return out


@dataclass(frozen=True)
class RigidRotation:
    """Rigid rotation lift x + rho: the exactly solvable test path."""

    rho: float
    critical_point: float = 0.0
    quotients: tuple = None
    omega: float = None

    def __call__(self, x):
        return x + self.rho

    def deriv(self, x):
        return 1.0

    def inverse(self, y):
        return y - self.rho


@njit(cache=True)
def _lift_step(t, x):
    theta = _TWO_PI * x
    return t + x - math.atan2(math.sin(theta), 3.0 - math.cos(theta)) / math.pi


@njit(cache=True)
def _lift_inverse(t, y):
    lo = y - t - 0.5
    hi = y - t + 0.5
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _lift_step(t, mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


@njit(cache=True)
def _backward_orbit_scan(t, count):
    pts = np.empty(count)
    pts[0] = 0.0
    x = 0.0
    for k in range(1, count):
        x = _lift_inverse(t, x) % 1.0
        pts[k] = x
    return pts


@njit(cache=True)
def _rho_scan(t, budget, tol):
    """Rotation number of the Blaschke lift by rigorous rational bounds.

    For any x and n, floor(D_n)/n <= rho <= ceil(D_n)/n where
    D_n = F^n(x) - x; closest returns tighten the bracket at the
    convergent rate.  Returns (status, rho, err): status 0 converged,
    1 rational lock, 2 budget exhausted.
    """
    y = 0.0
    p = 0
    lo_p, lo_q = 0, 1      # lower bound lo_p/lo_q
    hi_p, hi_q = 1, 1      # upper bound
    for n in range(1, budget + 1):
        fy = _lift_step(t, y)
        k = int(math.floor(fy))
        y = fy - k
        p += k
        # candidate bounds p/n and (p+1)/n  (0 <= y < 1)
        if p * lo_q > lo_p * n:
            lo_p, lo_q = p, n
        if (p + 1) * hi_q < hi_p * n:
            hi_p, hi_q = p + 1, n
        gap = hi_p / hi_q - lo_p / lo_q
        if gap < tol:
            return 0, 0.5 * (lo_p / lo_q + hi_p / hi_q), 0.5 * gap
        d = y if y < 0.5 else 1.0 - y
        if d < 1e-13 and n > 3:
            pp = p + 1 if y >= 0.5 else p
            return 1, pp / n, max(d, 1e-15)
    return 2, 0.5 * (lo_p / lo_q + hi_p / hi_q), 0.5 * (hi_p / hi_q - lo_p / lo_q)


def _rho_scan_generic(lift, budget, tol):
    """Same bracketing scan for arbitrary lift objects (pure Python)."""
    y = float(lift.critical_point)
    x0 = y
    p = 0
    lo_p, lo_q = None, None
    hi_p, hi_q = None, None
    for n in range(1, budget + 1):
        fy = lift(y)
        k = math.floor(fy)
        y = fy - k
        p += k
        dshift = p + y - x0
        pl = math.floor(dshift)
        if lo_p is None or pl * lo_q > lo_p * n:
            lo_p, lo_q = pl, n
        if hi_p is None or (pl + 1) * hi_q < hi_p * n:
            hi_p, hi_q = pl + 1, n
        gap = hi_p / hi_q - lo_p / lo_q
        if gap < tol:
            return 0, 0.5 * (lo_p / lo_q + hi_p / hi_q), 0.5 * gap
        frac = dshift - pl
        d = min(frac, 1.0 - frac)
        if d < 1e-13 and n > 3:
            return 1, round(dshift) / n, max(d, 1e-15)
    return 2, 0.5 * (lo_p / lo_q + hi_p / hi_q), 0.5 * (hi_p / hi_q - lo_p / lo_q)


def rotation_number(lift, budget=2_000_000, tol=1e-10, full=False):
    """Rotation number with a rigorous error bracket.

    Uses the bound floor(D_n)/n <= rho <= ceil(D_n)/n (D_n the lifted
    displacement), tightened at closest returns; the bracket width is the
    reported error.  Raises PrecisionError if the bracket cannot reach tol
    within the budget.
    """
    if isinstance(lift, CircleMapLift):
        status, rho, err = _rho_scan(lift.t, budget, tol)
    else:
        status, rho, err = _rho_scan_generic(lift, budget, tol)
    if status == 2 and err > tol:
        raise PrecisionError(
            f"rotation number bracket only reached {err:.3e} within budget",
            achieved=err,
        )
    if full:
        return rho, err
    return rho


def tune_rotation(omega, tol=1e-8, budget=2_000_000, max_steps=200):
    """Bisection on t (rho is nondecreasing in t) until |rho - omega| < tol."""
    if not 0.0 < omega < 1.0:
        raise ValueError("omega must lie in (0,1)")
    inner = tol / 8.0
    lo, hi = 0.0, 1.0
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        status, rho, err = _rho_scan(mid, budget, inner)
        if abs(rho - omega) + err < tol:
            cf = cfrac.cf_expand(omega, 30)
            return CircleMapLift(t=mid, omega=float(omega),
                                 quotients=cf.quotients)
        if rho < omega:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-17:
            break
    raise PrecisionError(
        f"tuning to omega={omega} did not reach tol={tol}",
        achieved=abs(rho - omega),
    )


@dataclass(frozen=True)
class DynamicalPartition:
    """Level-n partition of the circle by the backward critical orbit.

    points are sorted in [0,1); orbit_index[i] = k means
    points[i] = F^{-k}(critical point) mod 1.  Intervals are half open
    [points[i], points[i+1]) with circular wrap.
    """

    level: int
    points: np.ndarray
    orbit_index: np.ndarray

    @property
    def n_points(self):
        return len(self.points)

    def lengths(self):
        return np.diff(np.append(self.points, self.points[0] + 1.0))

    def interval_of(self, x):
        xm = float(x) % 1.0
        j = int(np.searchsorted(self.points, xm, side="right")) - 1
        return j % self.n_points

    def interval_bounds(self, i):
        i = i % self.n_points
        b = float(self.points[i])
        c = float(self.points[(i + 1) % self.n_points])
        if c <= b:
            c += 1.0
        return b, c


def _backward_orbit(lift, count):
    idx = np.arange(count)
    if isinstance(lift, CircleMapLift) and lift.critical_point == 0.0:
        return _backward_orbit_scan(lift.t, count), idx
    pts = np.empty(count)
    x = float(lift.critical_point)
    pts[0] = x % 1.0
    for k in range(1, count):
        x = lift.inverse(x)
        x %= 1.0
        pts[k] = x
    return pts, idx


def _partition_from_orbit(pts, idx, count, level):
    sel = np.argsort(pts[:count], kind="stable")
    points = pts[:count][sel]
    if count > 1 and np.min(np.diff(points)) < 1e-11:
        raise PrecisionError("backward orbit points collide; rotation number "
                             "too close to rational for this level")
    return DynamicalPartition(level=level, points=points,
                              orbit_index=idx[:count][sel])


def _denominators_for(lift, n_max):
    if lift.quotients is not None:
        cf = cfrac.ContinuedFraction(value=lift.omega if lift.omega else 0.5,
                                     quotients=tuple(lift.quotients))
    else:
        rho = rotation_number(lift)
        cf = cfrac.cf_expand(rho, 30)
    return cfrac.denominators(cf, n_max + 1)


def dynamical_partition(lift, n):
    """Partition at level n: the q_n + q_{n+1} points F^{-k}(c)."""
    if n < 0:
        raise ValueError("level must be >= 0")
    qs = _denominators_for(lift, n + 1)
    count = qs[n] + qs[n + 1]
    pts, idx = _backward_orbit(lift, count)
    return _partition_from_orbit(pts, idx, count, n)


def partition_tower(lift, n_max):
    """Partitions for all levels 0..n_max sharing one backward orbit."""
    qs = _denominators_for(lift, n_max + 1)
    count = qs[n_max] + qs[n_max + 1]
    pts, idx = _backward_orbit(lift, count)
    return [_partition_from_orbit(pts, idx, qs[n] + qs[n + 1], n)
            for n in range(n_max + 1)]


@dataclass
class CommensurabilityReport:
    """Adjacent-interval length statistics of the dynamical partitions."""

    rows: list            # (level, num_points, max_adjacent_ratio, min, max)
    K: float              # max adjacent ratio over all levels
    K_scale: float        # max parent/child drop (the cor_part constant)

    CSV_HEADER = "level,num_points,max_adjacent_ratio,min_interval,max_interval"

    def to_csv(self):
        lines = [self.CSV_HEADER]
        for (lvl, npts, ratio, lmin, lmax) in self.rows:
            lines.append(f"{lvl},{npts},{ratio:.12g},{lmin:.12g},{lmax:.12g}")
        return "\n".join(lines) + "\n"


def real_bounds_report(lift, n_max):
    """Per-level max ratio of adjacent interval lengths; K = overall max.

    All ratios are stored as max(r, 1/r) >= 1.  K_scale additionally
    bounds |I_n(x)| / |I_{n+1}(x)| over all x and levels (plus the level-0
    coarseness), which is the constant scale_match reports against.
    """
    tower = partition_tower(lift, n_max)
    rows = []
    k_all = 1.0
    k_scale = 1.0 / float(np.min(tower[0].lengths()))
    for part in tower:
        lens = part.lengths()
        ratios = lens / np.roll(lens, -1)
        ratios = np.maximum(ratios, 1.0 / ratios)
        rows.append((part.level, part.n_points, float(np.max(ratios)),
                     float(np.min(lens)), float(np.max(lens))))
        k_all = max(k_all, float(np.max(ratios)))
    for fine, coarse in zip(tower[1:], tower[:-1]):
        lens = fine.lengths()
        for i in range(fine.n_points):
            parent = coarse.interval_of(fine.points[i])
            pb, pc = coarse.interval_bounds(parent)
            k_scale = max(k_scale, (pc - pb) / lens[i])
    return CommensurabilityReport(rows=rows, K=k_all, K_scale=k_scale)


@dataclass(frozen=True)
class ScaleMatch:
    level: int
    interval_index: int
    length: float
    ratio: float  # |I_n(x)| / ell


def scale_match(lift, x, ell, max_level=16, tower=None):
    """Smallest level n with |I_n(x)| <= ell, with the comparability ratio.

    The ratio lies in [1/K', K'] for the K' = K_scale of the real-bounds
    report; bounded-type rotation numbers are what keep K' finite.
    """
    if not 0.0 < ell < 1.0:
        raise ValueError("ell must lie in (0,1)")
    if tower is None:
        tower = partition_tower(lift, max_level)
    for part in tower:
        i = part.interval_of(x)
        b, c = part.interval_bounds(i)
        if c - b <= ell:
            return ScaleMatch(level=part.level, interval_index=i,
                              length=c - b, ratio=(c - b) / ell)
    raise ResourceLimitError(
        f"no level up to {tower[-1].level} reaches scale {ell}; "
        f"finest interval {c - b:.3e}"
    )


@dataclass(frozen=True)
class PartitionBall:
    """Euclidean ball below R pulled back along the partition dynamics.

    The ball lies in the lower strip, avoids the forward-invariant set C
    of the model (its F^m-image sits in the critical cone), and its size
    is commensurate to the interval: radius > r2 |I|, dist(center, I) <
    M2 |I| with level-independent constants.
    """

    level: int
    index: int
    m: int
    interval: tuple       # (b, c) on the real line
    center: complex
    radius: float
    cone_center: complex  # the cone ball upstairs, before pullback
    cone_radius: float
    cone_hyp_radius: float
    cone_diam: float      # diam_U([b',c'] union ball)
    triple_image: tuple   # (a', b', c', d')
    cone_apex: float

    @property
    def interval_length(self):
        return self.interval[1] - self.interval[0]

    @property
    def radius_ratio(self):
        return self.radius / self.interval_length

    @property
    def distance_ratio(self):
        b, c = self.interval
        x = min(max(self.center.real, b), c)
        return abs(self.center - x) / self.interval_length


def _complex_inverse_step(lift, target, guess, scale):
    """One inverse branch step: solve F(z) = target near guess (Newton)."""
    z = complex(guess)
    for _ in range(60):
        fz = lift(z)
        if abs(fz - target) < 1e-13 * max(1.0, abs(target)):
            break
        dz = (fz - target) / lift.deriv(z)
        # damp steps to the local interval scale to stay on the branch
        if abs(dz) > scale:
            dz *= scale / abs(dz)
        z = z - dz
    else:
        raise PrecisionError("inverse branch Newton did not converge")
    if z.imag >= 0.0:
        raise PrecisionError("inverse branch left the lower half plane")
    return z


def _consecutive_points(partition, i):
    """Real-line representatives a < b < c < d of the neighbor triple
    around interval i, with their backward-orbit indices."""
    npts = partition.n_points
    idxs = [(i - 1) % npts, i, (i + 1) % npts, (i + 2) % npts]
    vals = []
    bump = 0.0
    prev = None
    for ix in idxs:
        v = float(partition.points[ix]) + bump
        if prev is not None and v <= prev:
            bump += 1.0
            v += 1.0
        vals.append(v)
        prev = v
    ks = [int(partition.orbit_index[ix]) for ix in idxs]
    return vals, ks


def partition_ball(lift, partition, index):
    """The cor_comm construction for one interval of a dynamical partition.

    Maps the interval triple forward by F^m (m = least backward-orbit
    index of the four endpoints, so one endpoint lands on the critical
    point), takes the cone ball at the critical point in the slit plane
    over the image triple, and pulls it back by the univalent inverse
    branch, returning the Koebe-guaranteed euclidean ball.

    The cone ball depth is capped so the whole pullback path stays inside
    the lift's analyticity strip; on a strip violation the depth is halved
    and the construction retried.
    """
    if partition.level < 2:
        raise ValueError("the construction needs level n >= 2")
    if partition.n_points < 4:
        raise ValueError("need at least 4 partition points")
    npts = partition.n_points
    i = index % npts

    (a_, b, c, d_), ks = _consecutive_points(partition, i)
    m = min(ks)

    # forward orbits of the four endpoints (real line, order preserved)
    orbits = np.empty((m + 1, 4))
    orbits[0] = (a_, b, c, d_)
    cur = np.array([a_, b, c, d_])
    for j in range(1, m + 1):
        cur = np.array([lift(v) for v in cur])
        orbits[j] = cur
    a1, b1, c1, d1 = orbits[m]
    apex = float(orbits[m][ks.index(m)])

    strip = lift.h_strip if hasattr(lift, "h_strip") else H_STRIP
    depth_cap = 0.85 * strip
    last_err = None
    for _ in range(5):
        cone_center, cone_rho, r_hyp, diam = hypgeo.cone_ball(
            a1, d1, apex, (b1, c1), depth_cap=depth_cap)
        try:
            z = cone_center
            deriv = 1.0 + 0.0j
            for j in range(m, 0, -1):
                tb, tc = orbits[j][1], orbits[j][2]
                gb, gc = orbits[j - 1][1], orbits[j - 1][2]
                guess = gb + (z - tb) * (gc - gb) / (tc - tb)
                z = _complex_inverse_step(
                    lift, z, guess,
                    scale=2.0 * (orbits[j - 1][3] - orbits[j - 1][0]))
                deriv /= lift.deriv(z)
        except (ValueError, PrecisionError) as err:
            last_err = err
            depth_cap *= 0.5
            continue
        break
    else:
        raise PrecisionError(
            f"inverse branch continuation failed at level {partition.level}, "
            f"interval {i}: {last_err}")

    # Koebe lower bound through the univalent branch: the branch is
    # analytic on the slit plane, so univalence certainly holds on the
    # disk below the apex reaching the nearest slit tip.
    r_univ = min(abs(cone_center - a1), abs(cone_center - d1))
    branch = hypgeo.UnivalentBranch(inverse_center=z, inverse_deriv=deriv,
                                    univalence_radius=r_univ)
    center, radius = hypgeo.pullback_ball(branch, cone_center, cone_rho)

    return PartitionBall(level=partition.level, index=i, m=m,
                         interval=(b, c), center=center, radius=radius,
                         cone_center=cone_center, cone_radius=cone_rho,
                         cone_hyp_radius=r_hyp, cone_diam=diam,
                         triple_image=(float(a1), float(b1), float(c1), float(d1)),
                         cone_apex=apex)


def in_cone(point, apex, opening_deg=hypgeo.CONE_OPENING_DEG, slack=1e-9):
    """Is `point` inside the downward cone at `apex`?"""
    vec = complex(point) - complex(apex)
    if vec.imag >= 0.0:
        return False
    ang = abs(math.atan2(vec.real, -vec.imag))
    return ang <= math.radians(opening_deg / 2.0) + slack


def ball_sweep(lift, levels, tower=None):
    """partition_ball over every interval of the given levels.

    Returns (balls, r2, M2): constants with a small safety margin so that
    every returned ball satisfies radius > r2 |I| and d(center, I) < M2 |I|.
    """
    if tower is None:
        tower = partition_tower(lift, max(levels))
    balls = []
    for n in levels:
        part = tower[n]
        for i in range(part.n_points):
            balls.append(partition_ball(lift, part, i))
    r2 = 0.99 * min(b.radius_ratio for b in balls)
    m2 = 1.01 * max(b.distance_ratio for b in balls)
    return balls, r2, m2
