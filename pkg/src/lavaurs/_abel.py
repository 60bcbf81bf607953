"""Formal asymptotic solution of the Abel equation u(F(z)) = u(z) + 1 for a
parabolic germ F(z) = z + a z^{q+1} + ... tangent to the identity.

The solution is a Laurent-plus-log expansion

    u(z) = sum_{j=-q}^{-1} alpha_j z^j  +  c_log * log z  +  sum_{k>=1} t_k z^k

with alpha_{-q} = -1/(q a).  Coefficients are solved order by order from the
functional equation; the series is Gevrey-divergent, so evaluation is only
meaningful at small |z| (deep in a petal), where truncation at our fixed
order leaves an error far below double precision.

The same expansion is asymptotic to both the attracting and the repelling
Fatou coordinates (they differ by exponentially small terms), so one solve
serves phi and the inverse used by psi.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

_TAIL_TERMS = 3


def _binom(j, m):
    """Generalized binomial coefficient C(j, m) for integer j, m >= 0."""
    c = 1.0
    for i in range(m):
        c *= (j - i) / (i + 1)
    return c


@dataclass(frozen=True)
class AbelSeries:
    q: int
    a: complex
    alpha: np.ndarray   # alpha[i] multiplies z^{i-q}, i = 0..q-1
    c_log: complex      # multiplies log z (branch supplied at evaluation)
    taylor: np.ndarray  # taylor[k] multiplies z^{k+1}, k = 0..n_taylor-1
    residual_order: int

    def w_of(self, z):
        """Leading coordinate w = -1/(q a z^q)."""
        return -1.0 / (self.q * self.a * z**self.q)

    def petal_index(self, z):
        """Index of the attracting axis nearest to z, in 0..q-1."""
        base = (math.pi - cmath.phase(self.a)) / self.q
        step = 2.0 * math.pi / self.q
        return round((cmath.phase(z) - base) / step) % self.q

    def attracting_theta(self, k):
        """Canonical branch angle of attracting petal k.

        The log branch cut then sits diametrically opposite the petal
        axis, so u is single-valued and continuous on the whole petal.
        """
        base = (math.pi - cmath.phase(self.a)) / self.q
        return base + 2.0 * math.pi * k / self.q

    def repelling_theta(self, k):
        return (-cmath.phase(self.a) + 2.0 * math.pi * k) / self.q

    def evaluate(self, z, theta):
        """u(z) with the log branch rotated to the axis direction theta."""
        if z == 0:
            raise ValueError("Abel series is singular at z = 0")
        pole = 0.0 + 0.0j
        for i in range(self.q - 1, -1, -1):
            pole = pole * z + self.alpha[i]
        pole = pole / z**self.q
        tay = 0.0 + 0.0j
        for k in range(len(self.taylor) - 1, -1, -1):
            tay = tay * z + self.taylor[k]
        tay = tay * z
        logz = cmath.log(z * cmath.exp(-1j * theta)) + 1j * theta
        return pole + self.c_log * logz + tay

    def derivative(self, z):
        dpole = 0.0 + 0.0j
        for i in range(self.q - 1, -1, -1):
            dpole = dpole * z + (i - self.q) * self.alpha[i]
        dpole = dpole / z ** (self.q + 1)
        dtay = 0.0 + 0.0j
        for k in range(len(self.taylor) - 1, -1, -1):
            dtay = dtay * z + (k + 1) * self.taylor[k]
        return dpole + self.c_log / z + dtay

    def tail_estimate(self, z):
        """Magnitude of the last few kept Taylor terms at z: a truncation
        error proxy (the series is asymptotic, not convergent)."""
        az = abs(z)
        n = len(self.taylor)
        est = 0.0
        for k in range(max(0, n - _TAIL_TERMS), n):
            est = max(est, abs(self.taylor[k]) * az ** (k + 1))
        return est


def solve_abel_series(germ, n_taylor=None):
    """Solve the Abel coefficients through residual order q + n_taylor."""
    q = germ.q
    a = germ.a
    if n_taylor is None:
        n_taylor = 10 * q + 30
    res_order = q + n_taylor
    lg = res_order + q  # g-orders needed
    if germ.order < lg + 1:
        raise ValueError(
            f"germ order {germ.order} too small; need >= {lg + 1} "
            f"for {n_taylor} Taylor terms"
        )

    g = np.zeros(lg + 1, dtype=complex)
    tail = germ.taylor_tail()
    g[: min(len(tail), lg + 1)] = tail[: lg + 1]
    noise = np.max(np.abs(g[:q])) if q > 0 else 0.0
    if noise > 1e-10:
        raise ValueError(f"germ is not tangent to identity to order q (noise {noise:.2e})")
    g[:q] = 0.0

    # Powers of g: G[m] = g^m, m = 1..mmax (orders above lg are irrelevant).
    mmax = lg // q + 1
    powers = [None, g]
    for m in range(2, mmax + 1):
        powers.append(np.convolve(powers[-1], g)[: lg + 1])

    def basis(j):
        """Taylor coefficients (orders 0..res_order) of z^j ((1+g)^j - 1)."""
        out = np.zeros(res_order + 1, dtype=complex)
        for m in range(1, mmax + 1):
            c = _binom(j, m)
            if c == 0.0:
                continue
            gm = powers[m]
            for n in range(max(0, j + m * q), res_order + 1):
                i = n - j
                if 0 <= i <= lg:
                    out[n] += c * gm[i]
        return out

    # log(1 + g) as a Taylor series.
    blog = np.zeros(res_order + 1, dtype=complex)
    for m in range(1, mmax + 1):
        blog += ((-1) ** (m + 1) / m) * powers[m][: res_order + 1]

    alpha = np.zeros(q, dtype=complex)
    alpha[0] = -1.0 / (q * a)
    resid = alpha[0] * basis(-q)

    for m in range(1, q):
        b = basis(m - q)
        val = -resid[m] / b[m]
        alpha[m] = val
        resid += val * b

    c_log = -resid[q] / blog[q]
    resid += c_log * blog

    taylor = np.zeros(n_taylor, dtype=complex)
    for m in range(q + 1, res_order + 1):
        k = m - q
        b = basis(k)
        val = -resid[m] / b[m]
        taylor[k - 1] = val
        resid += val * b

    if abs(resid[0] - 1.0) > 1e-9:
        raise ValueError(f"Abel solve failed: constant term {resid[0]!r} != 1")
    return AbelSeries(q=q, a=a, alpha=alpha, c_log=c_log,
                      taylor=taylor, residual_order=res_order)


def log_correction(germ):
    """The spec-level coefficient b in u ~ -1/(q a z^q) + b log(z^q).

    Cached on the germ object; b = c_log / q.  Needs germ.order >= 2q + 1.
    """
    cached = getattr(germ, "_log_correction", None)
    if cached is not None:
        return cached
    series = solve_abel_series(germ, n_taylor=1)
    b = series.c_log / germ.q
    object.__setattr__(germ, "_log_correction", b)
    return b
