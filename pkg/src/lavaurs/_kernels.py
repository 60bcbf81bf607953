"""Compiled hot loops for raster classification.

These mirror the scalar logic of fatou/maps (trap certification, Abel
series evaluation, repelling inversion) in njit form; the pure-Python
implementations stay the reference, and the test suite cross-validates
the two paths point by point.
"""

import cmath
import math

import numpy as np
from numba import njit

CONFIRM_STEPS = 8

# classification codes
CODE_ESCAPED_P = 0
CODE_ESCAPED_LAVAURS = 1
CODE_UNDECIDED = 2

# diagnostics for UNDECIDED
DIAG_NONE = 0
DIAG_BOUNDED_UNCERTIFIED = 1
DIAG_DEPTH_EXHAUSTED = 2
DIAG_NUMERICAL = 3


@njit(cache=True)
def _u_eval(z, theta, q, alpha, c_log, taylor):
    pole = 0.0 + 0.0j
    for i in range(q - 1, -1, -1):
        pole = pole * z + alpha[i]
    pole = pole / z**q
    tay = 0.0 + 0.0j
    for k in range(len(taylor) - 1, -1, -1):
        tay = tay * z + taylor[k]
    tay = tay * z
    logz = cmath.log(z * cmath.exp(-1j * theta)) + 1j * theta
    return pole + c_log * logz + tay


@njit(cache=True)
def _u_deriv(z, q, alpha, c_log, taylor):
    dpole = 0.0 + 0.0j
    for i in range(q - 1, -1, -1):
        dpole = dpole * z + (i - q) * alpha[i]
    dpole = dpole / z ** (q + 1)
    dtay = 0.0 + 0.0j
    for k in range(len(taylor) - 1, -1, -1):
        dtay = dtay * z + (k + 1) * taylor[k]
    return dpole + c_log / z + dtay


@njit(cache=True)
def _tail_estimate(z, taylor):
    az = abs(z)
    n = len(taylor)
    est = 0.0
    lo = n - 3
    if lo < 0:
        lo = 0
    for k in range(lo, n):
        t = abs(taylor[k]) * az ** (k + 1)
        if t > est:
            est = t
    return est


@njit(cache=True)
def _petal_index(z, q, base_att):
    step = 2.0 * math.pi / q
    k = int(math.floor((cmath.phase(z) - base_att) / step + 0.5))
    k = k % q
    return k


@njit(cache=True)
def _phi_refine(zc, m0, q, lam, a, w_eval, tol_tail, alpha, c_log, taylor,
                petal_c, base_att, budget):
    """From a trapped point zc (reached after m0 F-steps), iterate deeper
    until the series is trustworthy and return u - m (un-offset phi)."""
    cur = zc
    m = m0
    extra = 0
    qa = q * a
    while extra <= budget:
        if cur == 0:
            return False, 0.0 + 0.0j
        w = -1.0 / (qa * cur**q)
        if w.real >= w_eval and _tail_estimate(cur, taylor) < tol_tail:
            k = _petal_index(cur, q, base_att)
            theta = base_att + 2.0 * math.pi * k / q
            u = _u_eval(cur, theta, q, alpha, c_log, taylor) - petal_c[k]
            return True, u - m
        for _ in range(q):
            cur = lam * cur + cur * cur
        m += 1
        extra += 1
    return False, 0.0 + 0.0j


@njit(cache=True)
def _psi_eval(w, q, lam, a, c1_depth, alpha, c_log, taylor, base_rep, rep_k):
    """Repelling parametrization psi(w) by shift + series inversion."""
    depth = abs(w.imag)
    if c1_depth > depth:
        depth = c1_depth
    n = int(math.ceil(w.real + depth))
    if n < 0:
        n = 0
    wt = w - n
    s = -wt
    qa_abs = q * abs(a)
    mod = (1.0 / (qa_abs * abs(s))) ** (1.0 / q)
    ang = (-cmath.phase(a) - cmath.phase(s) + 2.0 * math.pi * rep_k) / q
    z = mod * cmath.exp(1j * ang)
    theta = base_rep + 2.0 * math.pi * rep_k / q
    tol = 1e-12 * (1.0 + abs(wt))
    ok = False
    for _ in range(60):
        resid = _u_eval(z, theta, q, alpha, c_log, taylor) - wt
        if abs(resid) < tol:
            ok = True
            break
        z = z - resid / _u_deriv(z, q, alpha, c_log, taylor)
    if not ok:
        return False, 0.0 + 0.0j
    for _ in range(n * q):
        if abs(z) > 1e100:
            break
        z = lam * z + z * z
    return True, z


@njit(cache=True)
def _classify(z0, sigma, depth, maxiter, radius, q, lam, a, c0, w_eval,
              tol_tail, alpha, c_log, taylor, petal_c, base_att, base_rep,
              rep_k, offset, refine_budget):
    """Enriched escape loop: P-escape / trap-certify / apply g_sigma.

    Returns (code, level, iterations, diag).
    """
    z = z0
    for k in range(depth + 1):
        cur = z
        n = 0
        certified = False
        streak = 0
        w_prev = 0.0
        have_prev = False
        qa = q * a
        while n <= maxiter:
            if abs(cur) > radius:
                if k == 0:
                    return CODE_ESCAPED_P, 0, n, DIAG_NONE
                return CODE_ESCAPED_LAVAURS, k, n, DIAG_NONE
            if n % q == 0 and cur != 0:
                w = -1.0 / (qa * cur**q)
                if w.real > c0:
                    if have_prev and w.real >= w_prev + 0.5:
                        streak += 1
                        if streak >= CONFIRM_STEPS:
                            certified = True
                            break
                    else:
                        streak = 0
                    w_prev = w.real
                    have_prev = True
                else:
                    streak = 0
                    have_prev = False
            cur = lam * cur + cur * cur
            n += 1
        if not certified:
            return CODE_UNDECIDED, k, maxiter, DIAG_BOUNDED_UNCERTIFIED
        if k == depth:
            return CODE_UNDECIDED, k, 0, DIAG_DEPTH_EXHAUSTED
        ok, u = _phi_refine(cur, n // q, q, lam, a, w_eval, tol_tail, alpha,
                            c_log, taylor, petal_c, base_att, refine_budget)
        if not ok:
            return CODE_UNDECIDED, k, 0, DIAG_NUMERICAL
        phi = u - offset
        okp, znew = _psi_eval(phi + sigma, q, lam, a, w_eval, alpha, c_log,
                              taylor, base_rep, rep_k)
        if not okp:
            return CODE_UNDECIDED, k, 0, DIAG_NUMERICAL
        z = znew
    return CODE_UNDECIDED, depth, 0, DIAG_DEPTH_EXHAUSTED


@njit(cache=True)
def _render(x0, y1, dx, dy, nx, ny, codes, levels, iters, diags, sigma,
            depth, maxiter, radius, q, lam, a, c0, w_eval, tol_tail, alpha,
            c_log, taylor, petal_c, base_att, base_rep, rep_k, offset,
            refine_budget):
    """Row-major classification over pixel centers; origin top-left is
    (min Re, max Im)."""
    for i in range(ny):
        y = y1 - (i + 0.5) * dy
        for j in range(nx):
            x = x0 + (j + 0.5) * dx
            code, k, n, diag = _classify(
                complex(x, y), sigma, depth, maxiter, radius, q, lam, a, c0,
                w_eval, tol_tail, alpha, c_log, taylor, petal_c, base_att,
                base_rep, rep_k, offset, refine_budget,
            )
            codes[i, j] = code
            levels[i, j] = k
            iters[i, j] = n
            diags[i, j] = diag


@njit(cache=True)
def _horn_orbit(w0, budget, epsilon, siegel_height, min_stay, sigma, q, lam,
                a, c0, w_eval, tol_tail, alpha, c_log, taylor, petal_c,
                base_att, base_rep, rep_k, offset, maxiter, radius,
                refine_budget):
    """Iterate the horn map: returns (verdict, steps).

    verdict: 0 escapes, 1 upper-trapped, 2 far-recurrent, 3 undecided.
    """
    w = w0
    far_visits = 0
    above_since = -1
    for step in range(budget):
        okp, z = _psi_eval(w, q, lam, a, w_eval, alpha, c_log, taylor,
                           base_rep, rep_k)
        if not okp:
            return 3, step
        # certify z and compute phi
        cur = z
        n = 0
        certified = False
        streak = 0
        w_prev = 0.0
        have_prev = False
        qa = q * a
        while n <= maxiter:
            if abs(cur) > radius:
                return 0, step
            if n % q == 0 and cur != 0:
                ww = -1.0 / (qa * cur**q)
                if ww.real > c0:
                    if have_prev and ww.real >= w_prev + 0.5:
                        streak += 1
                        if streak >= CONFIRM_STEPS:
                            certified = True
                            break
                    else:
                        streak = 0
                    w_prev = ww.real
                    have_prev = True
                else:
                    streak = 0
                    have_prev = False
            cur = lam * cur + cur * cur
            n += 1
        if not certified:
            return 3, step
        ok, u = _phi_refine(cur, n // q, q, lam, a, w_eval, tol_tail, alpha,
                            c_log, taylor, petal_c, base_att, refine_budget)
        if not ok:
            return 3, step
        w = u - offset + sigma
        if w.imag <= -epsilon:
            far_visits += 1
            above_since = -1
            if far_visits >= 3:
                return 2, step
        elif w.imag > siegel_height:
            if above_since < 0:
                above_since = step
            if step - above_since + 1 >= min_stay:
                return 1, step
        else:
            above_since = -1
    return 3, budget
