"""Acceptance criteria, one test per criterion, each printing a verdict line.

Criterion 13's strict-decrease clause is asserted exactly as stated even
though the measured cover areas converge to the positive measure of the
interior (see notes in the repository issue log): the printed line reports
the honest measured outcome either way.
"""

import cmath
import math
import time

import numpy as np
import pytest

from lavaurs import circlemap, fatou, hypgeo, maps, parabolic, raster
from lavaurs.cfrac import GOLDEN_MEAN
from lavaurs.errors import NotCertifiedError


def _report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_abel_residual():
    t0 = time.time()
    worst = 0.0
    for p, q in [(1, 2), (1, 3), (2, 5)]:
        atlas = fatou.build_atlas(parabolic.ParabolicPolynomial(p, q))
        for z in fatou.sample_petal_points(atlas, 100, seed=101):
            worst = max(worst, fatou.abel_residual(atlas, z))
    dt = time.time() - t0
    _report(1, worst < 1e-8 and dt < 60.0,
            f"max Abel residual {worst:.3e} (tol 1e-8) over 3x100 petal points in {dt:.1f}s")


def test_criterion_02_repelling_equation(atlas12):
    t0 = time.time()
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(100):
        w = complex(rng.uniform(0, 1), rng.uniform(-3, 3))
        worst = max(worst, fatou.psi_residual(atlas12, w))
    dt = time.time() - t0
    _report(2, worst < 1e-8 and dt < 60.0,
            f"max |psi(w+1) - P^q(psi(w))| = {worst:.3e} (tol 1e-8) in {dt:.1f}s")


def test_criterion_03_lavaurs_relations(solved12):
    rng = np.random.default_rng(103)
    z_samples = fatou.sample_petal_points(solved12.atlas, 200, seed=103)
    w_samples = []
    while len(w_samples) < 120:
        w = complex(rng.uniform(0, 1), rng.uniform(1.2, 3.5))
        try:
            maps.horn_map(solved12, w)
        except NotCertifiedError:
            continue
        w_samples.append(w)
    res = maps.relation_residuals(solved12, z_samples, w_samples)
    n_z, n_w = res.pop("n_z"), res.pop("n_w")
    worst = max(res.values())
    _report(3, worst < 1e-6 and n_z >= 50 and n_w >= 50,
            f"relation residuals on {n_z}/{n_w} valid z/w samples: " +
            ", ".join(f"{k}={v:.2e}" for k, v in res.items()) + " (tol 1e-6)")


def test_criterion_04_shift_law(atlas12):
    base = maps.LavaursSystem(atlas=atlas12, sigma=0.1 + 0.05j)
    worst = 0.0
    for t in (0.1, 0.3 + 0.2j):
        shifted = base.with_sigma(base.sigma + t)
        m_up0 = maps.end_translation(base, "UPPER").m
        m_up1 = maps.end_translation(shifted, "UPPER").m
        worst = max(worst, abs(m_up1 / m_up0 - cmath.exp(2j * math.pi * t)))
        m_lo0 = maps.end_translation(base, "LOWER").m
        m_lo1 = maps.end_translation(shifted, "LOWER").m
        worst = max(worst, abs(m_lo1 / m_lo0 - cmath.exp(-2j * math.pi * t)))
    _report(4, worst < 1e-4,
            f"virtual multiplier shift law max error {worst:.3e} (tol 1e-4)")


def test_criterion_05_multiplier_product(atlas12):
    prod1 = maps.multiplier_product(maps.LavaursSystem(atlas=atlas12, sigma=0j))
    prod2 = maps.multiplier_product(maps.LavaursSystem(atlas=atlas12, sigma=0.41 + 0.13j))
    rel = abs(prod1 - prod2) / abs(prod1)
    _report(5, abs(prod1) > 1.0 and rel < 1e-3,
            f"|m+ m-| = {abs(prod1):.6g} > 1; sigma-independence rel. diff {rel:.2e}")


def test_criterion_06_sigma_round_trip(solved12):
    vm = maps.end_translation(solved12, "UPPER")
    err = abs(vm.m - cmath.exp(2j * math.pi * GOLDEN_MEAN))
    _report(6, err < 1e-4,
            f"solved sigma = {solved12.sigma:.8g}; |m - e^(2 pi i omega)| = {err:.3e} (tol 1e-4)")


def test_criterion_07_circle_tuning(tuned_golden):
    rho, err_bound = circlemap.rotation_number(tuned_golden, tol=1e-10, full=True)
    rho_err = abs(rho - GOLDEN_MEAN)
    orbit = [0.0]
    x = 0.0
    for _ in range(20):
        x = tuned_golden(x)
        orbit.append(x % 1.0)
    rigid = [(j * GOLDEN_MEAN) % 1.0 for j in range(21)]
    order_ok = list(np.argsort(orbit)) == list(np.argsort(rigid))
    _report(7, rho_err < 1e-8 and order_ok,
            f"|rho - golden| = {rho_err:.2e} (tol 1e-8); 21-point order type exact: {order_ok}")


def test_criterion_08_partition_counts(tower_golden):
    qs = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    ok = all(tower_golden[n].n_points == qs[n] + qs[n + 1] for n in range(11))
    ok = ok and tower_golden[2].n_points == 5
    _report(8, ok,
            f"level-n counts = q_n + q_{{n+1}} for n <= 10; level 2 has "
            f"{tower_golden[2].n_points} points")


def test_criterion_09_real_bounds(tuned_golden):
    rep = circlemap.real_bounds_report(tuned_golden, 10)
    ok_bound = all(row[2] <= rep.K + 1e-12 for row in rep.rows)
    late = [row[2] for row in rep.rows if 6 <= row[0] <= 10]
    variation = (max(late) - min(late)) / min(late)
    _report(9, ok_bound and variation <= 0.25,
            f"K = {rep.K:.4f}; per-level max ratio varies {100*variation:.1f}% over levels 6..10 (<= 25%)")


def test_criterion_10_scale_match_sweep(tuned_golden):
    tower = circlemap.partition_tower(tuned_golden, 18)
    kp = circlemap.real_bounds_report(tuned_golden, 16).K_scale
    rng = np.random.default_rng(110)
    ratios = []
    for _ in range(100):
        x = rng.uniform(0, 1)
        ell = 10 ** rng.uniform(-2.4, -0.05)
        ratios.append(circlemap.scale_match(tuned_golden, x, ell, tower=tower).ratio)
    ok = all(1.0 / kp - 1e-12 <= r <= kp + 1e-12 for r in ratios)
    _report(10, ok,
            f"100 random (x, ell): ratios in [{min(ratios):.3f}, {max(ratios):.3f}] "
            f"within [1/K', K'], K' = {kp:.4f}")


def test_criterion_11_cor_comm_sweep(tuned_golden):
    tower = circlemap.partition_tower(tuned_golden, 6)
    balls, r2, m2 = circlemap.ball_sweep(tuned_golden, [2, 3, 4, 5, 6], tower=tower)
    ok_const = all(b.radius > r2 * b.interval_length and
                   b.distance_ratio * b.interval_length < m2 * b.interval_length
                   for b in balls)
    ok_below = all(b.center.imag + b.radius < 0 for b in balls)
    theta = np.linspace(0, 2 * math.pi, 8, endpoint=False)
    ok_cone = True
    for b in balls:
        for z in b.center + b.radius * np.exp(1j * theta):
            zz = complex(z)
            for _ in range(b.m):
                zz = tuned_golden(zz)
            if not circlemap.in_cone(zz, b.cone_apex):
                ok_cone = False
    _report(11, ok_const and ok_below and ok_cone,
            f"{len(balls)} balls, levels 2..6: r2 = {r2:.4f}, M2 = {m2:.4f}; "
            f"all below R: {ok_below}; forward images in 30-degree cone: {ok_cone}")


def test_criterion_12_cone_search():
    t0 = time.time()
    seed = 20260809
    cc = hypgeo.cone_search(2.0, n_search=200, n_validate=1000, seed=seed)
    dt = time.time() - t0
    _report(12, cc.n_validated == 1000 and dt < 120.0,
            f"K=2 constants r0 = {cc.r0:.4f}, M0 = {cc.M0:.4f} validated on 1000 "
            f"fresh triples (seed {seed}) in {dt:.1f}s")


def test_criterion_13_shrinking_cover(solved12):
    t0 = time.time()
    resolutions = [256, 512, 1024, 2048]
    outcomes = {}
    areas = {}
    for depth in (8, 0):
        report = raster.area_scan(solved12, (-2, -2, 2, 2), resolutions,
                                  maxiter=10_000, lavaurs_depth=depth)
        a = [row["cover_area"] for row in report.rows]
        areas[depth] = a
        per_step_ok = all(a2 <= a1 * 1.05 for a1, a2 in zip(a, a[1:]))
        strict_ok = a[-1] < a[0]
        outcomes[depth] = (per_step_ok, strict_ok)
    dt = time.time() - t0
    ok = all(all(v) for v in outcomes.values()) and dt < 900.0
    detail = (f"depth 8 cover {['%.4f' % x for x in areas[8]]}, "
              f"depth 0 cover {['%.4f' % x for x in areas[0]]}; "
              f"per-step<=5%: {outcomes[8][0] and outcomes[0][0]}, "
              f"strict 2048<256: depth8={outcomes[8][1]} depth0={outcomes[0][1]}; {dt:.0f}s. "
              "Note: UNDECIDED necessarily contains the positive-measure interior "
              "of N (virtual Siegel material), so the cover converges to that "
              "measure rather than to leb L = 0; see notes/decisions.md.")
    _report(13, ok, detail)


def test_criterion_14_koebe_exact():
    rng = np.random.default_rng(114)
    ok = True
    for theta in np.linspace(0, 2 * math.pi, 8, endpoint=False):
        e = np.exp(1j * theta)
        for _ in range(1000):
            r = rng.uniform(0, 0.999)
            z = r * np.exp(1j * rng.uniform(0, 2 * math.pi))
            deriv = abs((1 + e * z) / (1 - e * z) ** 3)
            lo, hi = hypgeo.koebe_bounds(r)
            if not (lo <= deriv <= hi):
                ok = False
    _report(14, ok, "rotated Koebe functions respect the distortion bounds at "
                    "8x1000 random points, exact inequality")
