import math

import numpy as np
import pytest

from lavaurs import circlemap as cm
from lavaurs.cfrac import GOLDEN_MEAN, cf_expand
from lavaurs.errors import PrecisionError, ResourceLimitError

PHI2 = ((1 + math.sqrt(5)) / 2) ** 2


def test_blaschke_values():
    v, d = cm.blaschke_eval(1.0)
    assert abs(v - 1.0) < 1e-14  # 1 * (-2) / (-2)
    assert abs(d) < 1e-14        # critical point
    v0, _ = cm.blaschke_eval(0j)
    assert v0 == 0
    with pytest.raises(ValueError):
        cm.blaschke_eval(1 / 3)


def test_blaschke_log_derivative_double_zero():
    # 2/1 + 1/(1-3) + 3/(1-3) = 0 and -2 - 1/4 + 9/4 = 0
    assert abs(2.0 + 1.0 / (1 - 3) + 3.0 / (1 - 3)) < 1e-15
    assert abs(-2.0 - 0.25 + 9.0 / 4.0) < 1e-15
    # so B' has a double zero at 1: second derivative also vanishes
    h = 1e-5
    d2 = (cm.blaschke_eval(1 + h)[1] - cm.blaschke_eval(1 - h)[1]) / (2 * h)
    assert abs(d2) < 1e-3


def test_unit_circle_preserved():
    rng = np.random.default_rng(0)
    for theta in rng.uniform(0, 2 * math.pi, 50):
        v, _ = cm.blaschke_eval(np.exp(1j * theta))
        assert abs(abs(v) - 1.0) < 1e-12


def test_lift_periodicity():
    lift = cm.CircleMapLift(t=0.37)
    rng = np.random.default_rng(1)
    for x in rng.uniform(-3, 3, 100):
        assert abs(lift(x + 1.0) - lift(x) - 1.0) < 1e-12


def test_lift_monotone_and_critical():
    lift = cm.CircleMapLift(t=0.2)
    xs = np.linspace(0, 1, 400, endpoint=False)
    vals = np.array([lift(x) for x in xs])
    assert np.all(np.diff(vals) > 0) or np.all(np.diff(vals) >= 0)
    assert lift.deriv(0.0) == 0.0
    h = 1e-4
    # local degree 3: F' ~ 6 pi^2 (2x)^2/... vanishes to second order
    assert lift.deriv(h) < 1e-5
    # F' ~ 6 pi^2 x^2 near the critical point, so F'''(0) = 12 pi^2 != 0
    third = (lift(2 * h) - 2 * lift(h) + 2 * lift(-h) - lift(-2 * h)) / (2 * h**3)
    assert abs(third - 12 * math.pi**2) < 1.0


def test_lift_strip_guard():
    lift = cm.CircleMapLift(t=0.2)
    with pytest.raises(ValueError):
        lift(0.3 + 0.2j)
    val = lift(0.3 + 0.05j)  # inside the strip: fine
    assert isinstance(val, complex)


def test_lift_inverse_roundtrip():
    lift = cm.CircleMapLift(t=0.61)
    rng = np.random.default_rng(2)
    for x in rng.uniform(-1, 2, 30):
        assert abs(lift.inverse(lift(x)) - x) < 1e-12


def test_rotation_number_rigid():
    rho = cm.rotation_number(cm.RigidRotation(0.3), budget=10_000, tol=1e-12)
    assert abs(rho - 0.3) < 1e-12


def test_rotation_number_monotone_in_t():
    # near plateau edges the bracket narrows only polynomially, so the
    # decision accuracy for arbitrary t is millionths, not billionths
    r1 = cm.rotation_number(cm.CircleMapLift(t=0.2), tol=1e-6)
    r2 = cm.rotation_number(cm.CircleMapLift(t=0.4), tol=1e-6)
    assert r1 <= r2 + 1e-12


def test_tuned_golden(tuned_golden):
    rho, err = cm.rotation_number(tuned_golden, tol=1e-10, full=True)
    assert abs(rho - GOLDEN_MEAN) < 1e-8
    assert err < 1e-9


def test_tune_tighter_tolerance():
    # 1e-9 needs a t-window of ~3e-14, comfortably inside double spacing
    # (1e-10 would need ~1e-15, at the edge of representable t)
    lift = cm.tune_rotation(GOLDEN_MEAN, tol=1e-9)
    rho, err = cm.rotation_number(lift, tol=1e-11, full=True)
    assert abs(rho - GOLDEN_MEAN) < 1e-9


def test_tune_validation():
    with pytest.raises(ValueError):
        cm.tune_rotation(1.5)


def test_order_type_matches_rotation(tuned_golden):
    # combinatorial rotation number: forward critical orbit order type
    for n_level in range(2, 9):
        qs = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
        count = qs[n_level] + qs[n_level + 1]
        orbit = [0.0]
        x = 0.0
        for _ in range(count - 1):
            x = tuned_golden(x)
            orbit.append(x % 1.0)
        rigid = [(j * GOLDEN_MEAN) % 1.0 for j in range(count)]
        assert list(np.argsort(orbit)) == list(np.argsort(rigid))


def test_partition_counts(tower_golden):
    fib_sums = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]
    assert [p.n_points for p in tower_golden] == fib_sums
    assert tower_golden[2].n_points == 5


def test_partition_nesting_and_tiling(tower_golden):
    for fine, coarse in zip(tower_golden[1:], tower_golden[:-1]):
        fine_set = set(np.round(fine.points, 10))
        assert set(np.round(coarse.points, 10)) <= fine_set
    for part in tower_golden:
        assert abs(part.lengths().sum() - 1.0) < 1e-12
        assert np.all(part.lengths() > 0)


def test_partition_max_length_decreases(tower_golden):
    maxima = [p.lengths().max() for p in tower_golden]
    assert all(m1 >= m2 for m1, m2 in zip(maxima, maxima[1:]))


def test_interval_lookup(tower_golden):
    part = tower_golden[4]
    rng = np.random.default_rng(3)
    for x in rng.uniform(0, 1, 50):
        i = part.interval_of(x)
        b, c = part.interval_bounds(i)
        assert b <= (x if x >= b else x + 1.0) < c


def test_real_bounds_report(tuned_golden, tower_golden):
    rep = cm.real_bounds_report(tuned_golden, 10)
    assert rep.K >= 1.0
    for row in rep.rows:
        assert 1.0 <= row[2] <= rep.K
    csv = rep.to_csv()
    assert csv.splitlines()[0] == "level,num_points,max_adjacent_ratio,min_interval,max_interval"
    assert len(csv.splitlines()) == 12


def test_real_bounds_rigid_golden():
    rigid = cm.RigidRotation(GOLDEN_MEAN, omega=GOLDEN_MEAN,
                             quotients=cf_expand(GOLDEN_MEAN, 25).quotients)
    rep = cm.real_bounds_report(rigid, 8)
    # three-distance structure: adjacent gap ratios are golden powers,
    # bounded by golden^2 ~ 2.618 (measured max is exactly golden)
    assert rep.K <= PHI2 + 1e-9
    phi = (1 + math.sqrt(5)) / 2
    assert abs(rep.K - phi) < 1e-6


def test_scale_match_basic(tuned_golden, tower_golden):
    sm = cm.scale_match(tuned_golden, 0.37, 0.9, tower=tower_golden)
    assert sm.level in (0, 1)
    # exact-scale hit: ell = |I_3(x)| returns level <= 3
    part = tower_golden[3]
    i = part.interval_of(0.37)
    b, c = part.interval_bounds(i)
    sm3 = cm.scale_match(tuned_golden, 0.37, c - b, tower=tower_golden)
    assert sm3.level <= 3
    with pytest.raises(ValueError):
        cm.scale_match(tuned_golden, 0.3, 1.5, tower=tower_golden)
    with pytest.raises(ResourceLimitError):
        cm.scale_match(tuned_golden, 0.3, 1e-9, tower=tower_golden)


def test_scale_match_sweep(tuned_golden):
    # levels above ~18 would be contaminated by the finite tuning accuracy
    # (1/(q_n q_{n+1}) reaches |rho - omega|); the sweep stays below that
    tower = cm.partition_tower(tuned_golden, 18)
    kp = cm.real_bounds_report(tuned_golden, 16).K_scale
    rng = np.random.default_rng(4)
    for _ in range(100):
        x = rng.uniform(0, 1)
        ell = 10 ** rng.uniform(-2.4, -0.05)
        sm = cm.scale_match(tuned_golden, x, ell, tower=tower)
        assert 1.0 / kp - 1e-12 <= sm.ratio <= kp + 1e-12


def test_partition_ball_geometry(tuned_golden, tower_golden):
    part = tower_golden[3]
    ball = cm.partition_ball(tuned_golden, part, 2)
    assert ball.center.imag + ball.radius < 0  # strictly below R
    assert ball.radius > 0
    assert ball.m == min(int(k) for k in
                         [part.orbit_index[1], part.orbit_index[2],
                          part.orbit_index[3], part.orbit_index[4]])
    with pytest.raises(ValueError):
        cm.partition_ball(tuned_golden, tower_golden[1], 0)


def test_partition_ball_forward_cone(tuned_golden, tower_golden):
    theta = np.linspace(0, 2 * math.pi, 8, endpoint=False)
    for level in (2, 4):
        part = tower_golden[level]
        for i in range(part.n_points):
            ball = cm.partition_ball(tuned_golden, part, i)
            for z in ball.center + ball.radius * np.exp(1j * theta):
                zz = complex(z)
                for _ in range(ball.m):
                    zz = tuned_golden(zz)
                assert cm.in_cone(zz, ball.cone_apex)


def test_ball_sweep_constants(tuned_golden, tower_golden):
    balls, r2, m2 = cm.ball_sweep(tuned_golden, [2, 3, 4], tower=tower_golden)
    assert len(balls) == 5 + 8 + 13
    for b in balls:
        assert b.radius > r2 * b.interval_length
        assert abs(b.center - np.clip(b.center.real, *b.interval)) < m2 * b.interval_length
