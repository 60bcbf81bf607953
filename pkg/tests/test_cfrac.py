import math
from fractions import Fraction

import numpy as np
import pytest

from lavaurs import cfrac
from lavaurs.cfrac import GOLDEN_MEAN


def _oracle_quotients(x_fraction, n):
    """Independent floor/invert loop over exact rationals."""
    out = []
    frac = x_fraction
    for _ in range(n):
        if frac == 0:
            break
        inv = 1 / frac
        a = inv.numerator // inv.denominator
        out.append(a)
        frac = inv - a
    return out


def test_golden_mean_all_ones():
    cf = cfrac.cf_expand(GOLDEN_MEAN, 5)
    assert cf.quotients == (1, 1, 1, 1, 1)


def test_rational_terminates():
    cf = cfrac.cf_expand(1 / 3, 5)
    assert cf.quotients == (3,)


def test_pi_minus_3_prefix():
    # oracle: exact rational arithmetic on a 30-digit decimal of pi - 3
    x = Fraction("0.141592653589793238462643383279")
    assert _oracle_quotients(x, 4) == [7, 15, 1, 292]
    cf = cfrac.cf_expand(math.pi - 3, 4)
    assert cf.quotients == (7, 15, 1, 292)


def test_expand_domain_errors():
    with pytest.raises(ValueError):
        cfrac.cf_expand(0.0, 3)
    with pytest.raises(ValueError):
        cfrac.cf_expand(1.5, 3)
    with pytest.raises(ValueError):
        cfrac.cf_expand(0.5, 0)


def test_convergents_fibonacci():
    cf = cfrac.cf_expand(GOLDEN_MEAN, 5)
    qs = [c.q for c in cfrac.convergents(cf)]
    assert qs == [1, 2, 3, 5, 8]


def test_convergents_single():
    cf = cfrac.ContinuedFraction(value=1 / 3, quotients=(3,))
    (c,) = cfrac.convergents(cf)
    assert (c.p, c.q) == (1, 3)


def test_convergents_recurrence_oracle():
    cf = cfrac.ContinuedFraction(value=0.1415, quotients=(7, 15, 1))
    convs = [(c.p, c.q) for c in cfrac.convergents(cf)]
    assert convs == [(1, 7), (15, 106), (16, 113)]


def test_convergents_empty_rejected():
    with pytest.raises(ValueError):
        cfrac.ContinuedFraction(value=0.5, quotients=())


def test_recurrence_and_gcd_property():
    cf = cfrac.cf_expand(math.pi - 3, 8)
    convs = cfrac.convergents(cf)
    a = cf.quotients
    for k in range(2, len(convs)):
        assert convs[k].q == a[k] * convs[k - 1].q + convs[k - 2].q
        assert convs[k].p == a[k] * convs[k - 1].p + convs[k - 2].p
        assert math.gcd(convs[k].p, convs[k].q) == 1


@pytest.mark.parametrize("x", [GOLDEN_MEAN, math.pi - 3, math.sqrt(2) - 1, 0.7548776662])
def test_approximation_quality_invariant(x):
    # |value - p_k/q_k| < 1/(q_k q_{k+1}) and alternating signs
    cf = cfrac.cf_expand(x, 12)
    convs = cfrac.convergents(cf)
    signs = []
    for k, c in enumerate(convs[:-1]):
        err = abs(x - c.p / c.q)
        assert err < 1.0 / (c.q * convs[k + 1].q)
        signs.append(np.sign(c.q * x - c.p))
    assert all(s1 == -s2 for s1, s2 in zip(signs, signs[1:]))
    # |q_k value - p_k| strictly decreasing
    resid = [abs(c.q * x - c.p) for c in convs]
    assert all(r1 > r2 for r1, r2 in zip(resid, resid[1:]))


def test_bounded_type():
    golden = cfrac.cf_expand(GOLDEN_MEAN, 10)
    assert cfrac.is_bounded_type(golden, 1)
    pi_cf = cfrac.cf_expand(math.pi - 3, 4)
    assert not cfrac.is_bounded_type(pi_cf, 10)
    assert cfrac.is_bounded_type(pi_cf, max(pi_cf.quotients))
    with pytest.raises(ValueError):
        cfrac.is_bounded_type(golden, 0)


def test_denominators_indexing():
    cf = cfrac.cf_expand(GOLDEN_MEAN, 12)
    qs = cfrac.denominators(cf, 6)
    assert qs == [1, 1, 2, 3, 5, 8, 13]
    assert qs[2] + qs[3] == 5  # the level-2 partition count


def test_reconstruct_exact():
    assert cfrac.reconstruct((3,)) == Fraction(1, 3)
    assert cfrac.reconstruct((7, 15, 1)) == Fraction(16, 113)
