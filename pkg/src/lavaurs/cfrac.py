"""Continued fractions: expansions, convergents, bounded-type checks.

All arithmetic runs over exact rationals (`fractions.Fraction`), so the
partial quotients of a float input are the exact quotients of the binary
rational it represents.  The expansion stops once the remaining information
content of a double is exhausted (residual below 2**-52), which is what
keeps quotients from being corrupted past ~15 terms.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, sqrt

# Golden mean (sqrt(5)-1)/2, the default bounded-type rotation number.
GOLDEN_MEAN = (sqrt(5.0) - 1.0) / 2.0

_RESIDUAL_FLOOR = Fraction(1, 2**52)


@dataclass(frozen=True)
class Convergent:
    """One best rational approximation p/q with its index in the expansion."""

    p: int
    q: int
    index: int

    def value(self):
        return self.p / self.q


@dataclass(frozen=True)
class ContinuedFraction:
    """A real in (0,1) together with a finite prefix of partial quotients."""

    value: float
    quotients: tuple

    def __post_init__(self):
        if not self.quotients:
            raise ValueError("continued fraction needs at least one quotient")
        if any(a < 1 for a in self.quotients):
            raise ValueError("partial quotients must be >= 1")


def cf_expand(x, n_terms):
    """Expand x in (0,1) into at most n_terms partial quotients.

    Stops early if the expansion terminates (x rational) or once the
    approximation residual drops below double-precision resolution
    1/(q_k q_{k+1}) < 2**-52, past which quotients of a float carry no
    information about the underlying real.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must lie in (0,1), got {x}")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")

    frac = Fraction(x)
    quotients = []
    q_prev, q_cur = 0, 1
    while len(quotients) < n_terms and frac > 0:
        inv = 1 / frac
        a = int(inv)  # floor: inv > 0
        frac = inv - a
        if frac < _RESIDUAL_FLOOR:
            # Remaining residual is below what the float resolves; treat
            # the expansion as terminated here.
            quotients.append(a)
            break
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_prev * q_cur > 2**52:
            # 1/(q_k q_{k+1}) < 2**-52: information exhausted.
            break
        quotients.append(a)
    return ContinuedFraction(value=float(x), quotients=tuple(quotients))


def convergents(cf):
    """Convergents p_k/q_k of a ContinuedFraction, k = 1..len(quotients).

    Follows the standard recurrence p_k = a_k p_{k-1} + p_{k-2},
    q_k = a_k q_{k-1} + q_{k-2} with seeds (p_0, q_0) = (0, 1),
    (p_{-1}, q_{-1}) = (1, 0).
    """
    if not cf.quotients:
        raise ValueError("empty quotient list")
    out = []
    p_prev, p_cur = 1, 0
    q_prev, q_cur = 0, 1
    for k, a in enumerate(cf.quotients, start=1):
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        assert gcd(p_cur, q_cur) == 1
        out.append(Convergent(p=p_cur, q=q_cur, index=k))
    return out


def denominators(cf, n_max):
    """q_0, q_1, ..., q_{n_max} with the q_0 = 1 convention.

    This is the indexing used by dynamical partitions: level n has
    q_n + q_{n+1} points.  Raises ResourceLimitError-free ValueError if the
    expansion prefix is too short to supply n_max+1 denominators.
    """
    conv = convergents(cf)
    qs = [1] + [c.q for c in conv]
    if len(qs) < n_max + 1:
        raise ValueError(
            f"need {n_max + 1} denominators but expansion has only {len(qs)}"
        )
    return qs[: n_max + 1]


def is_bounded_type(cf, bound):
    """True iff every *computed* quotient is <= bound.

    The verdict only covers the expanded prefix; no finite computation can
    certify full bounded type.
    """
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    return all(a <= bound for a in cf.quotients)


def reconstruct(quotients):
    """Exact value of a finite continued fraction [0; a_1, ..., a_n]."""
    acc = Fraction(0)
    for a in reversed(quotients):
        acc = Fraction(1, a + acc)
    return acc
