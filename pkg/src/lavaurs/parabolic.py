"""The quadratic map P(z) = lambda z + z^2, its escape test, and the
parabolic germ of P^q at the fixed point 0.

lambda = e^{2 pi i p/q} is a primitive q-th root of unity, so P^q is
tangent to the identity at 0 with q attracting and q repelling petals.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_ESCAPE_RADIUS = 4.0


@dataclass(frozen=True)
class ParabolicPolynomial:
    """P(z) = lambda z + z^2 with lambda = e^{2 pi i p/q}, gcd(p,q)=1."""

    p: int
    q: int
    lam: complex = field(init=False)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p/q = {self.p}/{self.q} is not irreducible")
        object.__setattr__(self, "lam", cmath.exp(2j * cmath.pi * self.p / self.q))

    def __call__(self, z):
        return self.lam * z + z * z

    def iterate(self, z, n):
        for _ in range(n):
            z = self.lam * z + z * z
        return z

    @property
    def critical_point(self):
        return -self.lam / 2.0

    @property
    def critical_value(self):
        c = self.critical_point
        return self.lam * c + c * c


@dataclass(frozen=True)
class ParabolicGerm:
    """Truncated power series of P^q at 0: z + a z^{q+1} + ...

    coeffs[k] is the coefficient of z^k, k = 0..order.  `a` is the leading
    petal coefficient (of z^{q+1}); it never vanishes for these maps.
    """

    q: int
    order: int
    coeffs: np.ndarray
    a: complex

    def taylor_tail(self):
        """Coefficients g_j of g(z) = (P^q(z) - z)/z, j >= q."""
        g = np.zeros(self.order, dtype=complex)
        g[: self.order] = self.coeffs[1:]
        g[0] -= 1.0
        return g

    def attracting_direction(self, k=0):
        """Unit vector of the k-th attracting axis (a z^q real negative)."""
        theta = (math.pi - cmath.phase(self.a) + 2.0 * math.pi * k) / self.q
        return cmath.exp(1j * theta)

    def repelling_direction(self, k=0):
        """Unit vector of the k-th repelling axis (a z^q real positive)."""
        theta = (-cmath.phase(self.a) + 2.0 * math.pi * k) / self.q
        return cmath.exp(1j * theta)


@dataclass(frozen=True)
class EscapeResult:
    escaped: bool
    iterations: int
    final_modulus: float

    @property
    def status(self):
        return f"ESCAPED({self.iterations})" if self.escaped else f"BOUNDED({self.iterations})"


def _poly_compose_trunc(outer, inner, order):
    """Coefficients of outer(inner(z)) truncated at z^order (Horner)."""
    acc = np.zeros(order + 1, dtype=complex)
    for c in outer[::-1]:
        acc = np.convolve(acc, inner)[: order + 1]
        acc[0] += c
    return acc


def germ_coefficients(poly, order=None):
    """Power series of P^q at 0 through z^order (default q+6).

    P^q is a polynomial of degree 2^q, so for order >= 2^q the result is
    exact rather than truncated.
    """
    if order is None:
        order = poly.q + 6
    if order < poly.q + 1:
        raise ValueError(f"order must be >= q+1 = {poly.q + 1}")
    p1 = np.zeros(order + 1, dtype=complex)
    p1[1] = poly.lam
    if order >= 2:
        p1[2] = 1.0
    acc = p1
    for _ in range(poly.q - 1):
        acc = _poly_compose_trunc(p1, acc, order)
    a = complex(acc[poly.q + 1])
    if a == 0:
        raise ValueError("degenerate germ: leading petal coefficient vanished")
    return ParabolicGerm(q=poly.q, order=order, coeffs=acc, a=a)


def escape_test(poly, z, maxiter=10_000, radius=DEFAULT_ESCAPE_RADIUS):
    """Iterate P until |z| > radius (ESCAPED) or maxiter is hit (BOUNDED).

    The reported iteration count is the minimal n with |P^n(z)| > radius.
    """
    if radius < 4.0:
        raise ValueError("escape radius must be >= 4")
    lam = poly.lam
    for n in range(maxiter + 1):
        az = abs(z)
        if az > radius:
            return EscapeResult(escaped=True, iterations=n, final_modulus=az)
        z = lam * z + z * z
    return EscapeResult(escaped=False, iterations=maxiter, final_modulus=abs(z))


def trap_threshold(germ, poly=None):
    """Re w threshold C0 of the attracting trap in w = -1/(q a z^q).

    C0 = 10 (1 + |b|) with b the log-correction coefficient of the Abel
    series; the factor-10 margin keeps Re w increments >= 1/2 per step.
    The solve needs germ.order >= 2q+2; a finer germ is derived on the fly
    when `poly` is supplied and the given one is too short.
    """
    from . import _abel

    if germ.order < 2 * germ.q + 2 and poly is not None:
        germ = germ_coefficients(poly, order=2 * germ.q + 2)
    return 10.0 * (1.0 + abs(_abel.log_correction(germ)))


def petal_certificate(poly, germ, z, budget=10_000, radius=DEFAULT_ESCAPE_RADIUS,
                      confirm_steps=8):
    """Certify that z's orbit under P^q enters an attracting trap sector.

    Returns True only when some iterate has Re w > C0 (w = -1/(q a z^q))
    and the next `confirm_steps` iterates each gain at least 1/2 in Re w.
    True implies z lies in the interior of the filled Julia set; False
    means "not certified", not "outside".
    """
    if germ.q != poly.q:
        raise ValueError("germ was computed for a different q")
    c0 = trap_threshold(germ, poly)
    qa = poly.q * germ.a
    lam = poly.lam
    q = poly.q

    def w_of(v):
        vq = v**q
        if vq == 0:
            return None
        return -1.0 / (qa * vq)

    cur = z
    streak = 0
    w_prev = None
    for _ in range(budget):
        if abs(cur) > radius:
            return False
        w = w_of(cur)
        if w is not None and w.real > c0:
            if w_prev is not None and w.real >= w_prev.real + 0.5:
                streak += 1
                if streak >= confirm_steps:
                    return True
            else:
                streak = 0
            w_prev = w
        else:
            streak = 0
            w_prev = None
        for _ in range(q):
            cur = lam * cur + cur * cur
    return False
