"""High-precision plumbing: gmpy2 contexts, exact field points, lattice rounding.

All analytic values are gmpy2.mpc/mpfr at an explicit binary precision.
Evaluation points are elements of Q(sqrt(-3)) carried exactly as integer
triples z = (p + q*sqrt(-3))/r until the final conversion, so argument
reduction loses no precision.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .eisenstein import EisInt

DEFAULT_PREC = 192
GUARD_BITS = 32


@contextmanager
def precision(bits: int):
    """Set the working gmpy2 precision for a block (single-threaded use)."""
    ctx = gmpy2.get_context()
    old = ctx.precision
    ctx.precision = int(bits)
    try:
        yield
    finally:
        ctx.precision = old


def pi_val() -> mpfr:
    return gmpy2.const_pi()


def sqrt_m3_mpc() -> mpc:
    return mpc(0, gmpy2.sqrt(mpfr(3)))


def omega_mpc() -> mpc:
    return mpc(mpfr(-1) / 2, gmpy2.sqrt(mpfr(3)) / 2)


def eis_to_mpc(g: EisInt) -> mpc:
    y = gmpy2.sqrt(mpfr(3)) / 2
    return mpc(mpfr(g.a) - mpfr(g.b) / 2, mpfr(g.b) * y)


def root_of_unity6(k: int) -> mpc:
    """exp(2 pi i k / 6) exactly from sqrt(3)."""
    k %= 6
    half = mpfr(1) / 2
    y = gmpy2.sqrt(mpfr(3)) / 2
    table = {
        0: mpc(1, 0),
        1: mpc(half, y),
        2: mpc(-half, y),
        3: mpc(-1, 0),
        4: mpc(-half, -y),
        5: mpc(half, -y),
    }
    return table[k]


@dataclass(frozen=True)
class QPoint:
    """z = (p + q*sqrt(-3))/r with integer p, q, r; q, r > 0 (upper half plane)."""

    p: int
    q: int
    r: int

    def __post_init__(self):
        p, q, r = self.p, self.q, self.r
        if r == 0 or q == 0:
            raise ValueError("degenerate point")
        if r < 0:
            p, q, r = -p, -q, -r
        if q < 0:
            raise ValueError("point must lie in the upper half plane")
        g = math.gcd(math.gcd(abs(p), q), r)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "r", r // g)

    def scale(self, num: int, den: int) -> "QPoint":
        return QPoint(self.p * num, self.q * num, self.r * den)

    def add_int(self, k: int) -> "QPoint":
        return QPoint(self.p + k * self.r, self.q, self.r)

    def neg_inv_scaled(self, n: int) -> "QPoint":
        """-1/(n*z)."""
        return QPoint(-self.r * self.p, self.r * self.q, n * (self.p * self.p + 3 * self.q * self.q))

    def mobius(self, a: int, b: int, c: int, d: int) -> "QPoint":
        """(a z + b)/(c z + d) for an integer matrix with positive determinant."""
        p, q, r = self.p, self.q, self.r
        cp_dr = c * p + d * r
        x = (a * p + b * r) * cp_dr + 3 * a * c * q * q
        y = q * r * (a * d - b * c)
        w = cp_dr * cp_dr + 3 * c * c * q * q
        return QPoint(x, y, w)

    def im_float(self) -> float:
        return math.sqrt(3) * self.q / self.r

    def norm_sq_num(self) -> int:
        """Numerator of |z|^2 * r^2, i.e. p^2 + 3 q^2."""
        return self.p * self.p + 3 * self.q * self.q

    def to_mpc(self) -> mpc:
        rt3 = gmpy2.sqrt(mpfr(3))
        return mpc(mpfr(self.p) / self.r, rt3 * self.q / self.r)

    @staticmethod
    def from_eis_over(num: EisInt, den: int) -> "QPoint":
        """num/den with num = a + b*w: (2a - b + b*sqrt(-3))/(2 den)."""
        return QPoint(2 * num.a - num.b, num.b, 2 * den)


def half_point(b: int) -> QPoint:
    """(b + sqrt(-3))/2."""
    return QPoint(b, 1, 2)


def round_to_eis(z: mpc):
    """Nearest point of Z[w] in the hexagonal lattice; returns (EisInt, residual).

    Ties break deterministically toward smaller |a|, then |b|, then sign.
    """
    x, y = z.real, z.imag
    rt3 = gmpy2.sqrt(mpfr(3))
    b_est = 2 * y / rt3
    cands = []
    for b in {int(gmpy2.floor(b_est)), int(gmpy2.ceil(b_est))}:
        a_est = x + mpfr(b) / 2
        for a in {int(gmpy2.floor(a_est)), int(gmpy2.ceil(a_est))}:
            g = EisInt(a, b)
            d = abs(z - eis_to_mpc(g))
            cands.append((d, abs(a), abs(b), a, b, g))
    cands.sort(key=lambda t: (t[0], t[1], t[2], t[3], t[4]))
    best = cands[0]
    return best[5], best[0]


def round_to_int(x: mpfr):
    n = int(gmpy2.rint(x)) if hasattr(gmpy2, "rint") else int(round(float(x)))
    best, bestd = n, abs(x - n)
    for cand in (n - 1, n + 1):
        d = abs(x - cand)
        if d < bestd:
            best, bestd = cand, d
    return best, bestd
