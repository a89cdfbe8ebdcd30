"""Quadratic and cubic residue symbols over Q(sqrt(-3)), and the character pieces.

The quadratic symbol [alpha/beta] has two independent implementations: a
Jacobi-style descent through the quadratic reciprocity law in Z[w] (fast
path, no factoring) and the Euler criterion over the prime factorization
(oracle). The cubic symbol (D/A)_3 and its conjugate chi_D, the primary
character phi, and epsilon = [alpha/.] combine into the Hecke character of
the sextic-twist curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import sympy

from .eisenstein import (
    CUBE_ROOTS,
    EisInt,
    IdealRep,
    SQRT_M3,
    as_eis,
    factor,
    mod4_class,
    mod4_normalize,
    primary_associate,
    sqrt_minus3_mod,
)

TWO = EisInt(2)


@dataclass(frozen=True)
class CubicValue:
    """A cube root of unity w^exp, or 0 (shared factor)."""

    exp: int = 0
    zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "exp", 0 if self.zero else self.exp % 3)

    def __mul__(self, other):
        if self.zero or other.zero:
            return CUBIC_ZERO
        return CubicValue(self.exp + other.exp)

    def __pow__(self, n):
        if self.zero:
            return CUBIC_ZERO
        return CubicValue(self.exp * n)

    def conj(self):
        if self.zero:
            return CUBIC_ZERO
        return CubicValue(-self.exp)

    def is_one(self):
        return not self.zero and self.exp == 0

    def as_eis(self) -> EisInt:
        if self.zero:
            return EisInt(0)
        return CUBE_ROOTS[self.exp]

    def to_json(self):
        return {"cubic_exp": self.exp, "zero": self.zero}


CUBIC_ONE = CubicValue(0)
CUBIC_OMEGA = CubicValue(1)
CUBIC_OMEGA2 = CubicValue(2)
CUBIC_ZERO = CubicValue(0, zero=True)


def bracket(g: EisInt) -> int:
    """The mod-4 symbol [g] for odd-norm g.

    Writing g = a - b*w^2 (so a = x - y, b = y for g = x + y*w) and b = 2^r b'
    with b' odd: [g] = (-1)^{((Ng-1)/2)((b'-1)/2)} (2/Ng)^r; rational integers
    get [g] = 1.
    """
    g = as_eis(g)
    n = g.norm()
    if n % 2 == 0:
        raise ValueError(f"[{g}] needs odd norm")
    b = g.b
    if b == 0:
        return 1
    r = (b & -b).bit_length() - 1
    bp = b >> r
    sign = -1 if ((n - 1) // 2) % 2 and ((bp - 1) // 2) % 2 else 1
    if r % 2:
        sign *= int(sympy.jacobi_symbol(2, n))
    return sign


def _one_mod2_associate(g: EisInt) -> EisInt:
    """The cube-root-of-unity multiple of g lying in 1 + 2Z[w] (up to sign)."""
    for u in CUBE_ROOTS:
        c = u * g
        if c.a % 2 == 1 and c.b % 2 == 0:
            return c
    raise ValueError(f"{g} has even norm")


def quad_minus_one(beta: EisInt) -> int:
    """[-1/beta] = (-1)^{Tr((g-1)/2)} on the associate g = 1 (mod 2)."""
    g = _one_mod2_associate(beta)
    return -1 if ((g.trace() - 2) // 2) % 2 else 1


def quad_two(beta: EisInt) -> int:
    """[2/beta] = (-1)^{Tr((g^2-1)/8)} on the associate g = 1 (mod 2)."""
    g = _one_mod2_associate(beta)
    t = (g * g).trace() - 2
    assert t % 8 == 0
    return -1 if (t // 8) % 2 else 1


def _residue_mod_sqrt3(g: EisInt) -> int:
    """Image of g in O/(sqrt(-3)) = F_3, using w = 1."""
    return (g.a + g.b) % 3


def quad_sqrt3_top(beta: EisInt) -> int:
    """[sqrt(-3)/beta] via the reciprocity swap."""
    r = _residue_mod_sqrt3(beta)
    if r == 0:
        return 0
    bottom = 1 if r == 1 else -1  # [beta/sqrt(-3)] by Euler in F_3
    bc = beta.conj()
    return bottom * bracket(SQRT_M3) * bracket(bc) * bracket(SQRT_M3 * bc)


_MAX_DESCENT = 256


def quad_symbol(alpha: EisInt, beta: EisInt) -> int:
    """[alpha/beta] by reciprocity descent (no factoring). 0 on shared factors."""
    alpha, beta = as_eis(alpha), as_eis(beta)
    if beta.norm() % 2 == 0:
        raise ValueError(f"[./{beta}] needs odd norm")
    if alpha == EisInt(0):
        return 0 if beta.norm() > 1 else 1
    result = 1
    for _ in range(_MAX_DESCENT):
        if beta.norm() == 1:
            return result
        alpha = alpha % beta
        if alpha == EisInt(0):
            return 0
        # peel 2-powers (2 is inert: even norm means divisible by 2)
        while alpha.norm() % 2 == 0:
            alpha = alpha.exact_div(TWO)
            result *= quad_two(beta)
        # peel ramified factors
        while SQRT_M3.divides(alpha):
            alpha = alpha.exact_div(SQRT_M3)
            s = quad_sqrt3_top(beta)
            if s == 0:
                return 0
            result *= s
        # strip the unit (cube roots are squares; only the sign contributes)
        u, alpha = primary_associate(alpha)
        if u in (EisInt(-1), -CUBE_ROOTS[1], -CUBE_ROOTS[2]):
            result *= quad_minus_one(beta)
        if alpha.norm() == 1:
            return result
        # reciprocity swap [alpha/beta] = [beta/alpha][alpha][conj b][alpha conj b]
        bc = beta.conj()
        result *= bracket(alpha) * bracket(bc) * bracket(alpha * bc)
        alpha, beta = beta, alpha
    raise RuntimeError(f"quadratic descent did not terminate for {alpha}, {beta}")


def _split_omega_image(pi: EisInt, p: int) -> int:
    """t with w = t in O/(pi) = F_p."""
    y_inv = pow(pi.b % p, -1, p)
    return (-pi.a * y_inv) % p


def _euler_quad_prime(alpha: EisInt, pi: EisInt) -> int:
    """[alpha/pi] = alpha^{(N pi - 1)/2} mod pi for a prime pi."""
    n = pi.norm()
    if n == 3:
        r = _residue_mod_sqrt3(alpha)
        return 0 if r == 0 else (1 if r == 1 else -1)
    if sympy.isprime(n):  # split prime
        p = n
        t = _split_omega_image(pi, p)
        a = (alpha.a + alpha.b * t) % p
        v = pow(a, (p - 1) // 2, p)
        return 0 if v == 0 else (1 if v == 1 else -1)
    # inert rational prime q, residue field F_{q^2} = F_q[w]/(w^2+w+1)
    q = pi.a if pi.b == 0 else None
    assert q is not None and sympy.isprime(abs(q))
    q = abs(q)
    v = _fq2_pow(alpha, (q * q - 1) // 2, q)
    if v == (0, 0):
        return 0
    if v == (1, 0):
        return 1
    if v == ((q - 1) % q, 0):
        return -1
    raise AssertionError(f"Euler power not +-1: {v} mod {q}")


def _fq2_pow(g: EisInt, n: int, q: int):
    """(x + y*w)^n in F_q[w]/(w^2+w+1), as a coordinate pair."""
    x, y = g.a % q, g.b % q
    rx, ry = 1, 0
    while n:
        if n & 1:
            rx, ry = (rx * x - ry * y) % q, (rx * y + ry * x - ry * y) % q
        x, y = (x * x - y * y) % q, (2 * x * y - y * y) % q
        n >>= 1
    return rx, ry


def _euler_cubic_prime(d: int, pi: EisInt) -> CubicValue:
    """(d/pi)_3: the cube root of unity congruent to d^{(N pi - 1)/3} mod pi."""
    n = pi.norm()
    if n == 3:
        raise ValueError("cubic symbol is undefined at the ramified prime")
    if sympy.isprime(n):  # split
        p = n
        if d % p == 0:
            return CUBIC_ZERO
        t = _split_omega_image(pi, p)
        v = pow(d % p, (p - 1) // 3, p)
        if v == 1:
            return CUBIC_ONE
        if v == t:
            return CUBIC_OMEGA
        if v == (t * t) % p:
            return CUBIC_OMEGA2
        raise AssertionError(f"cubic Euler power {v} is not a cube root of 1 mod {p}")
    q = abs(pi.a)  # inert: d^{(q^2-1)/3} = (d^{q-1})^{(q+1)/3} = 1
    if d % q == 0:
        return CUBIC_ZERO
    return CUBIC_ONE


def _gen_of(x) -> EisInt:
    return x.gen if isinstance(x, IdealRep) else as_eis(x)


def quad_symbol_euler(alpha: EisInt, beta) -> int:
    """[alpha/beta] as a product of Euler-criterion values over beta's primes."""
    g = _gen_of(beta)
    if g.norm() % 2 == 0:
        raise ValueError(f"[./{g}] needs odd norm")
    result = 1
    _, primes = factor(g)
    for pi, e in primes:
        s = _euler_quad_prime(alpha, pi)
        if s == 0:
            return 0
        if e % 2:
            result *= s
    return result


def cubic_symbol(d: int, A) -> CubicValue:
    """(d/A)_3 extended multiplicatively over the prime factors of A."""
    g = _gen_of(A)
    result = CUBIC_ONE
    _, primes = factor(g)
    for pi, e in primes:
        v = _euler_cubic_prime(d, pi)
        if v.zero:
            return CUBIC_ZERO
        result = result * v**e
    return result


def chi_d(d: int, A) -> CubicValue:
    """chi_d(A): the complex conjugate of (d/A)_3."""
    return cubic_symbol(d, A).conj()


def chi_omega(d: int) -> CubicValue:
    """chi_d evaluated on elements = w (mod d), = 1 (mod 3): by d mod 9."""
    if d % 3 == 0:
        raise ValueError("d must be coprime to 3")
    r = d % 9
    if r in (1, 8):
        return CUBIC_ONE
    if r in (4, 5):
        return CUBIC_OMEGA
    return CUBIC_OMEGA2


def phi_char(A) -> EisInt:
    """phi(A): the generator of A congruent to 1 mod 3."""
    return primary_associate(_gen_of(A))[1]


def chi3(alpha: EisInt) -> CubicValue:
    """The cube root of unity w^r with alpha/w^r = +-phi(alpha)."""
    alpha = as_eis(alpha)
    phi = phi_char(alpha)
    for r, u in enumerate(CUBE_ROOTS):
        if u * phi == alpha or -(u * phi) == alpha:
            return CubicValue(r)
    raise AssertionError(f"{alpha} is not a unit multiple of its primary associate")


@dataclass(frozen=True)
class CharacterContext:
    """Normalized twisting data for one curve y^2 = x^3 + 16 D^2 alpha^3."""

    alpha: EisInt
    d: int

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("D must be a positive integer")
        if any(e >= 3 for e in sympy.factorint(self.d).values()):
            raise ValueError(f"D = {self.d} is not cube-free")
        cls = mod4_class(self.alpha)
        if cls is None:
            raise ValueError(f"alpha = {self.alpha} is not normalized mod 4")
        if self.alpha.norm() % 3 == 0:
            raise ValueError("alpha must be coprime to 3")
        if math.gcd(self.d, 6 * self.alpha.norm()) != 1:
            raise ValueError(f"gcd(D, 6*N(alpha)) != 1 for D={self.d}")

    @property
    def m(self) -> int:
        return self.alpha.norm()

    @property
    def mstar(self) -> int:
        return self.m if self.m % 4 == 1 else 4 * self.m

    @property
    def alpha_mod4(self) -> str:
        return mod4_class(self.alpha)

    @property
    def d_prime(self) -> int:
        # D for alpha = 1, +-sqrt(-3) (mod 4); 4D for alpha = -1 (mod 4)
        return 4 * self.d if self.alpha_mod4 == "-1" else self.d

    @property
    def d_star(self) -> int:
        # D for alpha = 1 (mod 4); 4D otherwise
        return self.d if self.alpha_mod4 == "+1" else 4 * self.d

    @property
    def e2(self) -> int:
        return 1 if self.m % 4 == 1 else 0

    @property
    def alpha_prime(self) -> bool:
        return sympy.isprime(self.m)

    @property
    def r_alpha(self) -> int:
        return sqrt_minus3_mod(self.alpha)

    def eps(self, A) -> int:
        """epsilon(A) = [alpha/A]."""
        return quad_symbol(self.alpha, _gen_of(A))

    def eps_conj(self, A) -> int:
        """[conj(alpha)/A]."""
        return quad_symbol(self.alpha.conj(), _gen_of(A))

    def chi_d(self, A) -> CubicValue:
        return chi_d(self.d, A)

    def eps_sqrt3(self) -> int:
        return quad_symbol(self.alpha, SQRT_M3)


def epsilon_char(ctx: CharacterContext, A) -> int:
    return ctx.eps(A)


def normalize_alpha(alpha: EisInt) -> EisInt:
    """Cube-root normalization into the classes +-1, +-sqrt(-3) mod 4."""
    return mod4_normalize(alpha)[1]
