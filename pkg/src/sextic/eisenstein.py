"""Exact arithmetic in Z[w], w = (-1+sqrt(-3))/2.

Elements are stored as a + b*w with arbitrary-precision integer coordinates.
The ring is norm-Euclidean (round each quotient coordinate, remainder norm
<= 3/4 of the divisor norm), which gives gcd, exact division and splitting
of rational primes. Primitive ideals are carried as two-term Z-module bases
[a, (-b+sqrt(-3))/2] with b^2 = -3 (mod 4a).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy


class EisInt:
    """a + b*w with w^2 = -1 - w. Immutable."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, *_):
        raise AttributeError("EisInt is immutable")

    def __repr__(self):
        return f"EisInt({self.a}, {self.b})"

    def __str__(self):
        return format_eis(self)

    def __eq__(self, other):
        other = as_eis(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __add__(self, other):
        other = as_eis(other)
        return EisInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_eis(other)
        return EisInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return as_eis(other) - self

    def __neg__(self):
        return EisInt(-self.a, -self.b)

    def __mul__(self, other):
        other = as_eis(other)
        # (a1 + b1 w)(a2 + b2 w), w^2 = -1 - w
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return EisInt(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2 - b1 * b2)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative powers leave the ring")
        result, base = EisInt(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self):
        # conj(w) = w^2 = -1 - w
        return EisInt(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def trace(self):
        return 2 * self.a - self.b

    def divmod(self, other):
        """Rounded division: q, r with self = q*other + r, N(r) <= (3/4)N(other)."""
        other = as_eis(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        prod = self * other.conj()
        qa = _round_div(prod.a, n)
        qb = _round_div(prod.b, n)
        q = EisInt(qa, qb)
        return q, self - q * other

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other):
        return (as_eis(other) % self) == ZERO

    def exact_div(self, other):
        """self / other, raising if the quotient is not in Z[w]."""
        q, r = self.divmod(other)
        if r != ZERO:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def is_unit(self):
        return self.norm() == 1


ZERO = EisInt(0)
ONE = EisInt(1)
OMEGA = EisInt(0, 1)
OMEGA2 = EisInt(-1, -1)
SQRT_M3 = EisInt(1, 2)  # sqrt(-3) = 1 + 2w
UNITS = (ONE, -ONE, OMEGA, -OMEGA, OMEGA2, -OMEGA2)
CUBE_ROOTS = (ONE, OMEGA, OMEGA2)


def as_eis(x) -> EisInt:
    if isinstance(x, EisInt):
        return x
    if isinstance(x, int):
        return EisInt(x)
    raise TypeError(f"cannot coerce {x!r} to EisInt")


def _round_div(p, q):
    # nearest integer to p/q, half rounded toward +inf; q > 0 not assumed
    if q < 0:
        p, q = -p, -q
    return (2 * p + q) // (2 * q)


def norm(g: EisInt) -> int:
    return as_eis(g).norm()


def gcd(x: EisInt, y: EisInt) -> EisInt:
    """A gcd of x and y (normalized to the primary associate when coprime to 3)."""
    x, y = as_eis(x), as_eis(y)
    while y != ZERO:
        x, y = y, x % y
    if x != ZERO and x.norm() % 3 != 0:
        return primary_associate(x)[1]
    return x


def parse_eis(text: str) -> EisInt:
    """Parse the textual form "a+b*w" (also accepts "w", "-w", "3*w", "5")."""
    s = text.replace(" ", "").replace("W", "w")
    if not s:
        raise ValueError("empty Eisenstein integer literal")
    # split into signed terms
    terms, cur = [], ""
    for ch in s:
        if ch in "+-" and cur:
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    a = b = 0
    for t in terms:
        if "w" in t:
            coeff = t[: t.index("w")].rstrip("*")
            if coeff in ("", "+"):
                b += 1
            elif coeff == "-":
                b -= 1
            else:
                b += int(coeff)
        else:
            a += int(t)
    return EisInt(a, b)


def format_eis(g: EisInt) -> str:
    """Inverse of parse_eis; always of the form "a+b*w" / "a-b*w" / "a"."""
    g = as_eis(g)
    if g.b == 0:
        return str(g.a)
    if g.a == 0:
        return f"{g.b}*w"
    sign = "+" if g.b > 0 else "-"
    return f"{g.a}{sign}{abs(g.b)}*w"


def primary_associate(g: EisInt):
    """The unit u and g' = u*g with g' = 1 (mod 3). Requires gcd(N(g), 3) = 1."""
    g = as_eis(g)
    if g.norm() % 3 == 0:
        raise ValueError(f"{g} is not coprime to 3")
    for u in UNITS:
        cand = u * g
        if (cand.a - 1) % 3 == 0 and cand.b % 3 == 0:
            return u, cand
    raise AssertionError("no primary associate found")  # unreachable for valid input


# mod-4 class tags
MOD4_PLUS_ONE = "+1"
MOD4_MINUS_ONE = "-1"
MOD4_PLUS_SQRT = "+sqrt(-3)"
MOD4_MINUS_SQRT = "-sqrt(-3)"

_MOD4_REPS = {
    (1, 0): MOD4_PLUS_ONE,
    (3, 0): MOD4_MINUS_ONE,
    (1, 2): MOD4_PLUS_SQRT,
    (3, 2): MOD4_MINUS_SQRT,
}


def mod4_class(g: EisInt):
    """The class tag of g mod 4, or None if g is not in an admissible class."""
    return _MOD4_REPS.get((g.a % 4, g.b % 4))


def mod4_normalize(alpha: EisInt):
    """Rotate alpha by a cube root of unity into one of the classes +-1, +-sqrt(-3) mod 4.

    The rotation leaves the attached sextic-twist curve unchanged. Each
    omega-orbit of odd classes mod 4 meets the admissible set exactly once,
    so the result is unique; a violation means the input had even norm.
    """
    alpha = as_eis(alpha)
    if alpha.norm() % 2 == 0:
        raise ValueError(f"{alpha} has even norm")
    hits = []
    for u in CUBE_ROOTS:
        cand = u * alpha
        cls = mod4_class(cand)
        if cls is not None:
            hits.append((u, cand, cls))
    if len(hits) != 1:
        raise AssertionError(f"mod-4 normalization not unique for {alpha}: {hits}")
    return hits[0]


@dataclass(frozen=True)
class IdealRep:
    """Primitive ideal [a, (-b+sqrt(-3))/2]: norm a, b^2 = -3 (mod 4a), generator gen."""

    a: int
    b: int
    gen: EisInt

    def __post_init__(self):
        if (self.b * self.b + 3) % (4 * self.a) != 0:
            raise ValueError(f"b^2 != -3 (mod 4a) for a={self.a}, b={self.b}")

    def second_basis_elt(self) -> EisInt:
        # (-b+sqrt(-3))/2 = (1-b)/2 + w
        return EisInt((1 - self.b) // 2, 1)

    def conj_ideal(self) -> "IdealRep":
        return make_ideal((-self.b) % (2 * self.a), self.a)


def make_ideal(b: int, a: int) -> IdealRep:
    """IdealRep of norm a for the odd residue b mod 2a (b^2 = -3 mod 4a)."""
    b = b % (2 * a)
    if b % 2 == 0:
        b += a
    b %= 2 * a
    tau = EisInt((1 - b) // 2, 1)
    g = gcd(EisInt(a), tau)
    return IdealRep(a, b, g)


def ideal_basis(gen: EisInt, b_congruence=None) -> IdealRep:
    """Two-term basis of the primitive ideal (gen).

    b is the smallest nonnegative residue with b^2 = -3 (mod 4a) such that
    (-b+sqrt(-3))/2 lies in (gen). An optional (residue, modulus) pair selects
    the smallest lift of that class meeting the extra congruence (moduli must
    be compatible: gcd(2a, modulus) | residue - b).
    """
    gen = as_eis(gen)
    a = gen.norm()
    if a == 0:
        raise ValueError("zero generator")
    candidates = [b for b in _sqrt_minus3_residues(a)
                  if gen.divides(EisInt((1 - b) // 2, 1))]
    if not candidates:
        raise ValueError(f"({gen}) is not a primitive ideal")
    b0 = min(candidates)
    if b_congruence is not None:
        b0 = crt_base_point([(b0, 2 * a), b_congruence])
    return IdealRep(a, b0, gen)


def _sqrt_minus3_residues(a: int):
    """Odd residues b mod 2a with b^2 = -3 (mod 4a), ascending.

    Empty for even a (2 is inert, so no primitive ideal has even norm); for
    odd a the condition is b odd and b^2 = -3 (mod a).
    """
    if a == 1:
        return [1]
    if a % 2 == 0:
        return []
    roots = sympy.ntheory.residue_ntheory.sqrt_mod(-3, a, all_roots=True) or []
    out = set()
    for r in roots:
        b = int(r) % a
        if b % 2 == 0:
            b += a
        out.add(b % (2 * a))
    return sorted(out)


def generator_decomposition(A: IdealRep, k: EisInt):
    """Unique integers (t, s) with k = t*a + s*(-b+sqrt(-3))/2. Raises if k not in A."""
    k = as_eis(k)
    s = k.b
    num = 2 * k.a - s * (1 - A.b)
    if num % (2 * A.a) != 0:
        raise ValueError(f"{k} is not in the ideal [a={A.a}, b={A.b}]")
    return num // (2 * A.a), s


def crt_base_point(congruences):
    """Smallest positive b0 satisfying all (residue, modulus) pairs."""
    residues = [int(r) for r, _ in congruences]
    moduli = [int(m) for _, m in congruences]
    res = sympy.ntheory.modular.crt(moduli, residues, check=True)
    if res is None:
        raise ValueError(f"inconsistent congruences: {congruences}")
    b0, m = int(res[0]), int(res[1])
    b0 %= m
    return b0 if b0 > 0 else b0 + m


def sqrt_minus3_mod(alpha: EisInt) -> int:
    """r with r^2 = -3 (mod m) and r = sqrt(-3) (mod alpha), for alpha a degree-1 prime."""
    alpha = as_eis(alpha)
    m = alpha.norm()
    if not sympy.isprime(m) or m % 3 != 1:
        raise ValueError(f"norm {m} is not a split rational prime")
    for r in sympy.ntheory.residue_ntheory.sqrt_mod(-3, m, all_roots=True):
        if alpha.divides(EisInt(r) - SQRT_M3):
            return int(r)
    raise AssertionError(f"no root of -3 mod {m} is congruent to sqrt(-3) mod {alpha}")


@lru_cache(maxsize=None)
def split_rational_prime(p: int) -> EisInt:
    """A primary prime above the rational prime p = 1 (mod 3)."""
    r = int(sympy.ntheory.residue_ntheory.sqrt_mod(-3, p))
    pi = gcd(EisInt(p), EisInt((1 - r) // 2 if r % 2 else (1 - r - p) // 2, 1))
    assert pi.norm() == p
    return pi


def factor(g: EisInt):
    """Factorization into primary primes (and sqrt(-3), inert primes) times a unit.

    Returns (unit, [(prime, exponent), ...]) with unit * prod(prime^e) == g.
    """
    g = as_eis(g)
    if g == ZERO:
        raise ValueError("cannot factor 0")
    factors = []
    rest = g
    for p, e in sorted(sympy.factorint(g.norm()).items()):
        if p == 3:
            pi = SQRT_M3
            while pi.divides(rest):
                rest = rest.exact_div(pi)
                factors.append(pi)
        elif p % 3 == 2:
            pi = EisInt(p)
            while pi.divides(rest):
                rest = rest.exact_div(pi)
                factors.append(pi)
        else:
            pi = split_rational_prime(p)
            for q in (pi, pi.conj()):
                qq = primary_associate(q)[1]
                while qq.divides(rest):
                    rest = rest.exact_div(qq)
                    factors.append(qq)
    assert rest.is_unit(), f"leftover non-unit {rest} factoring {g}"
    counted = []
    for pi in factors:
        for i, (q, e) in enumerate(counted):
            if q == pi:
                counted[i] = (q, e + 1)
                break
        else:
            counted.append((pi, 1))
    return rest, counted
