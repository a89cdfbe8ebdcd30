"""Ring class groups of orders Z + f*Z[w], with ideal representatives and CM points.

Classes are detected by mapping each primitive ideal [a, (-b+sqrt(-3))/2]
coprime to the order to the reduced binary quadratic form of
(a, -b*f, f^2(b^2+3)/(4a)) of discriminant -3f^2; equal reduced forms means
equal classes. A direct principality test (same_class) provides the
independent characterization used by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .eisenstein import (
    EisInt,
    IdealRep,
    UNITS,
    _sqrt_minus3_residues,
    make_ideal,
)


@lru_cache(maxsize=None)
def class_number(f: int) -> int:
    """h of the order Z + f*Z[w]: (f/3) * prod_{p|f} (1 - (-3|p)/p) for f > 1."""
    if f < 1:
        raise ValueError("conductor must be positive")
    if f == 1:
        return 1
    h = Fraction(f, 3)
    for p in sympy.factorint(f):
        h *= Fraction(p - sympy.kronecker_symbol(-3, p), p)
    assert h.denominator == 1 and h > 0
    return int(h)


@lru_cache(maxsize=None)
def reduced_form_count(disc: int) -> int:
    """Primitive reduced forms (a,b,c) of discriminant disc < 0: brute-force oracle."""
    assert disc < 0 and disc % 4 in (0, 1)
    count = 0
    b = disc % 2
    while b * b <= -disc // 3:
        m = (b * b - disc) // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    count += 1
                    if 0 < b < a < c:  # (a,-b,c) also reduced
                        count += 1
            a += 1
        b += 2
    return count


def reduce_form(a: int, b: int, c: int):
    """Gauss-reduced representative of the proper equivalence class of (a,b,c)."""
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # normalize b into (-a, a]
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c = a * r * r + b * r + c
            b = b2
            continue
        break
    if a == c and b < 0:
        b = -b
    if b == -a:
        b = a
    return a, b, c


@dataclass(frozen=True)
class CMPoint:
    """(-b + sqrt(-3))/(2a), stored exactly."""

    b: int
    a: int

    @property
    def re(self) -> Fraction:
        return Fraction(-self.b, 2 * self.a)

    def im_squared(self) -> Fraction:
        return Fraction(3, 4 * self.a * self.a)


def cm_point(A: IdealRep) -> CMPoint:
    return CMPoint(b=A.b % (2 * A.a), a=A.a)


def class_key(A: IdealRep, f: int):
    """Reduced form of the order-f class of A (ideals coprime to f only)."""
    c = (A.b * A.b + 3) // (4 * A.a)
    return reduce_form(A.a, -A.b * f, c * f * f)


def same_class(A: IdealRep, B: IdealRep, f: int) -> bool:
    """[A] = [B] in Cl(O_f): a generator of A*conj(B) has a unit multiple in Z + f Z[w]."""
    g = A.gen * B.gen.conj()
    for u in UNITS:
        cand = u * g
        if cand.b % f == 0 and math.gcd(cand.a, f) == 1:
            return True
    return False


@dataclass
class RingClassGroup:
    """Representatives of Cl(Z + f*Z[w]), each coprime to the stored modulus L."""

    f: int
    L: int
    h: int = 0
    reps: list = field(default_factory=list)


SEARCH_BOUND_FLOOR = 10**6


@lru_cache(maxsize=None)
def enumerate_classes(f: int, coprime_to: int) -> RingClassGroup:
    """Walk primitive ideals (a ascending, gcd(a, L) = 1) until every class is seen.

    Deterministic: representatives are the lexicographically first (a, b) in
    each class, so they have the minimal admissible norm.
    """
    L = int(coprime_to)
    if L % f != 0:
        L *= f // math.gcd(L, f)
    h = class_number(f)
    group = RingClassGroup(f=f, L=L, h=h)
    seen = {}
    bound = max(SEARCH_BOUND_FLOOR, 50 * f * h)
    a = 0
    while len(seen) < h:
        a += 1
        if a > bound:
            raise RuntimeError(f"class search bound exceeded for f={f}, L={L}")
        if math.gcd(a, L) != 1:
            continue
        for b in _sqrt_minus3_residues(a):
            A = make_ideal(b, a)
            key = class_key(A, f)
            if key not in seen:
                seen[key] = A
                group.reps.append(A)
    return group


def group_to_json(g: RingClassGroup):
    return {
        "f": g.f,
        "h": g.h,
        "reps": [(A.a, A.b, str(A.gen)) for A in g.reps],
    }
