"""Independent verification layer: Hecke coefficients, point counts, the
approximate functional equation for L(1,chi), and a naive point search.

Coefficients a_n = sum over ideals of norm n of chi(A) are built exactly in
Z[w] by multiplying local Euler factors, so multiplicativity and the Hasse
bound are exact statements. The AFE solves a 2x2 system for (L(1), eps) from
two smoothing parameters; the analytic level is found by a stability scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import sympy
from gmpy2 import mpc, mpfr

from .eisenstein import EisInt, primary_associate, split_rational_prime
from .hp import eis_to_mpc, precision, root_of_unity6
from .symbols import CharacterContext, chi_d, quad_symbol


@dataclass
class HeckeCoefficients:
    cutoff: int
    coeffs: list  # index n -> EisInt-pair accumulated exactly... (a, b) with value a + b*w

    def a(self, n: int) -> EisInt:
        return self.coeffs[n]


def _chi_of_prime(ctx: CharacterContext, pi: EisInt) -> EisInt:
    """chi(pi) = phi(pi) * chi_D(pi) * eps(pi) as an exact element."""
    phi = primary_associate(pi)[1]
    cd = chi_d(ctx.d, pi)
    q = quad_symbol(ctx.alpha, pi)
    omega_pow = (EisInt(1), EisInt(0, 1), EisInt(-1, -1))[cd.exp]
    return q * phi * omega_pow


def hecke_an(ctx: CharacterContext, cutoff: int) -> HeckeCoefficients:
    """a_n for n <= cutoff over ideals coprime to 6 D m."""
    bad = 6 * ctx.d * ctx.m
    coeffs = [EisInt(0)] * (cutoff + 1)
    coeffs[1] = EisInt(1)
    for p in sympy.primerange(2, cutoff + 1):
        if bad % p == 0:
            continue
        if p % 3 == 2:
            # inert: chi((p)) at norm p^2
            if p * p > cutoff:
                continue
            vals = {0: EisInt(1)}
            chi_p = _chi_of_prime(ctx, EisInt(p))
            powers = [EisInt(1)]
            k = 1
            while p ** (2 * k) <= cutoff:
                powers.append(powers[-1] * chi_p)
                k += 1
            new = coeffs[:]
            for k in range(1, len(powers)):
                step = p ** (2 * k)
                for n in range(1, cutoff // step + 1):
                    if coeffs[n]:
                        new[n * step] = new[n * step] + coeffs[n] * powers[k]
            coeffs = new
        elif p == 3:
            continue  # ramified, excluded by coprimality to 6Dm... (3 | 6)
        else:
            pi = split_rational_prime(p)
            for pr in (pi, pi.conj()):
                chi_p = _chi_of_prime(ctx, pr)
                powers = [EisInt(1)]
                k = 1
                while p**k <= cutoff:
                    powers.append(powers[-1] * chi_p)
                    k += 1
                new = coeffs[:]
                for k in range(1, len(powers)):
                    step = p**k
                    for n in range(1, cutoff // step + 1):
                        if coeffs[n]:
                            new[n * step] = new[n * step] + coeffs[n] * powers[k]
                coeffs = new
    return HeckeCoefficients(cutoff=cutoff, coeffs=coeffs)


def point_count_check(ctx: CharacterContext, p: int) -> bool:
    """#E(F_p) at a split place vs the character: exact equality."""
    assert p % 3 == 1 and (6 * ctx.d * ctx.m) % p != 0
    pi = split_rational_prime(p)
    ok = True
    for pr in (pi, pi.conj()):
        t = (-pr.a * pow(pr.b, -1, p)) % p  # image of w in F_p
        alpha_p = (ctx.alpha.a + ctx.alpha.b * t) % p
        c = (16 * ctx.d * ctx.d * pow(alpha_p, 3, p)) % p
        count = p + 1  # infinity + x-loop below
        for x in range(p):
            rhs = (x * x * x + c) % p
            if rhs == 0:
                count += 1
            elif pow(rhs, (p - 1) // 2, p) == 1:
                count += 2
        chi_v = _chi_of_prime(ctx, pr)
        a_v = chi_v.trace()  # chi + conj(chi)
        if p + 1 - count != a_v:
            ok = False
    return ok


@dataclass
class AFEResult:
    l1: mpc
    eps: mpc
    level: int
    stability: float


def afe_l_value(coeffs: HeckeCoefficients, level: int, t1: float, t2: float, prec: int) -> AFEResult:
    """L(1) = sum a_n/n e^{-2 pi n t/sqrt(N)} + eps sum conj(a_n)/n e^{-2 pi n/(t sqrt(N))}."""
    with precision(prec):
        sq = gmpy2.sqrt(mpfr(level))
        two_pi = 2 * gmpy2.const_pi()

        def sums(t):
            x1 = gmpy2.exp(-two_pi * mpfr(t) / sq)
            x2 = gmpy2.exp(-two_pi / (mpfr(t) * sq))
            a_s = mpc(0)
            b_s = mpc(0)
            p1 = mpfr(1)
            p2 = mpfr(1)
            for n in range(1, coeffs.cutoff + 1):
                p1 *= x1
                p2 *= x2
                an = coeffs.coeffs[n]
                if an:
                    av = eis_to_mpc(an)
                    a_s += av / n * p1
                    b_s += mpc(av.real, -av.imag) / n * p2
            return a_s, b_s

        a1, b1 = sums(t1)
        a2, b2 = sums(t2)
        # solve L - eps*b_i = a_i
        det = b2 - b1
        if abs(det) < mpfr(2) ** (-prec // 2):
            raise ArithmeticError("singular AFE system (t1 too close to t2)")
        eps = (a1 - a2) / det
        l1 = a1 + eps * b1
        return AFEResult(l1=l1, eps=eps, level=level, stability=0.0)


def conductor_candidates(ctx: CharacterContext):
    """3 * norms of divisors of (sqrt-3)^a (3D)(4 alpha)."""
    cands = set()
    d_divs = [d for d in sympy.divisors(ctx.d)]
    for a3 in (0, 1, 2, 3, 4):
        for dd in d_divs:
            for am in (1, ctx.m):
                for a2 in (1, 4, 16):
                    n = 3 * (3**a3) * dd * dd * am * a2
                    cands.add(n)
    return sorted(cands)


def conductor_search(ctx: CharacterContext, coeffs: HeckeCoefficients, prec: int):
    """Pick the level minimizing the two-pair AFE instability with |eps| near 1."""
    best = None
    for n in conductor_candidates(ctx):
        try:
            r1 = afe_l_value(coeffs, n, 1.0, 1.3, prec)
            r2 = afe_l_value(coeffs, n, 0.9, 1.21, prec)
        except ArithmeticError:
            continue
        stab = float(abs(r1.l1 - r2.l1))
        eps_ok = abs(float(abs(r1.eps)) - 1.0)
        scorekey = (stab + eps_ok, n)
        if best is None or scorekey < best[0]:
            best = (scorekey, n, r1, stab)
    _, n, res, stab = best
    res.stability = stab
    return res


def naive_point_search(ctx: CharacterContext, height: int = 50):
    """x = (u + v w)/wd with |u|,|v| <= H, 1 <= wd <= H: exact K-point test.

    Returns the list of points found as (x_num, wd, y_num, y_den) with
    y = y_num / wd^(3/2)-free exact representation (y_num in Z[w], y = y_num/wd_cubed).
    """
    c_base = EisInt(16 * ctx.d * ctx.d) * ctx.alpha**3
    found = []
    for wd in range(1, height + 1):
        w6 = wd**6
        cw = c_base * w6
        for u in range(-height, height + 1):
            for v in range(-height, height + 1):
                if math.gcd(math.gcd(abs(u), abs(v)), wd) != 1:
                    continue
                x = EisInt(u, v)
                rhs = x**3 + cw
                y = _eis_sqrt(rhs)
                if y is not None:
                    found.append((str(x), wd, str(y)))
    return found


def _eis_sqrt(z: EisInt):
    """A square root of z in Z[w], or None."""
    if z == EisInt(0):
        return EisInt(0)
    n = z.norm()
    r = math.isqrt(n)
    if r * r != n:
        return None
    # z = (x + y w)^2: solve via the quadratic field embedding: write
    # z = A + B sqrt(-3) with A = a - b/2 doubled to stay integral
    twoA = 2 * z.a - z.b  # 2*Re
    B = z.b  # coefficient of sqrt(-3) is b/2; track twice: sqrt(-3)-part = b/2
    # candidate: y^2 = z with y = (p + q w): expand (p+qw)^2 = p^2 - q^2... use norm:
    # N(y) = r, Tr(y^2) = Tr(z) -> Tr(y)^2 = Tr(z) + 2r
    t2 = z.trace() + 2 * r
    if t2 >= 0:
        t = math.isqrt(t2)
        if t * t == t2:
            for tr in (t, -t):
                # y + conj(y) = tr, y*conj(y) = r -> y is a root of X^2 - tr X + r
                disc = tr * tr - 4 * r
                if disc > 0:
                    continue
                # y = (tr + sqrt(disc))/2 with sqrt(disc) = s*sqrt(-3): disc = -3 s^2
                if disc % 3 != 0:
                    continue
                s2 = -disc // 3
                s = math.isqrt(s2)
                if s * s != s2:
                    continue
                for ss in (s, -s):
                    # y = (tr + ss*sqrt(-3))/2 = (tr + ss)/2 ... in (1, w): (tr+ss)/2? no:
                    # y = tr/2 + ss*sqrt(-3)/2 = (tr + ss)/2 + ss*w... since sqrt(-3) = 1 + 2w
                    if (tr + ss) % 2:
                        continue
                    y = EisInt((tr + ss) // 2, ss)
                    if y * y == z:
                        return y
    # also try y with negative norm pairing (r could pair with -t2 case): covered by +-t
    t2 = z.trace() - 2 * r
    # y*conj(y) = -r impossible (norms nonnegative)
    return None


def oracle_report(ctx: CharacterContext, report, prec: int = 192):
    """Point counts, AFE agreement and the solvability falsifier for one curve."""
    out = {}
    ok_all = True
    tested = 0
    for p in sympy.primerange(5, 200):
        if p % 3 != 1 or (6 * ctx.d * ctx.m) % p == 0:
            continue
        tested += 1
        if not point_count_check(ctx, p):
            ok_all = False
    out["point_counts_ok"] = ok_all
    out["point_count_primes"] = tested
    cutoff = _afe_cutoff(ctx)
    coeffs = hecke_an(ctx, cutoff)
    res = conductor_search(ctx, coeffs, prec=96)
    s_exact = report.s_thm2["s_exact"]
    with precision(96):
        s_oracle = float(abs(res.l1) ** 2 / (report.tam.total * mpfr(report.omega_sq)))
    denom = max(float(s_exact), s_oracle, 1e-12)
    out["oracle_S"] = s_oracle
    out["rel_err"] = abs(s_oracle - float(s_exact)) / denom
    out["level_used"] = res.level
    out["eps"] = complex(float(res.eps.real), float(res.eps.imag))
    out["eps_abs_err"] = abs(abs(out["eps"]) - 1.0)
    out["afe_stability"] = res.stability
    return out


def _afe_cutoff(ctx: CharacterContext) -> int:
    nmax = max(conductor_candidates(ctx))
    # tails below 1e-10 * slack at t as small as 0.9
    return int(26.0 * math.sqrt(nmax) / (2 * math.pi * 0.9)) + 64
