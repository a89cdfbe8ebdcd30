"""Weight-1 theta series of imaginary quadratic fields, evaluated anywhere.

For level N (= 3 or 3m*) and the odd character chi = kronecker(-N, .):

    theta_N(z) = h_N + u_N * sum_{n>=1} (sum_{d|n} chi(d)) q^n.

Evaluation strategy per point, chosen by exact cost estimates:
  * q-series directly when im(z) is large enough;
  * reduce z = gamma*w into the SL2(Z) fundamental domain; if gamma is in
    Gamma0(N) (possibly after the Fricke flip -1/(Nz)), apply the modular
    transformation chi(d)(cz+d) and sum the q-series at w;
  * otherwise use the regularized lattice-sum representation: theta is
    (u/2)(sqrt(N)/2pi) times the central value of the character-weighted
    Eisenstein series, whose congruence characteristics transform linearly
    under any gamma in SL2(Z). Each transformed characteristic has an
    explicit Fourier expansion (Hecke trick) with elementary constant term,
    so the value at the cusp of z costs O(N * prec / im(w)) series terms.
All arithmetic on points is exact until the final complex evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .classgroups import reduced_form_count
from .hp import GUARD_BITS, QPoint, precision

MAX_SERIES_TERMS = 2 * 10**6
_CHAR_OVERHEAD = 3.0  # weight of the coefficient assembly vs plain series terms


class PrecisionExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class ThetaParams:
    """Level data for theta of Q(sqrt(-3m)): level 3m*, class number, unit count."""

    mstar: int
    h: int
    u: int

    @property
    def level(self) -> int:
        return 3 * self.mstar


def params_for_m(m: int) -> ThetaParams:
    mstar = m if m % 4 == 1 else 4 * m
    n = 3 * mstar
    return ThetaParams(mstar=mstar, h=reduced_form_count(-n), u=(6 if m == 1 else 2))


@lru_cache(maxsize=None)
class _LevelData:
    def __init__(self, n: int):
        self.n = n
        self.chi = tuple(int(gmpy2.kronecker(-n, k)) for k in range(n))
        self.h = reduced_form_count(-n)
        self.u = 6 if n == 3 else 2
        self._w_consts = {}
        self._coeffs = np.zeros(0, dtype=np.int64)

    def w_const(self, r: int) -> int:
        """sum over a2 mod n of chi(a2) * ((a2*r) mod n)."""
        r %= self.n
        if r not in self._w_consts:
            self._w_consts[r] = sum(
                self.chi[a] * ((a * r) % self.n) for a in range(self.n)
            )
        return self._w_consts[r]

    def coeffs(self, t: int) -> np.ndarray:
        """Divisor sums c(k) = sum_{d|k} chi(d) for k <= t."""
        if len(self._coeffs) <= t:
            size = max(2 * len(self._coeffs), t + 1, 4096)
            arr = np.zeros(size, dtype=np.int64)
            for d in range(1, size):
                ch = self.chi[d % self.n]
                if ch:
                    arr[d::d] += ch
            self._coeffs = arr
        return self._coeffs


def level_data(n: int) -> _LevelData:
    return _LevelData(n)


@lru_cache(maxsize=8)
def _zeta_table(n: int, prec: int):
    with precision(prec):
        two_pi = 2 * gmpy2.const_pi()
        return tuple(
            mpc(gmpy2.cos(two_pi * k / n), gmpy2.sin(two_pi * k / n)) for k in range(n)
        )


def truncation_terms(im_z: float, prec: int, max_terms: int = MAX_SERIES_TERMS) -> int:
    """Smallest T with sum_{n>T} 2n e^{-2 pi n im_z} < 2^{-prec-8}."""
    if im_z <= 0:
        raise ValueError("point not in the upper half plane")
    x = 2 * math.pi * im_z
    target = (prec + 8) * math.log(2)
    # tail(T) = 2 e^{-x(T+1)} ((T+1)/(1-e^{-x}) + e^{-x}/(1-e^{-x})^2) < 2^{-prec-8}
    em = math.exp(-min(x, 50.0))
    t = max(int(target / x), 1)
    while True:
        log_tail = math.log(2.0) - x * (t + 1) + math.log((t + 1) / (1 - em) + em / (1 - em) ** 2)
        if log_tail < -target:
            return t
        t = max(t + 1, int(t * 1.2))
        if t > max_terms:
            raise PrecisionExhausted(
                f"needs {t} series terms at im(z) = {im_z:.3g} (max {max_terms})"
            )


def sl2_reduce(z: QPoint):
    """(w, (p,q,r,s)) with z = [[p,q],[r,s]]*w, det 1, w in the fundamental domain."""
    P, Q, R = z.p, z.q, z.r
    p_, q_, r_, s_ = 1, 0, 0, 1
    while True:
        k = (2 * P + R) // (2 * R)
        if k:
            P -= k * R
            q_ += p_ * k
            s_ += r_ * k
        if P * P + 3 * Q * Q < R * R:
            P, Q, R = -R * P, R * Q, P * P + 3 * Q * Q
            g = math.gcd(math.gcd(abs(P), Q), R)
            P, Q, R = P // g, Q // g, R // g
            p_, q_, r_, s_ = -q_, p_, -s_, r_
        else:
            break
    return QPoint(P, Q, R), (p_, q_, r_, s_)


def _qseries(n: int, w: QPoint, prec: int) -> mpc:
    ld = level_data(n)
    t = truncation_terms(w.im_float(), prec + 8)
    coeffs = ld.coeffs(t)
    two_pi = 2 * gmpy2.const_pi()
    zm = w.to_mpc()
    q = gmpy2.exp(mpc(-two_pi * zm.imag, two_pi * zm.real))
    acc = mpc(0)
    qpow = mpc(1)
    for k in range(1, t + 1):
        qpow *= q
        c = coeffs[k]
        if c:
            acc += int(c) * qpow
    return ld.h + ld.u * acc


def _char_series_cost(n: int, im_w: float, prec: int, g: int) -> float:
    t = (prec + 16) * math.log(2) * n / (2 * math.pi * im_w)
    return t * (2.0 + _CHAR_OVERHEAD * max(math.log(max(t / g, 2.0)), 1.0))


def _char_expansion(n: int, w: QPoint, r: int, s: int, prec: int) -> mpc:
    """CONST + FOURIER of the transformed regularized lattice sum.

    This is E_n(0, gamma*w)/(r*w+s) for gamma with bottom row (r, s),
    gcd(r, n) < n. The theta value is (u/2)(sqrt(n)/2pi)(r*w+s) times this.
    """
    ld = level_data(n)
    pi = gmpy2.const_pi()
    g = math.gcd(r % n, n)
    assert 0 < g < n
    const = mpc(0, 2 * pi / (n * n)) * ld.w_const(r)

    t = truncation_terms(w.im_float() / n, prec + 8 + max(g, 16).bit_length())
    zt = _zeta_table(n, gmpy2.get_context().precision)
    chi = ld.chi
    ng = n // g
    rpinv = pow((r // g) % ng, -1, ng) if ng > 1 else 0
    beta = [None] * (t + 1)
    for e in range(g, t + 1, g):
        a0 = (rpinv * (e // g)) % ng if ng > 1 else 0
        nmax = t // e
        for k in range(g):
            a2 = a0 + k * ng
            ch = chi[a2 % n]
            if ch == 0:
                continue
            step = (s * a2) % n
            idx = 0
            if ch == 1:
                for j in range(e, e * nmax + 1, e):
                    idx += step
                    if idx >= n:
                        idx -= n
                    beta[j] = zt[idx] if beta[j] is None else beta[j] + zt[idx]
            else:
                for j in range(e, e * nmax + 1, e):
                    idx += step
                    if idx >= n:
                        idx -= n
                    beta[j] = -zt[idx] if beta[j] is None else beta[j] - zt[idx]
    two_pi_over = 2 * pi / n
    zm = w.to_mpc()
    q = gmpy2.exp(mpc(-two_pi_over * zm.imag, two_pi_over * zm.real))
    acc = mpc(0)
    qpow = mpc(1)
    for l in range(1, t + 1):
        qpow *= q
        b = beta[l]
        if b is not None:
            acc += b * qpow
    fourier = mpc(0, -4 * pi / n) * acc
    return const + fourier


def theta_value(n: int, z: QPoint, prec: int) -> mpc:
    """theta_N(z) at working precision prec (plus guard bits)."""
    with precision(prec + GUARD_BITS):
        return _theta_inner(n, z, prec)


def _theta_inner(n: int, z: QPoint, prec: int) -> mpc:
    ld = level_data(n)
    w, (p_, q_, r_, s_) = sl2_reduce(z)
    if r_ % n == 0:
        fac = ld.chi[s_ % n] * (r_ * w.to_mpc() + s_)
        return fac * _qseries(n, w, prec)
    zf = z.neg_inv_scaled(n)
    wf, (pf, qf, rf, sf) = sl2_reduce(zf)
    if rf % n == 0:
        mult = zf.to_mpc() * mpc(0, -gmpy2.sqrt(mpfr(n)))
        fac = ld.chi[sf % n] * (rf * wf.to_mpc() + sf)
        return mult * fac * _qseries(n, wf, prec)
    # genuinely at another cusp: compare direct series against the
    # characteristic expansion and take the cheaper exact route
    g = math.gcd(r_ % n, n)
    char_cost = _char_series_cost(n, w.im_float(), prec, g)
    try:
        direct_terms = truncation_terms(z.im_float(), prec + 8)
    except PrecisionExhausted:
        direct_terms = None
    if direct_terms is not None and direct_terms < char_cost:
        return _qseries(n, z, prec)
    e_val = (r_ * w.to_mpc() + s_) * _char_expansion(n, w, r_, s_, prec)
    return mpfr(ld.u) / 2 * gmpy2.sqrt(mpfr(n)) / (2 * gmpy2.const_pi()) * e_val


def theta_m_value(m: int, z: QPoint, prec: int) -> mpc:
    """Theta of Q(sqrt(-3m)) (level 3m*)."""
    return theta_value(params_for_m(m).level, z, prec)


def theta_k_value(z: QPoint, prec: int) -> mpc:
    """Theta of Q(sqrt(-3)) (level 3): 1 + 6q + 6q^3 + 6q^4 + ..."""
    return theta_value(3, z, prec)


def coefficients(n: int, t: int):
    """q-expansion coefficients of theta_N up to q^t (integer array)."""
    ld = level_data(n)
    arr = ld.coeffs(t)[: t + 1] * ld.u
    arr = arr.copy()
    arr[0] = ld.h
    return arr


# ---------------------------------------------------------------------------
# Independent Eisenstein-series evaluation (oracle for the Siegel-Weil test)


def _cot(x: mpfr) -> mpfr:
    return gmpy2.cos(x) / gmpy2.sin(x)


def eisenstein_central(z, n: int, prec: int) -> mpc:
    """E_n(0, z): the central value of sum_{a2} chi(a2) E_0(z; 0, a2, n).

    Assembled term by term from the regularized Fourier expansion of each
    congruence characteristic; independent of the theta q-expansion.
    """
    with precision(prec + GUARD_BITS):
        ld = level_data(n)
        pi = gmpy2.const_pi()
        zm = z.to_mpc() if isinstance(z, QPoint) else mpc(z)
        im = float(zm.imag)
        t = truncation_terms(im, prec + 8)
        q = gmpy2.exp(mpc(-2 * pi * zm.imag, 2 * pi * zm.real))
        qpows = [mpc(1)]
        for _ in range(t):
            qpows.append(qpows[-1] * q)
        zt = _zeta_table(n, gmpy2.get_context().precision)
        total = mpc(0)
        for a2 in range(1, n):
            ch = ld.chi[a2]
            if ch == 0:
                continue
            const = (pi / n) * _cot(pi * mpfr(a2) / n)
            s_sum = mpc(0)
            for cp in range(1, t + 1):
                for k in range(1, t // cp + 1):
                    s_sum += (zt[(k * a2) % n] - zt[(-k * a2) % n]) * qpows[k * cp]
            total += ch * (const + mpc(0, -2 * pi / n) * s_sum)
        return total


def eisenstein_weighted_lattice(z, n: int, prec: int) -> mpc:
    """Central value of the lattice sum with the character on the first index:
    sum_{c,d} chi(c)/(cz+d), assembled characteristic by characteristic."""
    with precision(prec + GUARD_BITS):
        ld = level_data(n)
        pi = gmpy2.const_pi()
        zm = z.to_mpc() if isinstance(z, QPoint) else mpc(z)
        t = truncation_terms(float(zm.imag), prec + 8)
        q = gmpy2.exp(mpc(-2 * pi * zm.imag, 2 * pi * zm.real))
        qpows = [mpc(1)]
        for _ in range(t):
            qpows.append(qpows[-1] * q)
        total = mpc(0)
        for a1 in range(1, n):
            ch = ld.chi[a1]
            if ch == 0:
                continue
            const = mpc(0, -pi) * (1 - mpfr(2 * a1) / n)
            s_sum = mpc(0)
            for c in range(a1, t + 1, n):
                for k in range(1, t // c + 1):
                    s_sum += qpows[c * k]
            for c in range(n - a1, t + 1, n):
                for k in range(1, t // c + 1):
                    s_sum -= qpows[c * k]
            total += ch * (const + mpc(0, -2 * pi) * s_sum)
        return total


# ---------------------------------------------------------------------------
# Greedy argument reduction through the level-N transformation laws


def reduce_argument(z: QPoint, n: int):
    """Greedy T / Gamma0(n) / Fricke reduction on an exact point.

    Returns (z', multiplier, moves) with theta_n(z) = multiplier * theta_n(z')
    and im(z') >= im(z); moves are chosen by float estimates, applied exactly,
    and the multiplier is accumulated from the transformation laws.
    """
    ld = level_data(n)
    mult = mpc(1)
    moves = []
    for _ in range(400):
        k = (2 * z.p + z.r) // (2 * z.r)
        if k:
            z = z.add_int(-k)
            moves.append(("T", -k))
        im = z.im_float()
        best = None  # (new_im, tag, point, factor)
        # Fricke flip: theta(z) = (-1/(nz)) (sqrt(n)/i) theta(-1/(nz))
        zf = z.neg_inv_scaled(n)
        if zf.im_float() > im * (1 + 1e-12):
            best = (zf.im_float(), "W", zf, zf.to_mpc() * mpc(0, -gmpy2.sqrt(mpfr(n))))
        # Gamma0(n) moves: theta(gz) = chi(d)(cz+d) theta(z), so
        # theta(z) = chi(d)(c gz - a... ) -- move z to gz and divide.
        cmax = int(1 / (n * im)) + 1 if im > 0 else 1
        rez = z.p / z.r
        for tt in range(1, min(cmax, 64) + 1):
            c = n * tt
            d0 = -int(round(c * rez))
            for d in (d0, d0 + 1, d0 - 1):
                if d == 0 or math.gcd(c, d) != 1 or ld.chi[d % n] == 0:
                    continue
                den_sq = (c * z.p + d * z.r) ** 2 + 3 * (c * z.q) ** 2
                new_im = im * z.r * z.r / den_sq
                if new_im > im * (1 + 1e-12) and (best is None or new_im > best[0]):
                    a = pow(d, -1, c)
                    b = (a * d - 1) // c
                    factor = 1 / (ld.chi[d % n] * (c * z.to_mpc() + d))
                    best = (new_im, "G", z.mobius(a, b, c, d), factor)
        if best is None:
            break
        _, tag, znew, factor = best
        mult *= factor
        moves.append((tag, None))
        z = znew
    return z, mult, moves
