import math
import random

import gmpy2
import pytest
from gmpy2 import mpc, mpfr

from sextic.hp import QPoint, half_point, precision
from sextic.theta import (
    PrecisionExhausted,
    _char_expansion,
    _qseries,
    coefficients,
    eisenstein_central,
    eisenstein_weighted_lattice,
    level_data,
    params_for_m,
    reduce_argument,
    sl2_reduce,
    theta_k_value,
    theta_m_value,
    theta_value,
    truncation_terms,
)

PREC = 192
rng = random.Random(918273)


def rand_point(max_den=40):
    while True:
        r = rng.randint(1, max_den)
        p = rng.randint(-3 * r, 3 * r)
        q = rng.randint(1, r)
        try:
            return QPoint(p, q, r)
        except ValueError:
            continue


def test_qexpansion_leading_terms():
    # theta_K = 1 + 6q + 0q^2 + 6q^3 + 6q^4 + 0q^5 + ...
    c = coefficients(3, 8)
    assert list(c[:8]) == [1, 6, 0, 6, 6, 0, 0, 12]
    # m = 5: level 15, h = 2; coefficient of q^3 is 2((1/15)+(3/15)) = 2,
    # and of q^2 is 2((1/15)+(2/15)) = 4 since 2 is a square mod 15
    c15 = coefficients(15, 4)
    assert list(c15[:4]) == [2, 2, 4, 2]


def test_coefficients_match_bruteforce_divisor_sums():
    for n in (3, 15, 84, 52):
        arr = coefficients(n, 2000)
        ld = level_data(n)
        for k in (1, 2, 3, 50, 997, 1024, 1999):
            s = sum(ld.chi[d % n] for d in range(1, k + 1) if k % d == 0)
            assert arr[k] == ld.u * s, (n, k)


def test_constant_term_at_high_imag():
    # im -> infinity: theta -> h
    for m in (5, 7, 13):
        pm = params_for_m(m)
        z = QPoint(0, 10**6, 1)
        with precision(PREC + 32):
            v = theta_value(pm.level, z, PREC)
        assert abs(v - pm.h) < mpfr(2) ** -150


def test_special_values_paper():
    with precision(PREC + 32):
        tk = theta_k_value(half_point(-1), PREC)
        target = gmpy2.gamma(mpfr(1) / 3) ** 3 / (2 * gmpy2.const_pi() ** 2)
        assert abs(tk - target) < mpfr(10) ** -30
        om = mpc(mpfr(-1) / 2, gmpy2.sqrt(mpfr(3)) / 2)
        v1 = theta_k_value(QPoint(-3, 1, 18), PREC)
        v2 = theta_k_value(QPoint(9, 1, 18), PREC)
        assert abs(v1 + 3 * om * tk) < mpfr(10) ** -25
        assert abs(v2 + 3 * tk) < mpfr(10) ** -25


def test_fricke_inversion():
    with precision(PREC + 32):
        for m in (5, 7, 13):
            n = params_for_m(m).level
            for _ in range(5):
                z = rand_point()
                lhs = theta_value(n, z, PREC)
                zf = z.neg_inv_scaled(n)
                rhs = zf.to_mpc() * mpc(0, -gmpy2.sqrt(mpfr(n))) * theta_value(n, zf, PREC)
                assert abs(lhs - rhs) < mpfr(10) ** -25


def test_gamma0_modularity():
    with precision(PREC + 32):
        for m in (5, 7, 13):
            n = params_for_m(m).level
            ld = level_data(n)
            done = 0
            while done < 8:
                c = n * rng.randint(-3, 3)
                d = rng.randint(-9, 9)
                if c == 0 or math.gcd(c, d) != 1 or ld.chi[d % n] == 0:
                    continue
                a = pow(d, -1, abs(c)) if abs(c) > 1 else 1
                b = (a * d - 1) // c
                if a * d - b * c != 1:
                    continue
                z = rand_point()
                gz = z.mobius(a, b, c, d)
                lhs = theta_value(n, gz, PREC)
                rhs = ld.chi[d % n] * (c * z.to_mpc() + d) * theta_value(n, z, PREC)
                assert abs(lhs - rhs) < mpfr(10) ** -25
                done += 1


def test_averaging_lemma():
    with precision(PREC + 32):
        for m in (5, 7):
            n = params_for_m(m).level
            for d in [x for x in (2, 3, 5, 7, n // 3) if n % x == 0]:
                z = rand_point(25)
                s = mpc(0)
                for j in range(d):
                    s += theta_value(n, QPoint(z.p * d + j * z.r, z.q * d, z.r * d), PREC)
                rhs = d * theta_value(n, z.scale(d, 1), PREC)
                assert abs(s - rhs) < mpfr(10) ** -25


def test_siegel_weil():
    with precision(PREC + 32):
        for m in (5, 7, 13):
            n = params_for_m(m).level
            for _ in range(2):
                z = rand_point(8)
                e = eisenstein_central(z, n, PREC)
                rhs = 2 * gmpy2.const_pi() / gmpy2.sqrt(mpfr(n)) * theta_value(n, z, PREC)
                assert abs(e - rhs) < mpfr(10) ** -25
        # constant term alone: E has constant 2L(1,chi) = 2 pi h/sqrt(N)
        n = 15
        z = QPoint(0, 1000, 1)
        e = eisenstein_central(z, n, PREC)
        target = 2 * gmpy2.const_pi() * level_data(n).h / gmpy2.sqrt(mpfr(n))
        assert abs(e - target) < mpfr(10) ** -40


def test_weighted_lattice_identity():
    with precision(PREC + 32):
        n = 15
        z = QPoint(0, 1, 1)  # z = i/sqrt(3)... actually (0 + sqrt(-3))/1
        val = eisenstein_weighted_lattice(z, n, PREC)
        rhs = mpc(0, -2 * gmpy2.const_pi()) * theta_value(n, z, PREC)
        assert abs(val - rhs) < mpfr(10) ** -25


def test_char_expansion_matches_direct_series():
    with precision(PREC + 32):
        for m in (5, 13):
            n = params_for_m(m).level
            ld = level_data(n)
            for a in (7, 11, 23):
                z = QPoint(1, 1, 6 * a)
                w, (p, q, r, s) = sl2_reduce(z)
                g = math.gcd(r % n, n)
                if not 0 < g < n:
                    continue
                direct = _qseries(n, z, PREC)
                e_val = (r * w.to_mpc() + s) * _char_expansion(n, w, r, s, PREC)
                char = mpfr(ld.u) / 2 * gmpy2.sqrt(mpfr(n)) / (2 * gmpy2.const_pi()) * e_val
                assert abs(direct - char) < mpfr(10) ** -25


def test_sl2_reduce():
    for _ in range(200):
        z = rand_point(60)
        w, (p, q, r, s) = sl2_reduce(z)
        assert p * s - q * r == 1
        assert 2 * abs(w.p) <= w.r  # |re| <= 1/2
        assert w.norm_sq_num() >= w.r * w.r  # |w| >= 1
        # z = gamma * w exactly
        assert w.mobius(p, q, r, s) == z


def test_reduce_argument_consistency():
    with precision(PREC + 32):
        n = 15
        for _ in range(8):
            # random exact points with small imaginary part (im ~ 1e-2)
            den = rng.randint(40, 90)
            z = QPoint(rng.randint(-3 * den, 3 * den), 1, den)
            zr, mult, moves = reduce_argument(z, n)
            assert zr.im_float() >= z.im_float()
            direct = _qseries(n, z, PREC)  # high term count
            via = mult * theta_value(n, zr, PREC)
            assert abs(direct - via) < mpfr(10) ** -20, (z, moves)


def test_reduce_argument_identity_when_high():
    with precision(PREC + 32):
        z = QPoint(1, 5, 3)
        zr, mult, moves = reduce_argument(z, 15)
        assert zr == z and abs(mult - 1) == 0


def test_truncation_bounds():
    t1 = truncation_terms(1.0, 128)
    assert 10 < t1 < 60
    t2 = truncation_terms(1.0, 256)
    assert t2 > t1
    assert truncation_terms(0.5, 128) > t1
    with pytest.raises(PrecisionExhausted):
        truncation_terms(1e-9, 192)


def test_translation_invariance():
    with precision(PREC + 32):
        n = 39
        z = rand_point()
        assert abs(theta_value(n, z, PREC) - theta_value(n, z.add_int(3), PREC)) < mpfr(10) ** -40
