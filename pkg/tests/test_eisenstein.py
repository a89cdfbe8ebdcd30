import random

import pytest

from sextic.eisenstein import (
    CUBE_ROOTS,
    EisInt,
    IdealRep,
    OMEGA,
    ONE,
    SQRT_M3,
    UNITS,
    ZERO,
    crt_base_point,
    factor,
    format_eis,
    gcd,
    generator_decomposition,
    ideal_basis,
    make_ideal,
    mod4_class,
    mod4_normalize,
    parse_eis,
    primary_associate,
    sqrt_minus3_mod,
)

rng = random.Random(20240811)


def rand_eis(bound=50):
    return EisInt(rng.randint(-bound, bound), rng.randint(-bound, bound))


def test_norm_values():
    assert SQRT_M3.norm() == 3
    assert ZERO.norm() == 0
    assert EisInt(1, 3).norm() == 7  # 1 - 3 + 9


def test_norm_multiplicative():
    for _ in range(200):
        x, y = rand_eis(), rand_eis()
        assert (x * y).norm() == x.norm() * y.norm()


def test_units_distinct():
    for _ in range(50):
        g = rand_eis()
        if g == ZERO:
            continue
        assert len({u * g for u in UNITS}) == 6


def test_conj_and_trace():
    for _ in range(100):
        g = rand_eis()
        assert g * g.conj() == EisInt(g.norm())
        assert (g + g.conj()) == EisInt(g.trace())


def test_divmod_euclidean():
    for _ in range(300):
        x, y = rand_eis(), rand_eis()
        if y == ZERO:
            continue
        q, r = x.divmod(y)
        assert q * y + r == x
        assert 4 * r.norm() <= 3 * y.norm()


def test_parse_format_roundtrip():
    assert parse_eis("1+3*w") == EisInt(1, 3)
    assert parse_eis("-2-3*w") == EisInt(-2, -3)
    assert parse_eis("w") == OMEGA
    assert parse_eis("5") == EisInt(5)
    for _ in range(100):
        g = rand_eis()
        assert parse_eis(format_eis(g)) == g


def test_primary_associate():
    u, g = primary_associate(ONE)
    assert (u, g) == (ONE, ONE)
    u, g = primary_associate(EisInt(3, 1))
    assert g == EisInt(-2, -3) and u * EisInt(3, 1) == g
    u, g = primary_associate(EisInt(2, 3))
    assert g == EisInt(-2, -3) and u == -ONE


def test_primary_associate_conjugation_commutes():
    for _ in range(200):
        g = rand_eis()
        if g == ZERO or g.norm() % 3 == 0:
            continue
        assert primary_associate(g.conj())[1] == primary_associate(g)[1].conj()


def test_primary_unique():
    for _ in range(100):
        g = rand_eis()
        if g == ZERO or g.norm() % 3 == 0:
            continue
        prim = [u * g for u in UNITS if ((u * g).a - 1) % 3 == 0 and (u * g).b % 3 == 0]
        assert len(prim) == 1


def test_mod4_normalize():
    assert mod4_normalize(ONE) == (ONE, ONE, "+1")
    u, g, cls = mod4_normalize(SQRT_M3)
    assert (u, g, cls) == (ONE, SQRT_M3, "+sqrt(-3)")
    # every odd-norm element lands in exactly one admissible class
    for _ in range(300):
        g = rand_eis()
        if g == ZERO or g.norm() % 2 == 0:
            continue
        u, g2, cls = mod4_normalize(g)
        assert u in CUBE_ROOTS and u * g == g2
        assert mod4_class(g2) == cls


def test_mod4_normalize_rejects_even_norm():
    with pytest.raises(ValueError):
        mod4_normalize(EisInt(2, 0))


def test_ideal_basis_norm7():
    A = ideal_basis(EisInt(1, 3))
    assert A.a == 7 and A.b in (5, 9)
    assert (A.b * A.b + 3) % 28 == 0
    # the two primes above 7 get the two residues
    B = ideal_basis(EisInt(1, 3).conj())
    assert {A.b, B.b} == {5, 9}


def test_ideal_basis_trivial():
    A = ideal_basis(ONE)
    assert (A.a, A.b) == (1, 1)


def test_ideal_basis_norm13():
    g = gcd(EisInt(13), EisInt(1, 1) * EisInt(3, 1))  # some element of norm 13? fallback
    A = ideal_basis(EisInt(1, 4))
    assert A.a == 13 and (A.b * A.b + 3) % 52 == 0


def test_generator_decomposition_roundtrip():
    for _ in range(1000):
        a = rng.choice([7, 13, 19, 31, 37, 43, 49, 91])
        residues = [b for b in range(2 * a) if b % 2 and (b * b + 3) % (4 * a) == 0]
        if not residues:
            continue
        A = make_ideal(rng.choice(residues), a)
        t, s = rng.randint(-20, 20), rng.randint(-20, 20)
        k = EisInt(t * A.a) + EisInt(s) * A.second_basis_elt()
        assert generator_decomposition(A, k) == (t, s)


def test_generator_decomposition_basis_vectors():
    A = make_ideal(5, 7)
    assert generator_decomposition(A, EisInt(7)) == (1, 0)
    assert generator_decomposition(A, A.second_basis_elt()) == (0, 1)


def test_make_ideal_gen_generates():
    for a in (7, 13, 19, 31, 49, 91, 133):
        for b in range(2 * a):
            if b % 2 and (b * b + 3) % (4 * a) == 0:
                A = make_ideal(b, a)
                assert A.gen.norm() == a
                assert A.gen.divides(EisInt(a))
                assert A.gen.divides(A.second_basis_elt())


def test_crt_base_point():
    assert crt_base_point([(1, 2)]) == 1
    assert crt_base_point([(1, 6), (2, 7)]) == 37
    assert crt_base_point([(1, 2), (0, 3)]) == 3
    with pytest.raises(ValueError):
        crt_base_point([(0, 2), (1, 2)])


def test_sqrt_minus3_mod():
    alpha = EisInt(1, 3)
    r = sqrt_minus3_mod(alpha)
    assert (r * r + 3) % 7 == 0
    assert alpha.divides(EisInt(r) - SQRT_M3)
    # conjugate picks the other root
    r2 = sqrt_minus3_mod(alpha.conj())
    assert (r + r2) % 7 == 0 and r != r2
    for g in (EisInt(1, 4), EisInt(5, 2), EisInt(6, 1)):
        m = g.norm()
        r = sqrt_minus3_mod(g)
        assert (r * r + 3) % m == 0


def test_factor_examples():
    u, fs = factor(EisInt(7))
    assert u.is_unit()
    assert sorted(f.norm() for f, _ in fs) == [7, 7]
    u, fs = factor(EisInt(2))
    assert fs == [(EisInt(2), 1)]
    u, fs = factor(SQRT_M3)
    assert fs == [(SQRT_M3, 1)]


def test_factor_roundtrip():
    for _ in range(100):
        g = rand_eis(30)
        if g == ZERO:
            continue
        u, fs = factor(g)
        prod = u
        for p, e in fs:
            prod = prod * p**e
        assert prod == g


def test_gcd_properties():
    for _ in range(200):
        x, y = rand_eis(), rand_eis()
        if x == ZERO and y == ZERO:
            continue
        g = gcd(x, y)
        if g != ZERO:
            assert g.divides(x) and g.divides(y)
