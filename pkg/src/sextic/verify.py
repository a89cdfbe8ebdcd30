"""Identity suites: every layer checked against its independent characterization.

Each suite returns Check records (name, residual, tolerance); the CLI's
`verify` command and the acceptance tests both run these.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .classgroups import class_number, enumerate_classes, reduced_form_count
from .eisenstein import EisInt, gcd as eis_gcd, primary_associate, split_rational_prime
from .hp import QPoint, eis_to_mpc, half_point, precision, root_of_unity6
from .symbols import (
    CharacterContext,
    chi_d,
    chi_omega,
    cubic_symbol,
    normalize_alpha,
    quad_symbol,
    quad_symbol_euler,
)
from .theta import (
    eisenstein_central,
    level_data,
    params_for_m,
    theta_value,
)
from .traces import (
    b0_star,
    c_alpha,
    chi_omega_mpc,
    d_alpha,
    d_over_3mstar,
    eps_sqrt3,
    named_trace,
    t_alpha,
    t_alpha_prime,
    u_alpha_b,
    zeta_branch_sign,
)


@dataclass
class Check:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tol

    def __str__(self):
        mark = "ok  " if self.passed else "FAIL"
        return f"[{mark}] {self.name:42s} residual {self.residual:.3e} (tol {self.tol:.0e})"


def _conj(v: mpc) -> mpc:
    return mpc(v.real, -v.imag)


# ---------------------------------------------------------------------------
# theta suite (acceptance 1 and 2)


def _random_point(rng, max_den=40) -> QPoint:
    while True:
        r = rng.randint(1, max_den)
        p = rng.randint(-3 * r, 3 * r)
        q = rng.randint(1, r)
        try:
            return QPoint(p, q, r)
        except ValueError:
            continue


def theta_suite(prec: int = 192, points: int = 20, seed: int = 20240810):
    rng = random.Random(seed)
    checks = []
    with precision(prec + 64):
        for m in (5, 7, 13):
            n = params_for_m(m).level
            ld = level_data(n)
            worst_sw = worst_mod = worst_inv = worst_avg = 0.0
            for i in range(points):
                z = _random_point(rng, 12 if i % 2 else 30)
                th = theta_value(n, z, prec)
                if i < 4:  # Siegel-Weil is the slow honest double sum
                    e = eisenstein_central(z, n, prec)
                    worst_sw = max(worst_sw, float(abs(e - 2 * gmpy2.const_pi() / gmpy2.sqrt(mpfr(n)) * th)))
                # Gamma0(n) modularity
                while True:
                    c = n * rng.randint(-3, 3)
                    d = rng.randint(-9, 9)
                    if c and math.gcd(c, d) == 1 and ld.chi[d % n] != 0:
                        a = pow(d, -1, abs(c))
                        b = (a * d - 1) // c
                        if a * d - b * c == 1:
                            break
                gz = z.mobius(a, b, c, d)
                lhs = theta_value(n, gz, prec)
                worst_mod = max(worst_mod, float(abs(lhs - ld.chi[d % n] * (c * z.to_mpc() + d) * th)))
                # Fricke inversion
                zf = z.neg_inv_scaled(n)
                rhs = zf.to_mpc() * mpc(0, -gmpy2.sqrt(mpfr(n))) * theta_value(n, zf, prec)
                worst_inv = max(worst_inv, float(abs(th - rhs)))
                # averaging over a divisor of n
                dd = rng.choice([x for x in (2, 3, 5, 7, 13, n // 3) if n % x == 0])
                s = mpc(0)
                for j in range(dd):
                    s += theta_value(n, QPoint(z.p * dd + j * z.r, z.q * dd, z.r * dd), prec)
                worst_avg = max(worst_avg, float(abs(s - dd * theta_value(n, z.scale(dd, 1), prec))))
            checks.append(Check(f"theta.siegel_weil[m={m}]", worst_sw, 1e-25))
            checks.append(Check(f"theta.modularity[m={m}]", worst_mod, 1e-25))
            checks.append(Check(f"theta.inversion[m={m}]", worst_inv, 1e-25))
            checks.append(Check(f"theta.averaging[m={m}]", worst_avg, 1e-25))
        # special values
        tk = theta_value(3, half_point(-1), prec)
        target = gmpy2.gamma(mpfr(1) / 3) ** 3 / (2 * gmpy2.const_pi() ** 2)
        checks.append(Check("theta.gamma_value", float(abs(tk - target)), 1e-30))
        om = mpc(mpfr(-1) / 2, gmpy2.sqrt(mpfr(3)) / 2)
        v1 = theta_value(3, QPoint(-3, 1, 18), prec)
        v2 = theta_value(3, QPoint(9, 1, 18), prec)
        checks.append(Check("theta.ninth_point_1", float(abs(v1 + 3 * om * tk)), 1e-25))
        checks.append(Check("theta.ninth_point_2", float(abs(v2 + 3 * tk)), 1e-25))
    return checks


# ---------------------------------------------------------------------------
# symbol suite (acceptance 3)


def symbols_suite(seed: int = 1234, pairs: int = 500):
    rng = random.Random(seed)
    checks = []
    worst = 0
    done = 0
    while done < pairs:
        a = EisInt(rng.randint(-30, 30), rng.randint(-30, 30))
        b = EisInt(rng.randint(-30, 30), rng.randint(-30, 30))
        if b.norm() <= 1 or b.norm() % 2 == 0 or a.norm() % 2 == 0 or a.norm() == 0:
            continue
        if a.norm() > 10**6 or b.norm() > 10**6 or eis_gcd(a, b).norm() != 1:
            continue
        if quad_symbol(a, b) != quad_symbol_euler(a, b):
            worst += 1
        done += 1
    checks.append(Check("symbols.quad_oracle_500", float(worst), 0.5))
    bad = 0
    import sympy

    for p in sympy.primerange(5, 500):
        if p % 3 != 1:
            continue
        pi = split_rational_prime(p)
        for d in (2, 5, 7, 11):
            if d % p == 0:
                continue
            val = cubic_symbol(d, pi)
            if not pi.divides(val.as_eis() - EisInt(pow(d, (p - 1) // 3, p))):
                bad += 1
    checks.append(Check("symbols.cubic_euler_lt500", float(bad), 0.5))
    bad = 0
    for dm in range(1, 19):
        if dm % 3 == 0:
            continue
        want = chi_omega(dm)
        # test element = w (mod dm), = 1 (mod 3)
        found = None
        for x in range(0, 6 * dm * 4):
            cand = EisInt(1 + 3 * ((x * dm) % (4 * dm)), 0)
            # direct search instead
        for x in range(1, 40):
            for y in range(1, 40):
                beta = EisInt(x, y)
                if (beta.a % dm, beta.b % dm) == (0, 1 % dm) and (beta.a % 3, beta.b % 3) == (1, 0):
                    n = beta.norm()
                    if n > 1 and n % 3 and n % 2 and math.gcd(n, dm) == 1:
                        found = beta
                        break
            if found:
                break
        if found is not None and chi_d(dm, found) != want:
            bad += 1
    checks.append(Check("symbols.chi_omega_table", float(bad), 0.5))
    return checks


# ---------------------------------------------------------------------------
# class group suite (acceptance 4)


def classgroups_suite(prec: int = 192, fmax: int = 200):
    checks = []
    bad = 0
    for f in range(1, fmax + 1):
        if class_number(f) != reduced_form_count(-3 * f * f):
            bad += 1
    checks.append(Check(f"classgroups.count_vs_forms_f<={fmax}", float(bad), 0.5))
    # theta at CM points: Theta_K(tau_A) = phi(conj A) Theta_K(omega)
    worst = 0.0
    with precision(prec + 32):
        tk = theta_value(3, half_point(-1), prec)
        for f in (15, 21, 35):
            group = enumerate_classes(f, 6 * f)
            for A in group.reps:
                tau = QPoint(-A.b, 1, 2 * A.a)
                lhs = theta_value(3, tau, prec)
                phi = primary_associate(A.gen.conj())[1]
                worst = max(worst, float(abs(lhs - eis_to_mpc(phi) * tk)))
    checks.append(Check("classgroups.theta_cm_factorization", worst, 1e-25))
    return checks


# ---------------------------------------------------------------------------
# trace identity suite (acceptance 5)


def panel_alphas(m: int):
    """Normalized square-free alpha of norm m, deterministic order."""
    pi = split_rational_prime(m)
    cands = {normalize_alpha(g) for g in (pi, -pi, pi.conj(), -pi.conj())}
    return sorted(cands, key=lambda g: (g.a, g.b))


def panel_contexts(ds=(1, 5, 7), ms=(7, 13, 19, 31, 37, 43), alpha_index: int = 0):
    out = []
    for m in ms:
        for d in ds:
            if math.gcd(d, 6 * m) != 1:
                continue
            alpha = panel_alphas(m)[alpha_index % 4]
            out.append(CharacterContext(alpha=alpha, d=d))
    return out


def _k_value(ctx: CharacterContext) -> mpc:
    """chi(p_albar)/m = chi_D(albar) eps(albar) phi(albar)/m."""
    return (
        root_of_unity6(2 * chi_d(ctx.d, ctx.alpha.conj()).exp)
        * quad_symbol(ctx.alpha, ctx.alpha.conj())
        * eis_to_mpc(primary_associate(ctx.alpha.conj())[1])
        / ctx.m
    )


TRACE_TOL = 1e-20
ROUND_TOL = 1e-15


def trace_identity_checks(ctx: CharacterContext, prec: int = 192):
    checks = []
    label = f"D={ctx.d},m={ctx.m}"
    with precision(prec + 32):
        am, amc = eis_to_mpc(ctx.alpha), eis_to_mpc(ctx.alpha.conj())
        names = ["Xstar", "U", "T", "Y", "Y0", "Y1", "Y2", "W1", "W2", "Zraw", "zero"]
        if ctx.m % 4 == 3:
            names += ["X", "Xzero"]
        tv = {n: named_trace(n, ctx, prec) for n in names}
        scale = float(sum(t.abs_sum for t in tv.values())) + 1.0
        for n, t in tv.items():
            if t.name in ("zero", "Xzero"):
                continue
            checks.append(Check(f"trace.round[{n};{label}]", float(t.residual) / scale, ROUND_TOL))
        X, U, T, Y = (tv[k].value for k in ("Xstar", "U", "T", "Y"))
        Y0, Y1, Y2 = (tv[k].value for k in ("Y0", "Y1", "Y2"))
        W1, W2 = tv["W1"].value, tv["W2"].value
        k = _k_value(ctx)
        u_star = u_alpha_b(ctx, -b0_star(ctx))
        es3 = eps_sqrt3(ctx)
        ca = c_alpha(ctx)
        d3m = d_over_3mstar(ctx)
        sqm3 = mpc(0, gmpy2.sqrt(mpfr(3)))
        w1_, w2_ = root_of_unity6(2), root_of_unity6(4)
        dp = ctx.d_prime
        zb = zeta_branch_sign(ctx)
        ids = {
            "rel_1": X + u_star * es3 * (am / dp) * T - k * (ctx.m - 1) * U,
            "rel_2": ctx.m * X + u_star * es3 * (am / dp) * T - (ctx.m - 1) * U,
            "rel_3i": X - U * (1 - k),
            "rel_3ii": X * (1 - ctx.m * k) * dp + u_star * es3 * am * T * (1 - k),
            "WU": W1 / am - dp * d3m * ca * _conj(U) / amc,
            "WY1": W1 / am - zb * chi_omega_mpc(ctx) * ca * _conj(Y) / amc,
            "WY2": W2 / am - zb * ca * _conj(Y) / amc,
            "UY": dp * U - zb * chi_omega_mpc(ctx, square=True) * d3m * Y,
            "sum_3": 3 * Y - (Y0 + Y1 + Y2),
            "form_Y1": Y1 / am - zb * w2_ * sqm3 * chi_omega_mpc(ctx) * ca * _conj(Y) / amc,
            "form_Y2": Y2 / am + zb * w1_ * sqm3 * ca * _conj(Y) / amc,
            "conjY": Y / am - ca * d_alpha(ctx) * _conj(Y) / amc,
            "conjW": W1 / am - ca * t_alpha(ctx) * _conj(W1) / amc,
            "WU2": W1 - t_alpha(ctx) * d3m * dp * U,
            "conjU": U / am - ca * t_alpha_prime(ctx) * _conj(U) / amc,
            "zero_trace": tv["zero"].value,
        }
        if ctx.d % 9 in (1, 8, 4, 5):
            ids["Y0_vanishes"] = Y0
        else:
            ids["Y0_conj"] = Y0 / am - ca * d_alpha(ctx) * _conj(Y0) / amc
        if ctx.m % 4 == 3:
            ids["X_1"] = tv["X"].value - X
            ids["X_zero"] = tv["Xzero"].value
        for n, diff in ids.items():
            checks.append(Check(f"trace.{n}[{label}]", float(abs(diff)) / scale, TRACE_TOL))
    return checks


def traces_suite(prec: int = 192, ds=(1, 5, 7), ms=(7, 13, 19, 31, 37, 43)):
    checks = []
    for ctx in panel_contexts(ds, ms):
        checks.extend(trace_identity_checks(ctx, prec))
    return checks
