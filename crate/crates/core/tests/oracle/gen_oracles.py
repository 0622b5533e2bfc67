"""Regenerates the frozen high-precision reference values in `reference.rs`.

Run with `python3 gen_oracles.py > reference.rs`. Needs mpmath only; every
value here is computed independently of the Rust code paths it checks.
"""

import mpmath as mp

mp.mp.dps = 50


def lit(x, digits=25):
    return mp.nstr(mp.mpf(x), digits, min_fixed=-5, max_fixed=12)


def theta_points():
    return [1, 5, 10, 20, 50, 100, 1000, 12345.678, 1e5, 1e6]


def z_points():
    return [10, 14.0, 17.5, 20, 25, 29.9, 30.1, 35, 50, 77.7, 100, 250.25,
            500, 1000, 2024.5, 5000, 10000, 12345.678, 50000, 100000,
            333333.3, 1000000]


def s_sum(T, U):
    T = mp.mpf(T)
    U = mp.mpf(U)
    P = T / (2 * mp.pi)
    total = mp.mpf(0)
    n = 1
    while n < P:
        d = mp.mpf(len(mp.divisors(n)) if hasattr(mp, "divisors") else divisor_count(n))
        lr = mp.log(P / n)
        arg = U / 2 * lr
        sinc = mp.sin(arg) / arg if arg != 0 else mp.mpf(1)
        phase = (2 * mp.pi * P + U / 2) * lr - 2 * mp.pi * P - mp.pi / 4
        total += d / mp.sqrt(n) * sinc * mp.cos(phase)
        n += 1
    return 2 * total


def divisor_count(n):
    count = 0
    i = 1
    while i * i <= n:
        if n % i == 0:
            count += 1 if i * i == n else 2
        i += 1
    return count


def hl_main(t):
    t = mp.mpf(t)
    th = mp.siegeltheta(t)
    total = mp.mpf(0)
    n = 1
    while n <= t / (2 * mp.pi):
        total += divisor_count(n) / mp.sqrt(n) * mp.cos(2 * th - t * mp.log(n))
        n += 1
    return 2 * total


def main():
    print("// Generated by tests/oracle/gen_oracles.py (mpmath, 50 digits). Do not edit.")
    print()
    print("/// (t, theta(t), theta'(t))")
    print("pub const THETA: &[(f64, f64, f64)] = &[")
    for t in theta_points():
        t = mp.mpf(t)
        print(f"    ({lit(t)}, {lit(mp.siegeltheta(t))}, {lit(mp.siegeltheta(t, derivative=1))}),")
    print("];")
    print()
    print("/// (t, Z(t))")
    print("pub const Z: &[(f64, f64)] = &[")
    for t in z_points():
        t = mp.mpf(t)
        print(f"    ({lit(t)}, {lit(mp.siegelz(t))}),")
    print("];")
    print()
    print("/// Ordinates of the first 40 zeros on the critical line.")
    print("pub const ZEROS: &[f64] = &[")
    for k in range(1, 41):
        print(f"    {lit(mp.im(mp.zetazero(k)), 20)},")
    print("];")
    print()
    print("/// Ordinates of the zeros in (10000, 10030).")
    print("pub const ZEROS_NEAR_1E4: &[f64] = &[")
    n = int(mp.nzeros(10000))
    k = n + 1
    while True:
        g = mp.im(mp.zetazero(k))
        if g >= 10030:
            break
        print(f"    {lit(g, 20)},")
        k += 1
    print("];")
    print()
    print(f"pub const ZERO_COUNT_TO_1E4: u64 = {n};")
    print()
    c = mp.euler
    print(f"pub const BALA_COEFF: f64 = {lit(2 * c - 1 - mp.log(2 * mp.pi), 22)};")
    print(f"pub const SHORT_COEFF: f64 = {lit(2 * c - mp.log(2 * mp.pi), 22)};")
    print(f"pub const S_SUM_1E4_U3: f64 = {lit(s_sum(10000, 3), 22)};")
    print(f"pub const S_SUM_1E4_U0: f64 = {lit(s_sum(10000, 0), 22)};")
    print(f"pub const HL_MAIN_1E4: f64 = {lit(hl_main(10000), 22)};")


if __name__ == "__main__":
    main()
