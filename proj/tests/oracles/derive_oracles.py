"""Independent reference values for the C++ unit and acceptance tests.

Evaluates the closed-form expressions directly with mpmath (50 digits) and
scipy, then prints a C++ header. Regenerate with:

    python3 tests/oracles/derive_oracles.py > tests/oracle_values.hpp
"""
import random

import mpmath as mp
from scipy import stats

mp.mp.dps = 50


def phi(x, mu, s2):
    return mp.exp(-(x - mu) ** 2 / (2 * s2)) / mp.sqrt(2 * mp.pi * s2)


def normal_interval(x, n, z):
    p = mp.mpf(x) / n
    h = z * mp.sqrt(p * (1 - p) / n)
    return p, max(mp.mpf(0), p - h), min(mp.mpf(1), p + h)


def agresti_coull(x, n, z):
    nt = n + z * z
    pt = (x + z * z / 2) / nt
    h = z * mp.sqrt(pt * (1 - pt) / nt)
    return pt, max(mp.mpf(0), pt - h), min(mp.mpf(1), pt + h)


def d(v):
    return repr(float(v))


out = []
out.append("#pragma once")
out.append("// Generated by tests/oracles/derive_oracles.py; do not edit by hand.")
out.append("#include <array>")
out.append("namespace oracle {")

pdf3 = mp.mpf("0.2") * phi(2, 0, 1) + mp.mpf("0.3") * phi(2, 2, 1) + mp.mpf("0.5") * phi(2, 4, 1)
out.append(f"inline constexpr double kMixturePdfK3AtTwo = {d(pdf3)};")
out.append(f"inline constexpr double kStdNormalPeak = {d(1 / mp.sqrt(2 * mp.pi))};")
out.append(f"inline constexpr double kLogStdNormalPeak = {d(mp.log(1 / mp.sqrt(2 * mp.pi)))};")
out.append(f"inline constexpr double kExp075 = {d(mp.exp(mp.mpf('0.75')))};")
out.append(f"inline constexpr double kExp077 = {d(mp.exp(mp.mpf('0.77')))};")
out.append(f"inline constexpr double kExp065 = {d(mp.exp(mp.mpf('0.65')))};")

z = mp.mpf("1.959964")
p, lo, hi = normal_interval(50, 100, z)
out.append(f"inline constexpr double kNormalHalfWidthP05N100 = {d(hi - p)};")
pt, lo, hi = agresti_coull(0, 10, z)
out.append(f"inline constexpr double kAcX0N10Center = {d(pt)};")
out.append(f"inline constexpr double kAcX0N10Lcb = {d(lo)};")
out.append(f"inline constexpr double kAcX0N10Ucb = {d(hi)};")
out.append(f"inline constexpr double kAcX0N10Width = {d(hi - lo)};")
out.append(f"inline constexpr double kAcX0N10NTilde = {d(10 + z * z)};")

w = stats.ttest_ind([1, 2, 3], [1, 2, 3, 4], equal_var=False)
out.append(f"inline constexpr double kWelchT = {d(w.statistic)};")
out.append(f"inline constexpr double kWelchP = {d(w.pvalue)};")
va, vb = 1.0 / 3, (5.0 / 3) / 4
out.append(f"inline constexpr double kWelchDf = {d((va + vb) ** 2 / (va ** 2 / 2 + vb ** 2 / 3))};")

rnd = random.Random(20240601)
rows = []
for _ in range(30):
    n = rnd.randint(1, 5000)
    x = rnd.randint(0, n)
    zz = mp.mpf(repr(rnd.uniform(0.5, 3.5)))
    np_, nl, nu = normal_interval(x, n, zz)
    ap, al, au = agresti_coull(x, n, zz)
    rows.append(f"    IntervalCase{{{x}, {n}, {d(zz)}, {d(np_)}, {d(nl)}, {d(nu)}, {d(ap)}, {d(al)}, {d(au)}}},")
out.append("struct IntervalCase {")
out.append("    unsigned long x, n;")
out.append("    double z, normal_point, normal_lcb, normal_ucb, ac_point, ac_lcb, ac_ucb;")
out.append("};")
out.append("inline constexpr std::array<IntervalCase, 30> kIntervalCases = {{")
out.extend(rows)
out.append("}};")
out.append("}  // namespace oracle")
print("\n".join(out))
