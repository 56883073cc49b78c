# Copyright 2026 The Arena Authors
# SPDX-License-Identifier: Apache-2.0

"""High-precision reference values for the paired t-test.

Run once; the output is frozen into tests/ttest_oracle_cases.hpp.
Independent of the C++ implementation: mpmath at 50 digits, regularized
incomplete beta for the two-tailed Student p-value.
"""
import mpmath as mp

mp.mp.dps = 50

CASES = [
    ([1, 2, 3, 4, 5], [2, 2, 4, 4, 7]),
    ([0.5, 0.7, 0.9], [0.4, 0.6, 0.95]),
    ([1, 1], [0, 0.5]),
    ([10, 12, 9, 11, 13, 10], [9, 11, 9, 10, 12, 8]),
    ([0.91, 0.88, 0.95, 0.90, 0.87, 0.93, 0.89, 0.92], [0.85, 0.86, 0.90, 0.91, 0.80, 0.88, 0.84, 0.90]),
    ([3.2, 4.1, 5.0, 2.2], [3.0, 4.5, 4.0, 2.0]),
    ([1, 2, 3, 4, 5, 6, 7, 8, 9, 10], [1.1, 2.3, 2.9, 4.2, 5.1, 5.8, 7.4, 8.1, 9.0, 10.5]),
    ([100, 102, 98, 101], [99, 100, 99, 97]),
    ([0.0, 1.0, 0.0, 1.0, 1.0], [1.0, 1.0, 0.0, 0.0, 0.0]),
    ([-1.5, -2.0, -0.5], [1.0, 0.5, 2.5]),
    ([5, 5, 5, 5, 6], [5, 5, 5, 5, 5]),
    ([2.0, 4.0], [1.0, 1.0]),
    ([0.333, 0.667, 1.0, 0.0, 0.5, 0.25], [0.5, 0.5, 1.0, 0.333, 0.0, 0.0]),
    ([12.5, 13.1, 11.8, 12.9, 13.4, 12.2, 12.7], [12.1, 13.0, 11.9, 12.0, 13.0, 12.1, 12.2]),
    ([1e-3, 2e-3, 1.5e-3, 3e-3], [0.5e-3, 2.5e-3, 1e-3, 1e-3]),
    ([7, 3, 8, 2, 9, 1], [6, 4, 7, 3, 8, 2]),
    ([0.9, 0.8, 0.85], [0.1, 0.2, 0.15]),
    ([50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160], [52, 58, 71, 83, 88, 97, 113, 118, 133, 137, 155, 158]),
    ([1.0, 2.0, 4.0, 8.0, 16.0], [1.5, 2.5, 3.0, 7.0, 15.0]),
    ([0.2, 0.4, 0.6, 0.8, 1.0, 0.3, 0.5, 0.7], [0.25, 0.35, 0.7, 0.75, 0.9, 0.35, 0.45, 0.65]),
]


def paired_t(a, b):
    d = [mp.mpf(str(x)) - mp.mpf(str(y)) for x, y in zip(a, b)]
    n = len(d)
    mean = mp.fsum(d) / n
    var = mp.fsum((x - mean) ** 2 for x in d) / (n - 1)
    t = mean / mp.sqrt(var / n)
    df = n - 1
    p = mp.betainc(mp.mpf(df) / 2, mp.mpf(1) / 2, 0, df / (df + t * t), regularized=True)
    return t, p


def fmt(xs):
    return "{" + ", ".join(repr(float(x)) for x in xs) + "}"


print("// Copyright 2026 The Arena Authors")
print("// SPDX-License-Identifier: Apache-2.0")
print()
print("// Generated by tests/oracles/ttest_oracle.py (mpmath, 50 digits). Do not edit.")
print("#pragma once\n")
print("#include <vector>\n")
print("struct TTestOracleCase {")
print("  std::vector<double> a;")
print("  std::vector<double> b;")
print("  double t;")
print("  double p;")
print("};\n")
print("inline const std::vector<TTestOracleCase>& ttest_oracle_cases() {")
print("  static const std::vector<TTestOracleCase> cases = {")
for a, b in CASES:
    t, p = paired_t(a, b)
    print(f"      {{{fmt(a)}, {fmt(b)}, {mp.nstr(t, 20)}, {mp.nstr(p, 20)}}},")
print("  };")
print("  return cases;")
print("}")
