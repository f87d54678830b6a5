"""High-precision reference values frozen into the C++ unit tests.

Run with: python3 tests/oracles/lip_values.py
"""
from mpmath import mp, mpf, log

mp.dps = 40
M = mpf(256)


def tilde(v):
    return log(1 - mpf(v) / M)


def hat(v):
    return log(-tilde(v))


print("tilde(128)      =", tilde(128))
print("tilde(255)      =", tilde(255))
print("hat(128)        =", hat(128))
print("hat(255)        =", hat(255))
print("lip_mul(2, 128) =", M - M * (1 - mpf(128) / M) ** 2)

# 1-D instance f = [100, 150, 200], B = [100, 150]
f = [100, 150, 200]
B = [100, 150]
for x in range(len(f) - len(B) + 1):
    ratios = [tilde(f[x + i]) / tilde(B[i]) for i in range(len(B))]
    lam, mu = max(ratios), min(ratios)
    print(f"x={x}: lambda={lam} mu={mu} As={log(lam / mu)}")
