"""Reference values for the Mittag-Leffler tests.

Direct power series in arbitrary precision; the working precision is raised
until two successive precisions agree.
"""
from mpmath import mp, mpf, rgamma, gamma, nstr


def prabhakar(alpha, beta, delta, z, dps):
    mp.dps = dps
    alpha, beta, delta, z = mpf(alpha), mpf(beta), mpf(delta), mpf(z)
    s = mpf(0)
    coef = mpf(1)  # (delta)_r / r!
    r = 0
    while True:
        t = coef * z**r * rgamma(alpha * r + beta)
        s += t
        if r > 10 and abs(t) < mpf(10) ** (-dps + 5) * abs(s) and abs(z) ** (1 / alpha) < r:
            break
        coef = coef * (delta + r) / (r + 1)
        r += 1
    return s


def reference(alpha, beta, delta, z):
    # terms peak near exp(|z|^{1/alpha}); start with enough digits to absorb it
    dps = 40 + int(abs(z) ** (1 / alpha) / 2.3)
    prev = prabhakar(alpha, beta, delta, z, dps)
    while True:
        dps *= 2
        cur = prabhakar(alpha, beta, delta, z, dps)
        if abs(cur - prev) <= mpf(10) ** -30 * abs(cur):
            return cur
        prev = cur


CASES = [
    (0.7, 0.7, 1, -2.0),
    (0.7, 1.4, 2, -50.0),
    (0.7, 1.4, 2, -5.0),
    (0.5, 0.5, 1, -3.0),
    (0.5, 2.5, 1, -4.0),
    (0.3, 0.06, 0.2, -1.5),
    (0.3, 0.9, 3, -2.0),
    (0.95, 0.19, 0.2, -7.0),
    (0.95, 2.85, 3, -30.0),
    (0.95, 28.975, 30.5, -20.0),
    (0.95, 9.975, 10.5, -3.0),
    (0.7, 2.1, 3, 2.5),
    (1.5, 1.0, 1, -4.0),
    (1.0, 2.5, 1.2, -8.0),
]

if __name__ == "__main__":
    for a, b, d, z in CASES:
        v = reference(a, b, d, z)
        print("    {%r, %r, %r, %r, %s}," % (a, b, d, z, nstr(v, 20, min_fixed=-1000, max_fixed=1000)))
