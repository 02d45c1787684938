"""Reference values for the fractional Dirichlet marginal density.

Q = R/(1+R) with R^nu = B * L, B ~ BetaPrime(b1, b2) and L the Lamperti
variable with density sin(pi nu) / (pi nu (t^2 + 2 t cos(pi nu) + 1)).
The density of Q is a one-dimensional mixture integral, evaluated in log
coordinates. Independent of both the series and the radial quadrature.
"""
import numpy as np
from scipy import integrate, special


def beta_prime_pdf(b, b1, b2):
    return np.exp((b1 - 1) * np.log(b) - (b1 + b2) * np.log1p(b) - special.betaln(b1, b2))


def marginal(nu, b1, b2, q):
    r = q / (1 - q)
    s = r ** nu
    if nu == 1:
        return float(np.exp((b1 - 1) * np.log(q) + (b2 - 1) * np.log1p(-q) - special.betaln(b1, b2)))
    cl = np.sin(np.pi * nu) / (np.pi * nu)

    def lamperti(t):
        return cl / (t * t + 2 * t * np.cos(np.pi * nu) + 1)

    def g(u):
        return beta_prime_pdf(s / np.exp(u), b1, b2) * lamperti(np.exp(u))

    val = integrate.quad(g, -80, 80, limit=1000, epsabs=1e-15, epsrel=1e-13,
                         points=[np.log(s)])[0]
    return val * nu * r ** (nu - 1) / (1 - q) ** 2


CASES = [
    (0.7, 2.0, 3.0, [0.1, 0.3, 0.5, 0.7, 0.9]),
    (0.7, 0.2, 0.4, [0.05, 0.3, 0.5, 0.8]),
    (0.95, 10.0, 30.0, [0.1, 0.25, 0.4]),
    (0.3, 0.7, 1.3, [0.2, 0.6]),
]

if __name__ == "__main__":
    for nu, b1, b2, qs in CASES:
        for q in qs:
            print("    {%r, %r, %r, %r, %.17g}," % (nu, b1, b2, q, marginal(nu, b1, b2, q)))
