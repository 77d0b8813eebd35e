"""Independent high-precision reference values frozen into the unit tests.

Everything here is computed straight from the defining integrals with mpmath
quadrature at 80 digits; nothing is shared with the C++ implementation.
Run: python3 tests/oracles/reference_values.py
"""
import mpmath as mp

mp.mp.dps = 80
# Cut-off below which the integrands are replaced by their leading term;
# the omitted mass is below 1e-19 relative for every case printed here.
EPS = mp.mpf(10) ** -40


def beta_density(a, b):
    norm = mp.beta(a, b)
    return lambda p: p ** (a - 1) * (1 - p) ** (b - 1) / norm


def nodes(x, lo=0):
    inner = [p for p in (mp.mpf(1) / x, mp.mpf(10) / x) if p < 1]
    return [lo] + inner + [1]


def lam(x, dens):
    f = lambda p: (1 - (1 - p) ** x - x * p * (1 - p) ** (x - 1)) / p**2 * dens(p)
    return mp.quad(f, nodes(x, EPS))


def mu(x, dens):
    f = lambda p: (x * p - 1 + (1 - p) ** x) / p**2 * dens(p)
    return mp.quad(f, nodes(x, EPS))


def pairwise(b, k, dens):
    f = lambda p: p ** (k - 2) * (1 - p) ** (b - k) * dens(p)
    return mp.quad(f, [0, mp.mpf(k) / b, 1])


def logfam_tail(chi):
    k = 1 / (2 * mp.e * mp.gammainc(chi + 1, 1) - 1)
    return lambda y: k * ((1 - mp.log(y)) ** chi / y - 1)


def lam_tail(x, tail):
    # integration by parts against T(y) = int_(y,1] p^-2 Lambda(dp)
    df = lambda p: x * (x - 1) * p * (1 - p) ** (x - 2)
    return mp.quad(lambda y: df(y) * tail(y), nodes(x))


def mu_tail(x, tail):
    df = lambda p: x * (1 - (1 - p) ** (x - 1))
    return mp.quad(lambda y: df(y) * tail(y), nodes(x))


if __name__ == "__main__":
    d = beta_density(0.5, 1.5)
    for x in [4, 10, 50, 100, 10000]:
        print(f"beta(0.5,1.5) x={x} lambda={mp.nstr(lam(x, d), 17)} mu={mp.nstr(mu(x, d), 17)}")
    print("beta(0.5,1.5) pairwise b=10 k=3", mp.nstr(pairwise(10, 3, d), 17))
    u = beta_density(1, 1)
    print("uniform pairwise b=10 k=3", mp.nstr(pairwise(10, 3, u), 17))
    b = 10000
    print("beta(0.5,1.5) C(1e4,2) lambda_{b,2}/lambda(b)",
          mp.nstr(mp.binomial(b, 2) * pairwise(b, 2, d) / lam(b, d), 17))
    for chi in [0.5, -0.5]:
        t = logfam_tail(chi)
        mass = mp.quad(lambda y: 2 * y * t(y), [0, 1])
        print(f"logfam chi={chi} mass={mp.nstr(mass, 17)} lambda(10)={mp.nstr(lam_tail(10, t), 17)}"
              f" mu(10)={mp.nstr(mu_tail(10, t), 17)} mu(1000)={mp.nstr(mu_tail(1000, t), 17)}")

    # Bolthausen-Sznitman: mu(x) = x (H_x - 1), H_x = digamma(x + 1) + Euler gamma.
    H = lambda x: mp.digamma(x + 1) + mp.euler
    mu_bs = lambda x: x * (H(x) - 1)
    for n in [1000, 100000]:
        total = mp.quad(lambda x: x / mu_bs(x), [2, 10, 100, 1000, n] if n > 1000 else [2, 10, 100, n])
        print(f"bs n={n} total_length={mp.nstr(total, 17)} external={mp.nstr(n**2 / mu_bs(n), 17)}"
              f" internal={mp.nstr(total - (n - 2) * n / mu_bs(n), 17)}")
    n = 10000
    print("bs n=1e4 hitting r=n/2", mp.nstr(mp.quad(lambda x: 1 / mu_bs(x), [n / 2, n]), 17))
    print("bs n=1e4 mergers r=n/2", mp.nstr(mp.quad(lambda x: (x - 1) / mu_bs(x), [n / 2, n]), 17))
    print("bs n=1e4 harmonic r=n/2", mp.nstr(mp.log((H(n) - 1) / (H(n / 2) - 1)), 17))
