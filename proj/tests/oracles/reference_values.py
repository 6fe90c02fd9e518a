"""Reference values frozen into the C++ tests.

Computed with mpmath at 40 digits, independently of the library: the cap
probability goes through the regularized incomplete beta function rather
than quadrature, and J through the Gamma function.

    python3 tests/oracles/reference_values.py
"""
import mpmath as mp

mp.mp.dps = 40


def log_J(a, p):
    a, p = mp.mpf(a), mp.mpf(p)
    return ((a + 1) / p - 1) * mp.log(p) + mp.loggamma((a + 1) / p)


def log_ball(n):
    return mp.mpf(n) / 2 * mp.log(mp.pi) - mp.loggamma(mp.mpf(n) / 2 + 1)


def log_c(n, p):
    return -(mp.log(n) + log_ball(n) + log_J(n - 1, p))


def hyperplane(n, p, rho):
    p, rho = mp.mpf(p), mp.mpf(rho)
    f = lambda s: s ** (n - 2) * mp.exp(-((s * s + rho * rho) ** (p / 2)) / p)
    integral = mp.quad(f, [0, 1, 4, 16, 64, mp.inf])
    return mp.exp(log_c(n, p) + mp.log(n - 1) + log_ball(n - 1)) * integral


def sphere(n, p, r):
    return mp.exp((n - 1) * mp.log(r) - mp.mpf(r) ** p / p - log_J(n - 1, p))


def cap(n, r, rho):
    # P(<z, u> > rho) for |z| = sqrt(r^2 + rho^2), u uniform on S^{n-1}.
    c = mp.mpf(rho) / mp.sqrt(mp.mpf(r) ** 2 + mp.mpf(rho) ** 2)
    return mp.betainc(mp.mpf(n - 1) / 2, mp.mpf(1) / 2, 0, 1 - c * c, regularized=True) / 2


def expected_polytope(n, p, N, rho):
    p, rho = mp.mpf(p), mp.mpf(rho)
    f = lambda s: s ** (n - 2) * mp.exp(-((s * s + rho * rho) ** (p / 2)) / p) * (1 - cap(n, s, rho)) ** (N - 1)
    integral = mp.quad(f, [0, 1, 2, 4, 8, 16, 32, 64, 128, mp.inf])
    return mp.exp(log_c(n, p) + mp.log(N) + mp.log(n - 1) + log_ball(n - 1)) * integral


def paper_N(n):
    return int(mp.nint(mp.sqrt(2 * mp.pi) * mp.exp(mp.mpf(-5) / 4) * mp.mpf(n) ** 0.25 * mp.exp(mp.sqrt(n) / 2)))


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


if __name__ == "__main__":
    show("log_J(0, 2)", log_J(0, 2))
    show("log_J(199, 2)", log_J(199, 2))
    show("laplace ratio a=10 p=1", mp.exp(0.5 * mp.log(2 * mp.pi) + 0.5 * mp.log(10) + 10 * (mp.log(10) - 1) - log_J(10, 1)))
    show("log_c(1, 2)", log_c(1, 2))
    show("log_c(2, 1)", log_c(2, 1))
    for n, p in [(5, 2), (2, 1), (10, 1), (30, 0.5), (100, 1), (7, 4)]:
        for rho in [0, 1, 2.5]:
            show(f"hyperplane n={n} p={p} rho={rho}", hyperplane(n, p, rho))
    for n, p, r in [(2, 2, 1), (2, 1, 1), (10, 2, 3), (20, 1, 1), (20, 2, 1), (50, 0.5, 7)]:
        show(f"sphere n={n} p={p} R={r}", sphere(n, p, r))
    for n, r, rho in [(3, 1, 1), (4, 1, 1), (8, 2, 1), (16, 4, 2), (16, 0.3, 2), (64, 8, 2.8284271247461903)]:
        show(f"cap n={n} r={r} rho={rho}", cap(n, r, rho))
    for n in [4, 8, 12, 16, 24, 32, 100]:
        print(f"N({n}) = {paper_N(n)}")
    for n in [8, 12, 16]:
        for p in [1, 2]:
            N = paper_N(n)
            rho = mp.mpf(n) ** (mp.mpf(1) / p - mp.mpf(1) / 4)
            show(f"expected n={n} p={p} N={N}", expected_polytope(n, p, N, rho))
    show("expected n=8 p=2 N=4 rho=1", expected_polytope(8, 2, 4, 1))
    for n, p in [(2, 2), (3, 2), (10, 1), (10, 0.5), (25, 4)]:
        show(f"rough n={n} p={p}", mp.exp(log_J(n + p - 2, p) - log_J(n - 1, p)))
