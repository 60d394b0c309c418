"""Independent reference values for the smeared kernels.

Every number is computed with mpmath at 40 significant digits from an
integral representation that the Rust code never uses:

* smeared delta gradient: 1D quadrature of -int (d_s f) g over one period
  with periodized 1D Gaussians (the 3D Gaussians factor per axis);
* smeared Pauli-Jordan function and its derivatives: radial wavenumber
  integrals of the infinite-space Fourier representation
  D(rho, tau) = -(2 pi)^-3 int d^3k exp(i k.rho) sin(c k tau) / k.

Run:  python3 tools/oracle.py
"""

import mpmath as mp

mp.mp.dps = 40
PI = mp.pi
L = 2 * PI


def periodic_gauss(x, c, s, deriv=False):
    total = mp.mpf(0)
    for n in range(-3, 4):
        y = x - c - n * L
        g = mp.e ** (-(y * y) / (2 * s * s)) / mp.sqrt(2 * PI * s * s)
        total += (-y / (s * s)) * g if deriv else g
    return total


def delta_gradient(cf, cg, sf, sg, s):
    out = mp.mpf(1)
    for axis in range(3):
        if axis == s:
            integrand = lambda x: periodic_gauss(x, cf[axis], sf, True) * periodic_gauss(x, cg[axis], sg)
        else:
            integrand = lambda x: periodic_gauss(x, cf[axis], sf) * periodic_gauss(x, cg[axis], sg)
        pts = sorted({mp.mpf(0), L} | {mp.mpf(p) % L for p in (cf[axis], cg[axis])})
        out *= mp.quad(integrand, pts)
    return -out


def radial(weight, S, reach=40):
    top = reach / mp.sqrt(S)
    return mp.quad(lambda k: weight(k) * mp.e ** (-S * k * k / 2), mp.linspace(0, top, 60))


def j0(x):
    return mp.sin(x) / x if x != 0 else mp.mpf(1)


def j0p(x):
    return (x * mp.cos(x) - mp.sin(x)) / (x * x)


def j0pp(x):
    return -j0(x) - 2 * j0p(x) / x


def phi_jets(d, S, tau, c=1):
    """Phi, d_tau^2 Phi, Hessian, and d_s d_tau Phi for a Gaussian of variance S at d."""
    u = mp.sqrt(sum(x * x for x in d))
    pre = -1 / (2 * PI * PI)
    value = pre * radial(lambda k: k * mp.sin(c * k * tau) * j0(k * u), S)
    second = pre * radial(lambda k: -k * (c * k) ** 2 * mp.sin(c * k * tau) * j0(k * u), S)
    # d_k j0(k|d|) = k j0'(ku) d_k / u ;  d_k d_l j0 = k^2 [j0'' n n + j0'/(ku) (delta - n n)]
    hess = [[mp.mpf(0)] * 3 for _ in range(3)]
    grad_rate = [mp.mpf(0)] * 3
    for a in range(3):
        na = d[a] / u
        grad_rate[a] = pre * radial(lambda k: k * c * k * mp.cos(c * k * tau) * k * j0p(k * u) * na, S)
        for b in range(3):
            nb = d[b] / u
            delta = 1 if a == b else 0
            hess[a][b] = pre * radial(
                lambda k: k * mp.sin(c * k * tau) * k * k
                * (j0pp(k * u) * na * nb + j0p(k * u) / (k * u) * (delta - na * nb)),
                S,
            )
    return value, second, hess, grad_rate


def eps(i, j, k):
    return (i - j) * (j - k) * (k - i) / 2


def commutators(d, S, tau, hbar=1, c=1):
    value, second, hess, grad_rate = phi_jets(d, S, tau, c)
    wave = [[hess[a][b] - (second / c**2 if a == b else 0) for b in range(3)] for a in range(3)]
    curl = [[sum(eps(a, b, s) * grad_rate[s] for s in range(3)) for b in range(3)] for a in range(3)]
    ee = [[mp.mpc(0, 4 * PI * hbar * c * wave[a][b]) for b in range(3)] for a in range(3)]
    eb = [[mp.mpc(0, 4 * PI * hbar * curl[a][b]) for b in range(3)] for a in range(3)]
    fdf = [[mp.mpc(-8 * PI * hbar * curl[a][b], 8 * PI * hbar * c * wave[a][b]) for b in range(3)] for a in range(3)]
    return value, ee, eb, fdf


def fmt(x):
    return mp.nstr(x, 20, min_fixed=-1, max_fixed=-1)


def main():
    print("# smeared delta gradient: cf, cg, sf, sg, s(1-based), value")
    cases = [
        ((0.6, 0, 0), (0, 0, 0), 0.6, 0.6),
        ((0.3, -0.4, 0.9), (0.1, 0.2, 0.0), 0.5, 0.6),
        ((3.0, 2.9, -3.1), (-2.9, 2.7, 3.0), 0.4, 0.3),
    ]
    for cf, cg, sf, sg in cases:
        cf = [mp.mpf(x) for x in cf]
        cg = [mp.mpf(x) for x in cg]
        for s in range(3):
            print([float(x) for x in cf], [float(x) for x in cg], sf, sg, s + 1, fmt(delta_gradient(cf, cg, mp.mpf(sf), mp.mpf(sg), s)))

    print("# centered smeared Pauli-Jordan: sigma, c, tau, value")
    for sigma, c, tau in [(0.3, 1, 0.6), (0.3, 1, 1.2), (0.25, 2, 0.3), (0.3, 1, 0.05)]:
        S = mp.mpf(sigma) ** 2
        v = -1 / (2 * PI * PI) * radial(lambda k: k * mp.sin(c * k * tau), S)
        print(sigma, c, tau, fmt(v))

    print("# unequal-time commutators: d, sf, sg, tau; Phi; then E_E, E_B, Fd_F rows")
    for d, sf, sg, tau in [
        ((0.3, -0.2, 0.5), 0.2, 0.2, 0.4),
        ((0.0, 0.0, 0.8), 0.15, 0.25, -0.7),
        ((0.05, 0.02, -0.03), 0.2, 0.2, 0.9),
    ]:
        d = [mp.mpf(x) for x in d]
        S = mp.mpf(sf) ** 2 + mp.mpf(sg) ** 2
        value, ee, eb, fdf = commutators(d, S, mp.mpf(tau))
        print("case", [float(x) for x in d], sf, sg, tau, "Phi", fmt(value))
        for name, t in [("E_E", ee), ("E_B", eb), ("Fd_F", fdf)]:
            for a in range(3):
                print(name, a + 1, [(fmt(t[a][b].real), fmt(t[a][b].imag)) for b in range(3)])


if __name__ == "__main__":
    main()
