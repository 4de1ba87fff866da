#!/usr/bin/env python3
"""Generate the Maass-form fixture (first even Hecke-Maass cusp form for
SL2(Z), spectral parameter R ~ 13.7797513519) by horocycle collocation.

Stage 1: solve the automorphy collocation system on a low horocycle for the
Fourier coefficients a(1..M0), optionally polishing R by requiring two
independent horocycle heights to produce the same coefficients.

Stage 2: extract a(n) for all n <= NMAX in dyadic blocks via DCT projection
of f sampled on very low horocycles (evaluated through the pullback to the
fundamental domain, where the expansion needs only ~11 terms).

The linear system never imposes Hecke relations, so multiplicativity
residuals of the output are an independent accuracy certificate; the
certified bound is written into the fixture's `precision` field.

Usage: python3 tools/generate_fixture.py [out.json]
"""

import json
import sys
import time

import mpmath as mp
import numpy as np
from scipy.fft import dct
from scipy.interpolate import CubicSpline

R0 = 13.779751351891  # first even Maass cusp form for SL2(Z)
NMAX = 10_000
U_MIN, U_MAX = 0.3, 62.0
GRID_N = 6000
Y_A, Y_B = 0.13, 0.11  # stage-1 horocycle heights
M0 = 66                # stage-1 truncation (scaled kernel < 1e-14 beyond)
Q1 = 140               # stage-1 collocation points on (0, 1/2)


def build_kernel(R):
    """Cubic spline of u -> K_{iR}(u) * exp(pi R / 2) on a log grid."""
    mp.mp.dps = 25
    Rm = mp.mpf(R)
    scale = mp.exp(mp.pi * Rm / 2)
    ts = np.linspace(np.log(U_MIN), np.log(U_MAX), GRID_N)
    vals = np.empty(GRID_N)
    for i, t in enumerate(ts):
        vals[i] = float(mp.besselk(1j * Rm, mp.exp(mp.mpf(t))).real * scale)
    return CubicSpline(ts, vals)


def kern_eval(spline, u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    mask = (u >= U_MIN) & (u <= U_MAX)
    out[mask] = spline(np.log(u[mask]))
    return out


def pullback(x, y):
    """Map points of the upper half plane to the standard fundamental domain."""
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    for _ in range(200):
        x -= np.round(x)
        r2 = x * x + y * y
        mask = r2 < 1.0 - 1e-15
        if not mask.any():
            break
        x[mask] = -x[mask] / r2[mask]
        y[mask] = y[mask] / r2[mask]
    else:
        raise RuntimeError("pullback did not converge")
    return x, y


def f_expand(spline, coeff, x, y):
    """f(x+iy) = sum_m a(m) sqrt(y) K~(2 pi m y) cos(2 pi m x); y >= 0.8."""
    out = np.zeros_like(x)
    mmax = int(U_MAX / (2 * np.pi * y.min())) + 1
    for m in range(1, min(mmax, len(coeff) - 1) + 1):
        u = 2 * np.pi * m * y
        out += coeff[m] * kern_eval(spline, u) * np.cos(2 * np.pi * m * x)
    return np.sqrt(y) * out


def stage1_coeffs(spline, y0):
    """Solve the collocation system at horocycle height y0; returns a[0..M0]."""
    j = np.arange(1, Q1 + 1)
    xj = (j - 0.5) / (2 * Q1)
    yj = np.full(Q1, y0)
    xs, ys = pullback(xj, yj)
    xs = np.abs(xs)  # even form

    n = np.arange(1, M0 + 1)
    # V[j, n-1] = c_n(y*_j) cos(2 pi n x*_j)
    u = 2 * np.pi * np.outer(ys, n)
    V = np.sqrt(ys)[:, None] * kern_eval(spline, u) * np.cos(
        2 * np.pi * np.outer(xs, n)
    )
    C = np.cos(2 * np.pi * np.outer(n, xj))  # C[m-1, j]
    A = np.diag(np.sqrt(y0) * kern_eval(spline, 2 * np.pi * n * y0))
    A = A - (2.0 / Q1) * C @ V

    # normalize a(1) = 1, drop the m=1 equation
    rhs = -A[1:, 0]
    sol = np.linalg.solve(A[1:, 1:], rhs)
    coeff = np.zeros(M0 + 1)
    coeff[1] = 1.0
    coeff[2:] = sol
    return coeff


def coeff_gap(spline):
    ca = stage1_coeffs(spline, Y_A)
    cb = stage1_coeffs(spline, Y_B)
    return ca, cb, float(np.max(np.abs(ca[2:12] - cb[2:12])))


def automorphy_residual(spline, coeff, rng):
    """Independent certificate: f(z) = f(gamma z) at random low points."""
    x = rng.uniform(-0.5, 0.5, 40)
    y = rng.uniform(0.12, 0.3, 40)
    xs, ys = pullback(x, y)
    direct = np.zeros(40)
    mmax = int(U_MAX / (2 * np.pi * y.min())) + 1
    for m in range(1, min(mmax, M0) + 1):
        direct += coeff[m] * kern_eval(spline, 2 * np.pi * m * y) * np.cos(
            2 * np.pi * m * x
        )
    direct *= np.sqrt(y)
    via_pullback = f_expand(spline, coeff, np.abs(xs), ys)
    return float(np.max(np.abs(direct - via_pullback)))


def stage2_block(spline, coeff, Nhi, y):
    """a(n) for n <= Nhi from a horocycle at height y, via DCT projection."""
    Q2 = 4 * Nhi
    j = np.arange(Q2)
    xj = (j + 0.5) / (2 * Q2)
    xs, ys = pullback(xj, np.full(Q2, y))
    fv = f_expand(spline, coeff, np.abs(xs), ys)
    S = dct(fv, type=2) / Q2  # S[n] = (2/Q2) sum_j f_j cos(2 pi n x_j)
    n = np.arange(1, Nhi + 1)
    c = np.sqrt(y) * kern_eval(spline, 2 * np.pi * n * y)
    return S[1 : Nhi + 1], c


def stage2_all(spline, coeff, nmax):
    """a(n) for 1 <= n <= nmax; per n the better-conditioned of two heights."""
    a = np.zeros(nmax + 1)
    a[1 : M0 // 4] = coeff[1 : M0 // 4]  # stage-1 head (well below truncation)
    lo = M0 // 4 - 1
    route_gap = 0.0
    while lo < nmax:
        Nhi = 2 * lo
        y1 = R0 / (2 * np.pi * Nhi)
        y2 = 0.65 * y1
        S1, c1 = stage2_block(spline, coeff, Nhi, y1)
        S2, c2 = stage2_block(spline, coeff, Nhi, y2)
        for n in range(lo + 1, min(Nhi, nmax) + 1):
            v1 = S1[n - 1] / c1[n - 1] if abs(c1[n - 1]) > 1e-4 else None
            v2 = S2[n - 1] / c2[n - 1] if abs(c2[n - 1]) > 1e-4 else None
            if v1 is None and v2 is None:
                raise RuntimeError("both heights ill-conditioned at n=%d" % n)
            if v1 is not None and v2 is not None:
                route_gap = max(route_gap, abs(v1 - v2))
                a[n] = v1 if abs(c1[n - 1]) >= abs(c2[n - 1]) else v2
            else:
                a[n] = v1 if v1 is not None else v2
        lo = min(Nhi, nmax)
    return a, route_gap


def sieve_primes(n):
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0]


def hecke_certificate(a, nmax):
    """Max residual of relations the construction never imposed."""
    primes = sieve_primes(nmax)
    worst = 0.0
    for i, p in enumerate(primes):
        if p * p <= nmax:
            worst = max(worst, abs(a[p] * a[p] - 1.0 - a[p * p]))
        for q in primes[i + 1 :]:
            if p * q > nmax:
                break
            worst = max(worst, abs(a[p] * a[q] - a[p * q]))
    return worst


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "crates/core/fixtures/maass_even_r13p78.json"
    t0 = time.time()
    print("building kernel spline at R =", R0)
    spline = build_kernel(R0)
    print("  %.1fs" % (time.time() - t0))

    ca, cb, gap = coeff_gap(spline)
    print("stage 1: inter-height coefficient gap = %.3e" % gap)
    print("  a(2)=%.12f a(3)=%.12f a(5)=%.12f" % (ca[2], ca[3], ca[5]))
    R = R0
    if gap > 1e-8:
        # polish R by secant on the inter-height gap of a(2)
        def g(r):
            s = build_kernel(r)
            x, y, _ = coeff_gap(s)
            return x[2] - y[2], s, x

        r1, r2 = R0 - 2e-10, R0 + 2e-10
        g1, _, _ = g(r1)
        for _ in range(6):
            g2, spline, ca = g(r2)
            if abs(g2) < 1e-13 or g2 == g1:
                break
            r1, r2, g1 = r2, r2 - g2 * (r2 - r1) / (g2 - g1), g2
        R = r2
        _, _, gap = coeff_gap(spline)
        print("polished R = %.12f, gap = %.3e" % (R, gap))

    rng = np.random.default_rng(7)
    auto_res = automorphy_residual(spline, ca, rng)
    print("automorphy residual at random points: %.3e" % auto_res)

    print("stage 2: extracting a(n) for n <= %d" % NMAX)
    a, route_gap = stage2_all(spline, ca, NMAX)
    print("  two-height route gap: %.3e" % route_gap)
    print("  %.1fs total" % (time.time() - t0))

    hecke_res = hecke_certificate(a, NMAX)
    print("hecke multiplicativity residual (never imposed): %.3e" % hecke_res)

    primes = sieve_primes(NMAX)
    ks = 7.0 / 64.0
    for p in primes:
        bound = p**ks + p**(-ks) + 1e-6
        if abs(a[p]) > bound:
            raise RuntimeError("|a(%d)| = %g violates the p^(7/64) bound" % (p, abs(a[p])))

    precision = max(hecke_res, route_gap, auto_res, gap)
    fixture = {
        "name": "first even Hecke-Maass cusp form for SL2(Z)",
        "spectral_R": R,
        "parity": "even",
        "eigenvalues": [[int(p), float(a[p])] for p in primes],
        "source": "tools/generate_fixture.py: horocycle collocation + DCT "
        "extraction; accuracy certified by multiplicativity residuals "
        "(relations not imposed by the solver)",
        "precision": float(precision),
    }
    with open(out_path, "w") as fh:
        json.dump(fixture, fh, indent=1)
    print("wrote %s (precision %.3e, %d primes)" % (out_path, precision, len(primes)))


if __name__ == "__main__":
    main()
