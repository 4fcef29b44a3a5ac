"""High-precision reference values frozen into the C++ tests.

Independent of the C++ code: Taylor coefficients come from mpmath numerical
differentiation, ladders from direct Laplace-series formulas in 40-digit arithmetic.

    python3 tests/oracles/frozen_values.py
"""
from math import factorial

import mpmath as mp

mp.mp.dps = 40

POINTS = {
    "HighTemp": (1, "0.3", "0"),
    "Critical": (1, "0.5", "0"),
    "LowTemp": (1, "1", "0"),
    "Field": (1, "0.3", "0.2"),
}


def dfact(m):
    r = mp.mpf(1)
    while m > 1:
        r *= m
        m -= 2
    return r


def solve_z(d, b, h):
    k = 2 * d * b
    if h == 0 and k <= 1:
        return mp.mpf(0)
    return mp.findroot(lambda z: mp.tanh(k * z + abs(h)) - z, 0.99)


def phi_fn(d, b, h):
    return lambda t: mp.log(mp.cosh(t)) - (t - abs(h)) ** 2 / (4 * d * b)


def psi_fn(d, b, h):
    return lambda t, u: (mp.log(mp.cosh(2 * t) / 2 + mp.cos(u) / 2) - (t - abs(h)) ** 2 / (2 * d * b)) / 2


def rho(t, u):
    return (mp.exp(-t) + mp.exp(t) * mp.cos(u)) / mp.sqrt(2 * mp.cosh(2 * t) + 2 * mp.cos(u))


def entropy(m):
    a, b = (1 + m) / 2, (1 - m) / 2
    return -(a * mp.log(a) + b * mp.log(b))


def comp_sum(a, s, k):
    # Σ over compositions m_1 + ... + m_k = s (m_i ≥ 1) of Π a[m_i].
    if k == 0:
        return mp.mpf(1) if s == 0 else mp.mpf(0)
    return sum(a[m] * comp_sum(a, s - m, k - 1) for m in range(1, s - k + 2))


def is_critical(d, b, h):
    return h == 0 and abs(b - mp.mpf(1) / (2 * d)) < 1e-15


def e_coeffs(d, b, h, M):
    db = d * b
    if is_critical(d, b, h):
        a = mp.taylor(phi_fn(d, b, h), 0, 2 * M + 6)
        c = mp.mpf(0.75) ** 0.25 / mp.sqrt(2 * mp.pi)
        es = [c * mp.gamma(0.25)]
        for p in range(1, M + 1):
            aa = {m: a[2 * m + 4] for m in range(1, p + 1)}
            s = sum(mp.mpf(12) ** (mp.mpf(p) / 2 + k) * mp.gamma(mp.mpf(p) / 2 + k + 0.25) / factorial(k)
                    * comp_sum(aa, p, k) for k in range(1, p + 1))
            es.append(c * s)
        return es, mp.mpf(0)
    z = solve_z(d, b, h)
    t = 2 * db * z + abs(h)
    a = mp.taylor(phi_fn(d, b, h), t, 2 * M + 6)
    a2 = a[2]
    two_bumps = h == 0 and b > mp.mpf(1) / (2 * d)
    pref = (-db * a2) ** -0.5 if two_bumps else (-4 * db * a2) ** -0.5
    es = [pref]
    for p in range(1, M + 1):
        aa = {m: a[m + 2] for m in range(1, 2 * p + 1)}
        s = sum(dfact(2 * p + 2 * k - 1) / factorial(k) * (-2 * a2) ** (-(p + k)) * comp_sum(aa, 2 * p, k)
                for k in range(1, 2 * p + 1))
        es.append(pref * s)
    return es, t


def bi_taylor(d, b, h, t0, D):
    f = psi_fn(d, b, h)
    return {(p, q): mp.diff(f, (t0, 0), (p, q)) / (factorial(p) * factorial(q))
            for p in range(D + 1) for q in range(D + 1 - p)}


def part_sum(A, P, Q, k, memo):
    key = (P, Q, k)
    if key in memo:
        return memo[key]
    if k == 0:
        return mp.mpf(1) if P == 0 and Q == 0 else mp.mpf(0)
    s = mp.mpf(0)
    for (p, q), a in A.items():
        if p <= P and q <= Q and a != 0:
            s += a * part_sum(A, P - p, Q - q, k - 1, memo)
    memo[key] = s
    return s


def gamma_coeffs(d, b, h, M):
    db = mp.mpf(d) * b
    if is_critical(d, b, h):
        raw = bi_taylor(d, b, h, 0, 2 * M + 6)
        # Even powers only, indexed by half-powers; t^{2p}u^{2q} with p + 2q ≥ 3.
        A = {(p // 2, q // 2): v for (p, q), v in raw.items()
             if p % 2 == 0 and q % 2 == 0 and p // 2 + q >= 3}
        gs = [mp.mpf(0.75) ** 0.25 * mp.gamma(0.25) / mp.pi]
        memo = {}
        for p in range(1, M + 1):
            s = mp.mpf(0)
            for k in range(1, p + 1):
                for P in range(3 * p + 10):
                    for Q in range(3 * p + 10):
                        if P + 2 * Q - 2 * k != p:
                            continue
                        g = part_sum(A, P, Q, k, memo)
                        if g:
                            s += (g / factorial(k) * mp.mpf(3) ** (mp.mpf(P) / 2 + 0.25)
                                  * mp.mpf(2) ** (P + 3 * Q + 1) * mp.gamma(mp.mpf(P) / 2 + 0.25)
                                  * mp.gamma(Q + 0.5))
            gs.append(s / (2 * mp.pi) ** 1.5)
        return gs
    z = solve_z(d, b, h)
    t = 2 * db * z + abs(h)
    raw = bi_taylor(d, b, h, t, 2 * M + 4)
    a20, a02 = raw[(2, 0)], raw[(0, 2)]
    A = {k: v for k, v in raw.items() if k[0] + k[1] >= 3}
    bumps = 2 if h == 0 and b > mp.mpf(1) / (2 * d) else 1
    pref = bumps / ((2 * mp.pi) ** 1.5 * mp.sqrt(2 * db))
    gs = [pref * (-a20) ** -0.5 * (-a02) ** -0.5 * mp.pi]
    memo = {}
    for p in range(1, M + 1):
        s = mp.mpf(0)
        for k in range(1, 2 * p + 1):
            for P in range(0, 2 * (k + p) + 1, 2):
                Q = 2 * (k + p) - P
                g = part_sum(A, P, Q, k, memo)
                s += (g / factorial(k) * (-a20) ** (-(mp.mpf(P) + 1) / 2) * (-a02) ** (-(mp.mpf(Q) + 1) / 2)
                      * mp.gamma((mp.mpf(P) + 1) / 2) * mp.gamma((mp.mpf(Q) + 1) / 2))
        gs.append(pref * s)
    return gs


def h_coeffs(es, gs):
    H = []
    for j in range(len(gs)):
        H.append((gs[j] - sum(es[i] * H[j - i] for i in range(1, j + 1))) / es[0])
    return H


def show(name, xs):
    print(f"{name}: " + ", ".join(mp.nstr(x, 15) for x in xs))


if __name__ == "__main__":
    show("psi(d=1,b=0.25,h=0; t=0.3,u=0.2)", [psi_fn(1, mp.mpf("0.25"), 0)(mp.mpf("0.3"), mp.mpf("0.2"))])
    show("rho(0.5, 1)", [rho(mp.mpf("0.5"), mp.mpf(1))])
    show("entropy(0.5)", [entropy(mp.mpf("0.5"))])
    show("phi(d=1,b=0.25,h=0; t=1)", [phi_fn(1, mp.mpf("0.25"), 0)(mp.mpf(1))])
    show("z* (1,1,0)", [solve_z(1, mp.mpf(1), 0)])
    show("z* (1,0.3,0.2)", [solve_z(1, mp.mpf("0.3"), mp.mpf("0.2"))])
    show("log Z (1,1,0) n=4", [mp.log(2 * mp.e ** 4 + 8 * mp.e + 6)])
    for name, (d, b, h) in POINTS.items():
        b, h = mp.mpf(b), mp.mpf(h)
        es, t = e_coeffs(d, b, h, 4)
        gs = gamma_coeffs(d, b, h, 2)
        print(f"[{name}] t* = {mp.nstr(t, 15)}")
        show("  e", es)
        show("  gamma", gs)
        show("  H", h_coeffs(es, gs))
