#!/usr/bin/env python3
"""Generate the bounded-domain operator coefficient files in data/operators.

Traditional diagonal-norm SBP closures are obtained by solving the order
conditions for the boundary block (orders 4 and 6).  Upwind pairs are built as

    D+- = P^{-1} (Q_c + B/2 -+ S/2),    S = 2 c (Delta^m)^T Delta^m,

where Q_c is the central SBP operator and Delta^m is the undivided m-th
difference, so S is symmetric positive semi-definite.  DRP pairs additionally
add beta * (Delta^m)^T J Delta^m (skew-symmetric) to Q_c with beta fitted to
the exact wavenumber on [0, pi/2].

Usage: gen_operators.py OUTDIR
"""
import sys
from pathlib import Path

import mpmath as mp
import sympy as sp

mp.mp.dps = 40

# Free parameter of the order-6 traditional closure (standard literature value).
SBP6_X1 = mp.mpf("0.7012864708758515873330865176727084281558")

# Dissipation: (m, c) with S = 2 c (Delta^m)^T Delta^m.
DISSIPATION = {4: (3, mp.mpf(1) / 60), 5: (3, mp.mpf(1) / 60), 6: (4, mp.mpf(1) / 280)}
BOUNDARY_ORDER = {4: 2, 5: 2, 6: 3}
N_ASSEMBLY = 48


def central_coeffs(s):
    return [sp.Integer(-1) ** (k + 1) * sp.factorial(s) ** 2
            / (k * sp.factorial(s - k) * sp.factorial(s + k)) for k in range(1, s + 1)]


def traditional_closure(r, s, gamma):
    a = central_coeffs(s)
    qs, unknowns = {}, []
    for i in range(r):
        for j in range(i + 1, r):
            v = sp.Symbol(f"q{i}_{j}")
            qs[(i, j)], qs[(j, i)] = v, -v
            unknowns.append(v)
    hs = sp.symbols(f"h0:{r}")
    unknowns += list(hs)

    def entry(i, j):
        if i < r and j < r:
            if i == j:
                return sp.Rational(-1, 2) if i == 0 else 0
            return qs[(i, j)]
        k = j - i
        if k == 0 or abs(k) > s:
            return 0
        return a[k - 1] if k > 0 else -a[-k - 1]

    eqs = []
    for i in range(r):
        for p in range(gamma + 1):
            lhs = sum(entry(i, j) * sp.Integer(j) ** p for j in range(r + s))
            rhs = hs[i] * p * sp.Integer(i) ** (p - 1) if p > 0 else 0
            eqs.append(lhs - rhs)
    sol = sp.solve(eqs, unknowns, dict=True)[0]
    return a, {str(k): sol.get(k, k) for k in unknowns}


def central_dense(order, n):
    r, s, gamma = (4, 2, 2) if order == 4 else (6, 3, 3)
    a, sol = traditional_closure(r, s, gamma)
    subs = {sp.Symbol("q4_5"): sp.Float(str(SBP6_X1), 45)}
    val = {k: mp.mpf(str(sp.N(sp.sympify(v).subs(subs), 45))) for k, v in sol.items()}
    Q = mp.zeros(n, n)
    h = [mp.mpf(1)] * n
    for i in range(n):
        for k in range(1, s + 1):
            c = mp.mpf(str(sp.N(a[k - 1], 45)))
            if i + k < n:
                Q[i, i + k] = c
            if i - k >= 0:
                Q[i, i - k] = -c
    for i in range(r):
        for j in range(r):
            Q[i, j] = 0
    for i in range(r):
        h[i] = h[n - 1 - i] = val[f"h{i}"]
        for j in range(i + 1, r):
            Q[i, j] = val[f"q{i}_{j}"]
            Q[j, i] = -Q[i, j]
    for i in range(r):
        for j in range(r):
            Q[n - 1 - i, n - 1 - j] = -Q[i, j]
    Q[0, 0] = mp.mpf(-0.5)
    Q[n - 1, n - 1] = mp.mpf(0.5)
    return Q, h


def difference(n, m):
    D = mp.eye(n)
    for _ in range(m):
        E = mp.zeros(D.rows - 1, n)
        for i in range(D.rows - 1):
            for j in range(n):
                E[i, j] = D[i + 1, j] - D[i, j]
        D = E
    return D


def skew_term(n, m):
    M = difference(n, m)
    J = mp.zeros(n - m, n - m)
    for i in range(n - m - 1):
        J[i, i + 1] = mp.mpf(0.5)
        J[i + 1, i] = mp.mpf(-0.5)
    return M.T * J * M


def drp_beta(order):
    s = 2 if order == 4 else 3
    a = [mp.mpf(str(sp.N(c, 45))) for c in central_coeffs(s)]
    m = DISSIPATION[order][0]
    kc = lambda t: sum(2 * a[k] * mp.sin((k + 1) * t) for k in range(s))
    phi = lambda t: (2 - 2 * mp.cos(t)) ** m * mp.sin(t)
    top = mp.quad(lambda t: (t - kc(t)) * phi(t), [0, mp.pi / 2])
    bot = mp.quad(lambda t: phi(t) ** 2, [0, mp.pi / 2])
    return top / bot


def assemble(family, order, n):
    if family == "sbp":
        Q, h = central_dense(order, n)
        D = mp.zeros(n, n)
        for i in range(n):
            for j in range(n):
                D[i, j] = Q[i, j] / h[i]
        return D, D.copy(), h, None
    corder = order if order % 2 == 0 else order + 1
    Q, h = central_dense(corder, n)
    m, c = DISSIPATION[order]
    M = difference(n, m)
    S = 2 * c * (M.T * M)
    beta = None
    if family == "drp":
        beta = drp_beta(order)
        Q = Q + beta * skew_term(n, m)
    Dp, Dm = mp.zeros(n, n), mp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            Dp[i, j] = (Q[i, j] - S[i, j] / 2) / h[i]
            Dm[i, j] = (Q[i, j] + S[i, j] / 2) / h[i]
    return Dp, Dm, h, beta


def split(D, n, tol=mp.mpf("1e-30")):
    mid = n // 2
    cols = [j for j in range(n) if abs(D[mid, j]) > tol]
    lo, hi = cols[0] - mid, cols[-1] - mid
    stencil = [D[mid, mid + k] for k in range(lo, hi + 1)]

    def is_interior(i):
        for j in range(n):
            k = j - i
            ref = stencil[k - lo] if lo <= k <= hi else 0
            if abs(D[i, j] - ref) > tol:
                return False
        return True

    r = 0
    while not is_interior(r):
        r += 1
    rows = []
    for i in range(r):
        nz = [j for j in range(n) if abs(D[i, j]) > tol]
        rows.append((i, nz[0], [D[i, j] for j in range(nz[0], nz[-1] + 1)]))
    return lo, stencil, rows


def fmt(x):
    return mp.nstr(x, 20, min_fixed=-3, max_fixed=3)


def write(family, order, outdir):
    n = N_ASSEMBLY + 1
    Dp, Dm, h, beta = assemble(family, order, n)
    lo_p, st_p, rows_p = split(Dp, n)
    lo_m, st_m, rows_m = split(Dm, n)
    nw = max(len(rows_p), len(rows_m))
    lines = [
        f"# {family}{order}: bounded first-derivative pair, coefficients in units of 1/dx,",
        "# weights in units of dx; right boundary follows from D+[N-i][N-j] = -D-[i][j].",
        f"family {family}",
        f"interior_order {order}",
        f"boundary_order {BOUNDARY_ORDER[order]}",
    ]
    if beta is not None:
        lines.append(f"drp_beta {fmt(beta)}")
    lines.append(f"weights {nw}")
    lines.append("  " + " ".join(fmt(h[i]) for i in range(nw)))
    for tag, lo, st, rows in (("plus", lo_p, st_p, rows_p), ("minus", lo_m, st_m, rows_m)):
        lines.append(f"interior_{tag} {lo} {len(st)}")
        lines.append("  " + " ".join(fmt(c) for c in st))
        lines.append(f"block_{tag} {len(rows)}")
        for i, j0, cs in rows:
            lines.append(f"  {i} {j0} {len(cs)} " + " ".join(fmt(c) for c in cs))
    path = Path(outdir) / f"{family}{order}.txt"
    path.write_text("\n".join(lines) + "\n")
    print(path)


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "data/operators"
    for family, orders in (("sbp", (4, 6)), ("dp", (4, 5, 6)), ("drp", (4, 5, 6))):
        for order in orders:
            write(family, order, outdir)


if __name__ == "__main__":
    main()
