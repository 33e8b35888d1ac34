"""Exact-rational oracle for the F[2,2,5] shrinking point of the 3D
border-collision normal form (tauL=0, sigmaL=-1, deltaL=1/5, tauR=-2,
sigmaR=0, deltaR=2, mu=1).  Independent of the C++ implementation: uses
sympy rationals and brute-force word construction."""
from sympy import Rational as Q, Matrix, eye, zeros, symbols, simplify, nsimplify
from math import gcd


def rot_word(ell, m, n):
    return ''.join('L' if (i * m) % n < ell else 'R' for i in range(n))


def flip(w, j):
    j %= len(w)
    return w[:j] + ('R' if w[j] == 'L' else 'L') + w[j + 1:]


def shift(w, j):
    n = len(w)
    return ''.join(w[(i + j) % n] for i in range(n))


def inv_mod(m, n):
    return next(d for d in range(1, n) if (m * d) % n == 1)


def mats(tauL, sigmaL, deltaL, tauR, sigmaR, deltaR):
    AL = Matrix([[tauL, 1, 0], [-sigmaL, 0, 1], [deltaL, 0, 0]])
    AR = Matrix([[tauR, 1, 0], [-sigmaR, 0, 1], [deltaR, 0, 0]])
    B = Matrix([1, 0, 0])
    return AL, AR, B


def MP(w, AL, AR):
    N = AL.shape[0]
    M = eye(N)
    P = zeros(N, N)
    for s in w:
        A = AL if s == 'L' else AR
        M = A * M
        P = A * P + eye(N)
    return M, P


def cycle(w, AL, AR, B, mu=1):
    M, P = MP(w, AL, AR)
    x = (eye(3) - M).LUsolve(P * B * mu)
    pts = [x]
    for s in w[:-1]:
        A = AL if s == 'L' else AR
        x = A * x + B * mu
        pts.append(x)
    return pts


def main():
    AL, AR, B = mats(0, -1, Q(1, 5), -2, 0, 2)
    ell, m, n = 2, 2, 5
    d = inv_mod(m, n)
    S = rot_word(ell, m, n)
    S0 = flip(S, 0)
    y = cycle(S0, AL, AR, B)
    t = [v[0] for v in y]
    print('S', S, 'd', d, 't', t)
    a = (eye(3) - MP(S0, AL, AR)[0]).det()
    b = (eye(3) - MP(flip(S, ell * d), AL, AR)[0]).det()
    MS = MP(S, AL, AR)[0]
    lam = symbols('lam')
    cp = (eye(3) - MS).charpoly(lam).as_expr()
    # c = product of nonzero eigenvalues of I - M_S = coefficient of lam^1 (up to sign)
    c = (cp.diff(lam).subs(lam, 0))
    c = c * (-1) ** (3 - 1)
    print('a', a, 'b', b, 'c', c)

    def uv(j):
        Mj = MP(shift(S, j), AL, AR)[0]
        adj = (eye(3) - Mj).adjugate()
        u = adj[0, :] / c
        jd = (j + d) % n
        jj = j % n
        v = (y[jd] - y[jj]) / (t[jd] - t[jj])
        return u, v

    idx = {'0': 0, 'lm1d': ((ell - 1) * d) % n, 'ld': (ell * d) % n, 'md': (-d) % n}
    U = {k: uv(j) for k, j in idx.items()}
    M0ld = MP(shift(S0, ell * d), AL, AR)[0]
    Mldbar = MP(flip(S, ell * d), AL, AR)[0]
    Mldbar_ld = MP(shift(flip(S, ell * d), ell * d), AL, AR)[0]
    MS0 = MP(S0, AL, AR)[0]

    def kplus(chi):
        if chi <= -1:
            return (U['ld'][0] * M0ld ** (-chi - 1) * U['lm1d'][1])[0]
        return (U['0'][0] * Mldbar ** chi * U['md'][1])[0]

    def kminus(chi):
        if chi <= 0:
            return (U['md'][0] * MS0 ** (-chi) * U['0'][1])[0]
        return (U['lm1d'][0] * Mldbar_ld ** (chi - 1) * U['ld'][1])[0]

    for chi in (-2, -1, 0, 1):
        print('kappa+', chi, nsimplify(kplus(chi)))
    for chi in (-1, 0, 1, 2):
        print('kappa-', chi, nsimplify(kminus(chi)))


if __name__ == '__main__':
    main()
