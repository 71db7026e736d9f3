"""Reference values for the unit tests, computed independently of the C++ code
with dense numpy/scipy linear algebra. Run: python3 compute_oracles.py"""

import numpy as np
from scipy.integrate import quad, dblquad
from scipy.linalg import expm
from scipy.optimize import minimize


def spin_ops(two_s):
    s = two_s / 2
    m = np.arange(-s, s + 1)
    jp = np.zeros((len(m), len(m)))
    for i in range(len(m) - 1):
        jp[i + 1, i] = np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    jx = (jp + jp.T) / 2
    jy = (jp - jp.T) / 2j
    jz = np.diag(m)
    return jx, jy, jz


def small_d(two_s, beta):
    _, jy, _ = spin_ops(two_s)
    return expm(-1j * beta * jy).real


def sign_observable(two_s, theta):
    jx, _, jz = spin_ops(two_s)
    n = np.sin(theta) * jx + np.cos(theta) * jz
    w, v = np.linalg.eigh(n)
    return v @ np.diag(np.sign(w)) @ v.conj().T


def singlet(two_s):
    d = two_s + 1
    psi = np.zeros((d, d))
    for a in range(d):
        psi[a, d - 1 - a] = (-1) ** (two_s - a)
    return psi / np.sqrt(d)


def corr(psi, oa, ob):
    return np.real(np.trace(psi.conj().T @ oa @ psi @ ob.T))


def chsh(two_s, x):
    psi = singlet(two_s)
    o = [sign_observable(two_s, t) for t in x]
    return corr(psi, o[0], o[2]) + corr(psi, o[0], o[3]) + corr(psi, o[1], o[2]) - corr(psi, o[1], o[3])


def best_chsh(two_s):
    rng = np.random.default_rng(1)
    best = 0
    for _ in range(300):
        r = minimize(lambda x: -abs(chsh(two_s, x)), rng.uniform(0, np.pi, 4), method="Nelder-Mead",
                     options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000})
        best = max(best, -r.fun)
    return best


def hemisphere_povm(two_s):
    s = two_s / 2
    out = []
    for i in range(two_s + 1):
        mplus = i  # s + m
        from math import comb
        f = lambda u: comb(two_s, mplus) * ((1 + u) / 2) ** mplus * ((1 - u) / 2) ** (two_s - mplus)
        out.append((two_s + 1) / 2 * quad(f, 0, 1)[0])
    return out


if __name__ == "__main__":
    np.set_printoptions(precision=15)
    print("small d 2s=3 beta=0.7 rows m' ascending:")
    print(repr(small_d(3, 0.7)))
    print("small d 2s=4 beta=1.3 row m'=1, col m=-2:", small_d(4, 1.3)[3, 0])
    from numpy.polynomial.legendre import leggauss
    print("leggauss 5:", repr(leggauss(5)))
    print("hemisphere P+ 2s=1:", hemisphere_povm(1))
    print("hemisphere P+ 2s=2:", hemisphere_povm(2))
    print("hemisphere P+ 2s=3:", hemisphere_povm(3))
    print("best sharp-sign CHSH 2s=3:", best_chsh(3))
    print("best sharp-sign CHSH 2s=5:", best_chsh(5))
    for s in (1, 2, 4, 10):
        print("cat CHSH s=%d:" % s, 2 * np.sqrt(2) * (1 - 2.0 ** (-2 * s)) ** 2)
    print("window s=1/2:", np.arccos(np.sqrt(2) - 1))
    # singlet s=1/2 Q at relative angle gamma: (1/(2 pi))^2 (1 - cos gamma)/4
    print("Q singlet s=1/2 gamma=pi/3:", (1 / (2 * np.pi)) ** 2 * (1 - np.cos(np.pi / 3)) / 4)
    hbar, c, G, lp, R, M = 1.054571817e-34, 299792458.0, 6.67430e-11, 1.616255e-35, 4.4e26, 1.5e53
    print("precise lab sql sqrt:", -np.log10(hbar))
    print("precise lab causal sqrt:", -np.log10(hbar / c))
    print("precise universe causal linear:", -0.5 * np.log10(hbar / (c * M * R)))
    print("precise lab planck sqrt:", -2 * np.log10(lp))
    print("precise universe causal sqrt:", -np.log10(hbar / (c * M * R)))
    print("precise universe planck sqrt:", -2 * np.log10(lp / R))
    print("schwarzschild 1 kg paper-oom log10:", np.log10(2 * 1e-10 / 1e16))
