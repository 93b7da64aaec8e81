"""Numba-jitted kernels for the eigenvalue engine and the margin scans.

Loop-level twins of the vectorized implementations in ``engine``; both
backends run the same algorithm (balance, Householder Hessenberg,
implicit single-shift QR with deflation). Importing this module requires
numba; ``engine`` guards the import.
"""
import numpy as np
from numba import njit

EPS = 2.220446049250313e-16


@njit(cache=True)
def balance(H):
    # Parlett-Reinsch diagonal scaling by powers of two (norm-reducing,
    # exactly invertible in binary floating point).
    m = H.shape[0]
    radix = 2.0
    for _ in range(64):
        done = True
        for i in range(m):
            c = 0.0
            r = 0.0
            for j in range(m):
                if j != i:
                    c += abs(H[j, i])
                    r += abs(H[i, j])
            if c == 0.0 or r == 0.0:
                continue
            s = c + r
            f = 1.0
            g = r / radix
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c >= g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                done = False
                inv = 1.0 / f
                for j in range(m):
                    H[i, j] *= inv
                for j in range(m):
                    H[j, i] *= f
        if done:
            break


@njit(cache=True)
def hessenberg(H):
    m = H.shape[0]
    v = np.zeros(m, np.complex128)
    for k in range(m - 2):
        alpha2 = 0.0
        for i in range(k + 1, m):
            alpha2 += abs(H[i, k]) ** 2
        alpha = np.sqrt(alpha2)
        if alpha == 0.0:
            continue
        x0 = H[k + 1, k]
        ax0 = abs(x0)
        if ax0 > 0.0:
            phase = x0 / ax0
        else:
            phase = 1.0 + 0.0j
        vn2 = 0.0
        for i in range(k + 1, m):
            v[i] = H[i, k]
        v[k + 1] += phase * alpha
        for i in range(k + 1, m):
            vn2 += abs(v[i]) ** 2
        if vn2 == 0.0:
            continue
        beta = 2.0 / vn2
        # H <- P H with P = I - beta v v^H
        for j in range(k, m):
            s = 0.0 + 0.0j
            for i in range(k + 1, m):
                s += np.conj(v[i]) * H[i, j]
            s *= beta
            for i in range(k + 1, m):
                H[i, j] -= v[i] * s
        # H <- H P
        for i in range(m):
            s = 0.0 + 0.0j
            for j in range(k + 1, m):
                s += H[i, j] * v[j]
            s *= beta
            for j in range(k + 1, m):
                H[i, j] -= s * np.conj(v[j])
        for i in range(k + 2, m):
            H[i, k] = 0.0


@njit(cache=True)
def qr_eigvals(H, cap):
    """Eigenvalues of an upper Hessenberg matrix, destructively.

    Returns (eigs, converged); converged is False when the sweep cap is
    exhausted before full deflation.
    """
    m = H.shape[0]
    eigs = np.zeros(m, np.complex128)
    if m == 0:
        return eigs, True
    anorm = 0.0
    for i in range(m):
        for j in range(m):
            anorm += abs(H[i, j])
    if anorm == 0.0:
        return eigs, True
    hi = m - 1
    sweeps = 0
    stuck = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            s = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if s == 0.0:
                s = anorm
            if abs(H[lo, lo - 1]) <= EPS * s:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = H[hi, hi]
            hi -= 1
            stuck = 0
            continue
        if lo == hi - 1:
            a = H[hi - 1, hi - 1]
            b = H[hi - 1, hi]
            c = H[hi, hi - 1]
            d = H[hi, hi]
            tr = a + d
            disc = np.sqrt((a - d) * (a - d) + 4.0 * b * c)
            eigs[hi] = 0.5 * (tr + disc)
            eigs[hi - 1] = 0.5 * (tr - disc)
            hi -= 2
            stuck = 0
            continue
        sweeps += 1
        if sweeps > cap:
            return eigs, False
        stuck += 1
        a = H[hi - 1, hi - 1]
        b = H[hi - 1, hi]
        c = H[hi, hi - 1]
        d = H[hi, hi]
        if stuck % 12 == 0:
            # exceptional shift to break rare limit cycles
            sigma = d + 0.75 * (abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2]))
        else:
            tr = a + d
            disc = np.sqrt((a - d) * (a - d) + 4.0 * b * c)
            l1 = 0.5 * (tr + disc)
            l2 = 0.5 * (tr - disc)
            if abs(l1 - d) <= abs(l2 - d):
                sigma = l1
            else:
                sigma = l2
        # implicit single-shift sweep on the active window [lo, hi]
        x = H[lo, lo] - sigma
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            ax = abs(x)
            ay = abs(y)
            if ay == 0.0:
                cth = 1.0
                sth = 0.0 + 0.0j
            elif ax == 0.0:
                cth = 0.0
                sth = np.conj(y) / ay
            else:
                dnm = np.sqrt(ax * ax + ay * ay)
                cth = ax / dnm
                sth = (x / ax) * (np.conj(y) / dnm)
            c0 = k - 1
            if c0 < lo:
                c0 = lo
            for j in range(c0, hi + 1):
                t1 = H[k, j]
                t2 = H[k + 1, j]
                H[k, j] = cth * t1 + sth * t2
                H[k + 1, j] = -np.conj(sth) * t1 + cth * t2
            r1 = k + 2
            if r1 > hi:
                r1 = hi
            for i in range(lo, r1 + 1):
                t1 = H[i, k]
                t2 = H[i, k + 1]
                H[i, k] = cth * t1 + np.conj(sth) * t2
                H[i, k + 1] = -sth * t1 + cth * t2
            if k < hi - 1:
                x = H[k + 1, k]
                y = H[k + 2, k]
    return eigs, True


@njit(cache=True)
def eigvals(M, cap):
    H = M.astype(np.complex128).copy()
    balance(H)
    hessenberg(H)
    return qr_eigvals(H, cap)


@njit(cache=True)
def min_singular(M, cap):
    """Smallest singular value via the smallest Gram eigenvalue."""
    m = M.shape[0]
    G = np.zeros((m, m), np.complex128)
    for i in range(m):
        for j in range(m):
            s = 0.0 + 0.0j
            for k in range(m):
                s += np.conj(M[k, i]) * M[k, j]
            G[i, j] = s
    # hermitize against rounding
    for i in range(m):
        for j in range(i + 1, m):
            t = 0.5 * (G[i, j] + np.conj(G[j, i]))
            G[i, j] = t
            G[j, i] = np.conj(t)
        G[i, i] = G[i, i].real + 0.0j
    ev, ok = eigvals(G, cap)
    lam = np.inf
    for i in range(m):
        if ev[i].real < lam:
            lam = ev[i].real
    if lam < 0.0:
        lam = 0.0
    return np.sqrt(lam), ok


@njit(cache=True)
def grid_margins(M, M2, avals, rvals, cap):
    """min_singular of M^2 - 2a M + (a^2 + r^2) I over an (a, r) grid.

    M is the real representation of the operator; the pseudo-resolvent has
    real coefficients so the whole scan stays in one real matrix family.
    """
    m = M.shape[0]
    na = avals.shape[0]
    nr = rvals.shape[0]
    out = np.zeros((na, nr))
    R = np.zeros((m, m))
    for ia in range(na):
        a = avals[ia]
        for ir in range(nr):
            s = a * a + rvals[ir] * rvals[ir]
            for i in range(m):
                for j in range(m):
                    R[i, j] = M2[i, j] - 2.0 * a * M[i, j]
                R[i, i] += s
            sig, ok = min_singular(R, cap)
            if not ok:
                out[ia, ir] = -1.0
            else:
                out[ia, ir] = sig
    return out
