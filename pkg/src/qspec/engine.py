"""Dense eigenvalue engine: balance, Hessenberg reduction, shifted QR.

One algorithm, two backends. The default backend runs the numba kernels
from ``_kernels``; setting ``QSPEC_PURE_NUMPY=1`` (or a missing numba)
selects vectorized numpy twins of the same sweep. Complex arithmetic
throughout, so real and complex inputs share a single code path. The
sweep cap defaults to 100 per matrix dimension and every caller can
override it; exhaustion raises :class:`~qspec.errors.NoConvergence`.

``min_singular`` follows the Gram-matrix route (smallest eigenvalue of
M^H M) rather than a full SVD. In the numpy backend the batched scans
(``grid_margins``) and Gram eigenvalues go through ``numpy.linalg.eigvalsh``,
which computes the same symmetric quantity; the numba backend stays on
the self-contained QR kernels end to end.
"""
from __future__ import annotations

import os

import numpy as np

from .errors import NoConvergence

_EPS = float(np.finfo(np.float64).eps)

_FORCE_NUMPY = os.environ.get("QSPEC_PURE_NUMPY", "").strip() not in ("", "0")

HAVE_NUMBA = False
_nb = None
if not _FORCE_NUMPY:
    try:
        from . import _kernels as _nb

        HAVE_NUMBA = True
    except ImportError:
        _nb = None

BACKEND = "numba" if HAVE_NUMBA else "numpy"

if HAVE_NUMBA:
    threads = os.environ.get("QSPEC_THREADS", "").strip()
    if threads:
        try:
            import numba

            numba.set_num_threads(max(1, int(threads)))
        except (ValueError, RuntimeError):
            pass


def default_sweep_cap(m: int) -> int:
    return 100 * max(m, 1)


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _balance_np(H):
    m = H.shape[0]
    radix = 2.0
    for _ in range(64):
        done = True
        for i in range(m):
            c = np.abs(H[:, i]).sum() - abs(H[i, i])
            r = np.abs(H[i, :]).sum() - abs(H[i, i])
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
                H[i, :] *= 1.0 / f
                H[:, i] *= f
        if done:
            break


def _hessenberg_np(H):
    m = H.shape[0]
    for k in range(m - 2):
        x = H[k + 1:, k]
        alpha = np.sqrt((np.abs(x) ** 2).sum())
        if alpha == 0.0:
            continue
        ax0 = abs(x[0])
        phase = x[0] / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        v = x.copy()
        v[0] += phase * alpha
        vn2 = (np.abs(v) ** 2).sum()
        if vn2 == 0.0:
            continue
        beta = 2.0 / vn2
        w = beta * (v.conj() @ H[k + 1:, k:])
        H[k + 1:, k:] -= np.outer(v, w)
        w2 = beta * (H[:, k + 1:] @ v)
        H[:, k + 1:] -= np.outer(w2, v.conj())
        H[k + 2:, k] = 0.0


def _qr_eigvals_np(H, cap):
    m = H.shape[0]
    eigs = np.zeros(m, np.complex128)
    if m == 0:
        return eigs, True
    anorm = np.abs(H).sum()
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
            if abs(H[lo, lo - 1]) <= _EPS * s:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = H[hi, hi]
            hi -= 1
            stuck = 0
            continue
        if lo == hi - 1:
            a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
            c, d = H[hi, hi - 1], H[hi, hi]
            tr = a + d
            disc = np.sqrt((a - d) * (a - d) + 4.0 * b * c + 0j)
            eigs[hi] = 0.5 * (tr + disc)
            eigs[hi - 1] = 0.5 * (tr - disc)
            hi -= 2
            stuck = 0
            continue
        sweeps += 1
        if sweeps > cap:
            return eigs, False
        stuck += 1
        a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
        c, d = H[hi, hi - 1], H[hi, hi]
        if stuck % 12 == 0:
            sigma = d + 0.75 * (abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2]))
        else:
            tr = a + d
            disc = np.sqrt((a - d) * (a - d) + 4.0 * b * c + 0j)
            l1 = 0.5 * (tr + disc)
            l2 = 0.5 * (tr - disc)
            sigma = l1 if abs(l1 - d) <= abs(l2 - d) else l2
        x = H[lo, lo] - sigma
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            ax, ay = abs(x), abs(y)
            if ay == 0.0:
                cth, sth = 1.0, 0.0 + 0.0j
            elif ax == 0.0:
                cth, sth = 0.0, np.conj(y) / ay
            else:
                dnm = np.sqrt(ax * ax + ay * ay)
                cth = ax / dnm
                sth = (x / ax) * (np.conj(y) / dnm)
            c0 = max(k - 1, lo)
            t1 = H[k, c0:hi + 1].copy()
            t2 = H[k + 1, c0:hi + 1].copy()
            H[k, c0:hi + 1] = cth * t1 + sth * t2
            H[k + 1, c0:hi + 1] = -np.conj(sth) * t1 + cth * t2
            r1 = min(k + 2, hi)
            u1 = H[lo:r1 + 1, k].copy()
            u2 = H[lo:r1 + 1, k + 1].copy()
            H[lo:r1 + 1, k] = cth * u1 + np.conj(sth) * u2
            H[lo:r1 + 1, k + 1] = -sth * u1 + cth * u2
            if k < hi - 1:
                x = H[k + 1, k]
                y = H[k + 2, k]
    return eigs, True


def _eigvals_np(M, cap):
    H = np.ascontiguousarray(M, dtype=np.complex128).copy()
    _balance_np(H)
    _hessenberg_np(H)
    return _qr_eigvals_np(H, cap)


def _min_singular_np(M):
    M = np.asarray(M)
    G = M.conj().T @ M
    G = 0.5 * (G + G.conj().T)
    lam = float(np.linalg.eigvalsh(G)[0])
    return np.sqrt(max(lam, 0.0))


def _grid_margins_np(M, M2, avals, rvals):
    m = M.shape[0]
    eye = np.eye(m)
    out = np.empty((avals.size, rvals.size))
    # chunk the (a, r) grid to bound the batched-stack memory
    pairs_a, pairs_r = np.meshgrid(avals, rvals, indexing="ij")
    flat_a = pairs_a.ravel()
    flat_s = (pairs_a ** 2 + pairs_r ** 2).ravel()
    res = np.empty(flat_a.size)
    step = 4096
    for start in range(0, flat_a.size, step):
        a = flat_a[start:start + step]
        s = flat_s[start:start + step]
        R = M2[None, :, :] - 2.0 * a[:, None, None] * M[None, :, :] \
            + s[:, None, None] * eye[None, :, :]
        G = np.matmul(np.transpose(R, (0, 2, 1)), R)
        G = 0.5 * (G + np.transpose(G, (0, 2, 1)))
        lam = np.linalg.eigvalsh(G)[:, 0]
        res[start:start + step] = np.sqrt(np.maximum(lam, 0.0))
    out[:, :] = res.reshape(avals.size, rvals.size)
    return out


# ---------------------------------------------------------------------------
# public surface
# ---------------------------------------------------------------------------

def _resolve(backend):
    b = backend or BACKEND
    if b == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable")
    if b not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {b!r}")
    return b


def eigvals(M, sweep_cap: int | None = None, backend: str | None = None) -> np.ndarray:
    """All eigenvalues of a square real or complex matrix, with multiplicity.

    Sorted by (real, imag) so equal inputs give identical output.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("eigvals needs a square 2-D matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("eigvals needs finite entries")
    m = M.shape[0]
    cap = default_sweep_cap(m) if sweep_cap is None else int(sweep_cap)
    if _resolve(backend) == "numba":
        ev, ok = _nb.eigvals(np.ascontiguousarray(M, dtype=np.complex128), cap)
    else:
        ev, ok = _eigvals_np(M, cap)
    if not ok:
        raise NoConvergence(f"QR iteration exceeded {cap} sweeps on a {m}x{m} matrix")
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]


def min_singular(M, sweep_cap: int | None = None, backend: str | None = None) -> float:
    """Smallest singular value of a square matrix via its Gram matrix."""
    M = np.asarray(M)
    m = M.shape[0]
    cap = default_sweep_cap(m) if sweep_cap is None else int(sweep_cap)
    if _resolve(backend) == "numba":
        sig, ok = _nb.min_singular(np.ascontiguousarray(M, dtype=np.complex128), cap)
        if not ok:
            raise NoConvergence(f"QR iteration exceeded {cap} sweeps on a {m}x{m} Gram matrix")
        return float(sig)
    return _min_singular_np(M)


def grid_margins(M, avals, rvals, sweep_cap: int | None = None,
                 backend: str | None = None) -> np.ndarray:
    """min_singular of ``M^2 - 2a M + (a^2+r^2) I`` over an (a, r) grid.

    M must be real (a real representation); returns an array of shape
    (len(avals), len(rvals)).
    """
    M = np.ascontiguousarray(M, dtype=np.float64)
    avals = np.ascontiguousarray(avals, dtype=np.float64)
    rvals = np.ascontiguousarray(rvals, dtype=np.float64)
    M2 = M @ M
    cap = default_sweep_cap(M.shape[0]) if sweep_cap is None else int(sweep_cap)
    if _resolve(backend) == "numba":
        out = _nb.grid_margins(M, M2, avals, rvals, cap)
        if np.any(out < 0.0):
            raise NoConvergence("QR iteration exceeded its sweep cap during a grid scan")
        return out
    return _grid_margins_np(M, M2, avals, rvals)


def warm_up() -> None:
    """Trigger one jit compile of each kernel (no-op on the numpy backend)."""
    if not HAVE_NUMBA:
        return
    M = np.array([[0.0, 1.0], [-1.0, 0.0]])
    eigvals(M)
    min_singular(M)
    grid_margins(M, np.array([0.0]), np.array([0.5, 1.0]))
