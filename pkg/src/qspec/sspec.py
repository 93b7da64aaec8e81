"""S-spectra of quaternionic matrices via the pseudo-resolvent.

The pseudo-resolvent R_q(A) = A^2 - 2 Re(q) A + |q|^2 I has real
coefficients, so for q = a + b u (u a unit imaginary) its real
representation is M^2 - 2a M + (a^2 + b^2) I with M = real_rep(A), and
det of that equals |det(M - (a + b i) I)|^2. R_q(A) is therefore
singular exactly when a + b i is a complex eigenvalue of M, which turns
the invertibility definition of the spectrum into one eigenvalue
computation on the complex adjoint matrix. The grid scan over margins
is kept as an independent oracle.

Spectra are reported as eigenspheres (Re q, |Im q|, multiplicity); at
finite dimension every spectral sphere is point spectrum, since a
rank-deficient R_q(A) has nontrivial kernel and a full-rank one is onto.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import engine
from .qcore import QMatrix, Quaternion, complex_adjoint_rep, real_rep


@dataclass(frozen=True)
class SpectralSphere:
    """Eigensphere {p : Re p = re, |Im p| = im} with algebraic multiplicity."""

    re: float
    im: float
    mult: int
    cls: str = "point"


@dataclass(frozen=True)
class SpectrumReport:
    spheres: tuple[SpectralSphere, ...]
    operator_norm: float
    tol: float

    def total_multiplicity(self) -> int:
        return sum(s.mult for s in self.spheres)

    def sphere_tuples(self) -> list[tuple[float, float]]:
        return [(s.re, s.im) for s in self.spheres]

    def distance(self, a: float, r: float) -> float:
        """Chebyshev distance from (a, r) to the nearest reported sphere."""
        return min(max(abs(a - s.re), abs(r - s.im)) for s in self.spheres)

    def to_dict(self) -> dict:
        return {
            "spheres": [
                {"re": s.re, "im": s.im, "mult": s.mult, "class": s.cls}
                for s in self.spheres
            ],
            "tol": self.tol,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        lines = ["re,im,mult"]
        lines += [f"{s.re!r},{s.im!r},{s.mult}" for s in self.spheres]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PseudoResolvent:
    """R_q(A) = A^2 - 2 Re(q) A + |q|^2 I; depends on q through (Re q, |q|) only."""

    matrix: QMatrix
    q: Quaternion
    source: QMatrix


def pseudo_resolvent(A: QMatrix, q: Quaternion) -> PseudoResolvent:
    eye = QMatrix.identity(A.n)
    R = (A @ A) - A.scale(2.0 * q.w) + eye.scale(q.norm_sq())
    return PseudoResolvent(matrix=R, q=q, source=A)


def _merge_representatives(points: np.ndarray, tol: float) -> list[tuple[float, float, int]]:
    """Group (a, r) representatives within tol, in canonical sorted order."""
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    groups: list[list[np.ndarray]] = []
    for p in pts:
        placed = False
        for g in groups:
            ref = g[0]
            if abs(p[0] - ref[0]) <= tol and abs(p[1] - ref[1]) <= tol:
                g.append(p)
                placed = True
                break
        if not placed:
            groups.append([p])
    merged = []
    for g in groups:
        arr = np.array(g)
        merged.append((float(arr[:, 0].mean()), float(arr[:, 1].mean()), len(g)))
    merged.sort()
    return merged


def s_spectrum(A: QMatrix, tol: float | None = None,
               sweep_cap: int | None = None) -> SpectrumReport:
    """Eigenspheres of A with multiplicities summing to n.

    Spheres come from the eigenvalues of the complex adjoint matrix; each
    sphere carries half the total multiplicity its eigenvalues have there
    (conjugate pairs collapse onto one sphere, and real eigenvalues are
    doubled by the quaternionic structure).
    """
    opnorm = A.norm(sweep_cap=sweep_cap)
    if tol is None:
        tol = 1e-6 * (1.0 + opnorm)
    ev = engine.eigvals(complex_adjoint_rep(A), sweep_cap=sweep_cap)
    points = np.column_stack([ev.real, np.abs(ev.imag)])
    merged = _merge_representatives(points, tol)
    spheres = []
    for a, r, count in merged:
        mult = count / 2.0
        mult_int = int(round(mult))
        # total chi-multiplicity per sphere is even; rounding guards float ties
        spheres.append(SpectralSphere(re=a, im=r, mult=max(mult_int, 1)))
    return SpectrumReport(spheres=tuple(spheres), operator_norm=opnorm, tol=tol)


def membership(A: QMatrix, q: Quaternion, tol: float = 1e-6,
               sweep_cap: int | None = None) -> tuple[bool, float]:
    """Spectrum membership certificate for one quaternion.

    The margin is the smallest singular value of the real representation
    of R_q(A); zero margin means q fails the bounded-invertibility test.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    R = pseudo_resolvent(A, q).matrix
    margin = engine.min_singular(real_rep(R), sweep_cap=sweep_cap)
    opnorm = A.norm(sweep_cap=sweep_cap)
    member = margin <= tol * (1.0 + opnorm ** 2)
    return member, float(margin)


def classify(A: QMatrix, q: Quaternion, tol: float = 1e-8,
             sweep_cap: int | None = None) -> str:
    """'point' or 'regular'; never residual or continuous.

    At finite dimension rank-nullity collapses the trichotomy: a singular
    R_q(A) has nontrivial kernel (point), a nonsingular one is onto with
    bounded inverse (regular).
    """
    member, _ = membership(A, q, tol=tol, sweep_cap=sweep_cap)
    return "point" if member else "regular"


def apo_sus_certificates(A: QMatrix, q: Quaternion,
                         sweep_cap: int | None = None) -> tuple[float, float]:
    """(approximate-point margin, surjectivity margin) for q.

    apo margin is min_singular of real_rep(R_q(A)); the surjectivity
    margin is the same functional on the adjoint. q sits in the
    respective spectrum part exactly when the margin vanishes, and at
    finite dimension both vanish together.
    """
    apo = engine.min_singular(real_rep(pseudo_resolvent(A, q).matrix),
                              sweep_cap=sweep_cap)
    sus = engine.min_singular(real_rep(pseudo_resolvent(A.adjoint(), q).matrix),
                              sweep_cap=sweep_cap)
    return float(apo), float(sus)


# ---------------------------------------------------------------------------
# sphere-band arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandSet:
    """Union of annular sphere bands {q : Re q = a, rmin <= |Im q| <= rmax}."""

    bands: tuple[tuple[float, float, float], ...]

    def contains_point(self, a: float, r: float, tol: float = 1e-9) -> bool:
        for ba, rmin, rmax in self.bands:
            if abs(a - ba) <= tol and rmin - tol <= r <= rmax + tol:
                return True
        return False

    def contains_quaternion(self, q: Quaternion, tol: float = 1e-9) -> bool:
        return self.contains_point(q.w, q.imag_norm(), tol)

    def to_list(self) -> list[dict]:
        return [{"re": a, "rmin": rmin, "rmax": rmax} for a, rmin, rmax in self.bands]


def band_arithmetic(op: str, s1, s2) -> BandSet:
    """Minkowski sum/difference of two sphere sets as annular bands.

    Two spheres (a1, r1), (a2, r2) combine to the band
    (a1 +/- a2, |r1 - r2|, r1 + r2): imaginary parts are 3-vectors of
    norms r1 and r2, and the triangle inequality range is fully attained.
    """
    if op not in ("sum", "diff"):
        raise ValueError(f"op must be 'sum' or 'diff', got {op!r}")
    sign = 1.0 if op == "sum" else -1.0
    bands = []
    for p in s1:
        a1, r1 = (p.re, p.im) if isinstance(p, SpectralSphere) else p
        for t in s2:
            a2, r2 = (t.re, t.im) if isinstance(t, SpectralSphere) else t
            bands.append((a1 + sign * a2, abs(r1 - r2), r1 + r2))
    bands.sort()
    return BandSet(bands=tuple(bands))


# ---------------------------------------------------------------------------
# grid-scan oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridScan:
    avals: np.ndarray
    rvals: np.ndarray
    margins: np.ndarray
    step: float

    def local_minima(self) -> list[tuple[int, int]]:
        """Indices of grid points not exceeded by any of their 8 neighbors."""
        m = self.margins
        na, nr = m.shape
        padded = np.pad(m, 1, constant_values=np.inf)
        ok = np.ones((na, nr), dtype=bool)
        for da in (-1, 0, 1):
            for dr in (-1, 0, 1):
                if da == 0 and dr == 0:
                    continue
                ok &= m <= padded[1 + da:1 + da + na, 1 + dr:1 + dr + nr]
        ia, ir = np.nonzero(ok)
        return list(zip(ia.tolist(), ir.tolist()))


def grid_scan(A: QMatrix, step: float = 0.05, sweep_cap: int | None = None) -> GridScan:
    """Margins of real_rep(R_q(A)) over an (a, r) grid covering the norm ball."""
    if not 0.0 < step <= 1.0:
        raise ValueError("grid step must lie in (0, 1]")
    bound = A.norm(sweep_cap=sweep_cap)
    na = int(np.floor(bound / step))
    avals = np.arange(-na, na + 1) * step
    rvals = np.arange(0, na + 1) * step
    margins = engine.grid_margins(real_rep(A), avals, rvals, sweep_cap=sweep_cap)
    return GridScan(avals=avals, rvals=rvals, margins=margins, step=step)
