"""Superoperators L_S, R_T and the commutator C(S,T) = L_S - R_T.

These act on the n x n quaternionic matrix space, carried exclusively as
4n^2 x 4n^2 real matrices on stacked entry coordinates: R_T fails
right-linearity under the natural module structures, but the
pseudo-resolvent has only real coefficients, so the real Banach-algebra
reading needs no right-module choice. Spectra therefore count
upper-half-plane representatives of the real matrix: conjugate pairs
once, real eigenvalues with their full multiplicity. With that counting
the left/right multiplication superoperators reproduce the base spectra
as sphere sets, with nonreal sphere multiplicities scaled by 2n.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import engine
from .errors import DimensionMismatch, NotCommuting
from .qcore import (
    QMatrix,
    _LEFT_BLOCKS,
    _RIGHT_BLOCKS,
    complex_adjoint_rep,
)
from .sspec import BandSet, SpectralSphere, SpectrumReport, band_arithmetic, s_spectrum


@dataclass(frozen=True)
class Superoperator:
    """Linear map on H^{n x n} carried as its 4n^2 x 4n^2 real matrix."""

    kind: str  # "lmul" | "rmul" | "commutator"
    real_mat: np.ndarray
    n: int
    left: QMatrix | None = None
    right: QMatrix | None = None

    def apply(self, A: QMatrix) -> QMatrix:
        if A.n != self.n:
            raise DimensionMismatch(f"superoperator dim {self.n} cannot act on {A.n}")
        out = self.real_mat @ A.data.reshape(-1)
        return QMatrix(out.reshape(self.n, self.n, 4))

    def norm(self, sweep_cap: int | None = None) -> float:
        G = self.real_mat.T @ self.real_mat
        G = 0.5 * (G + G.T)
        lam = engine.eigvals(G, sweep_cap=sweep_cap).real.max()
        return float(np.sqrt(max(lam, 0.0)))

    def __sub__(self, other: "Superoperator") -> "Superoperator":
        if self.n != other.n:
            raise DimensionMismatch("superoperator dims differ")
        return Superoperator(kind="commutator", real_mat=self.real_mat - other.real_mat,
                             n=self.n, left=self.left, right=other.right)


def lmul_superop(S: QMatrix) -> Superoperator:
    """A -> S A; same eigensphere set as S itself."""
    n = S.n
    blocks = np.einsum("ikc,cab->iakb", S.data, _LEFT_BLOCKS)
    M = np.zeros((n, n, 4, n, n, 4))
    for j in range(n):
        M[:, j, :, :, j, :] = blocks
    return Superoperator(kind="lmul", real_mat=M.reshape(4 * n * n, 4 * n * n),
                         n=n, left=S)


def rmul_superop(T: QMatrix) -> Superoperator:
    """A -> A T; same eigensphere set as T itself."""
    n = T.n
    blocks = np.einsum("ljc,cab->jalb", T.data, _RIGHT_BLOCKS)
    M = np.zeros((n, n, 4, n, n, 4))
    for i in range(n):
        M[i, :, :, i, :, :] = blocks
    return Superoperator(kind="rmul", real_mat=M.reshape(4 * n * n, 4 * n * n),
                         n=n, right=T)


def commutator_superop(S: QMatrix, T: QMatrix) -> Superoperator:
    """C(S,T): A -> S A - A T; annihilates exactly the intertwiners of (S, T)."""
    if S.n != T.n:
        raise DimensionMismatch(f"operator dims {S.n} and {T.n} differ")
    C = lmul_superop(S) - rmul_superop(T)
    return Superoperator(kind="commutator", real_mat=C.real_mat, n=S.n,
                         left=S, right=T)


def superop_s_spectrum(sup: Superoperator, tol: float | None = None,
                       sweep_cap: int | None = None) -> SpectrumReport:
    """Eigenspheres of the superoperator from its real matrix.

    Upper-half-plane counting: each conjugate pair contributes once to
    its sphere, real eigenvalues contribute their full multiplicity.
    """
    opnorm = sup.norm(sweep_cap=sweep_cap)
    if tol is None:
        tol = 1e-6 * (1.0 + opnorm)
    ev = engine.eigvals(sup.real_mat, sweep_cap=sweep_cap)
    points = np.column_stack([ev.real, np.abs(ev.imag)])
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    ims = ev.imag[order]
    groups: list[tuple[list, list]] = []
    for p, im in zip(pts, ims):
        placed = False
        for g in groups:
            ref = g[0][0]
            if abs(p[0] - ref[0]) <= tol and abs(p[1] - ref[1]) <= tol:
                g[0].append(p)
                g[1].append(im)
                placed = True
                break
        if not placed:
            groups.append(([p], [im]))
    spheres = []
    for members, im_values in groups:
        arr = np.array(members)
        n_real = sum(1 for v in im_values if abs(v) <= tol)
        n_pairs = (len(im_values) - n_real) // 2
        spheres.append(SpectralSphere(re=float(arr[:, 0].mean()),
                                      im=float(arr[:, 1].mean()),
                                      mult=max(n_real + n_pairs, 1)))
    spheres.sort(key=lambda s: (s.re, s.im))
    return SpectrumReport(spheres=tuple(spheres), operator_norm=opnorm, tol=tol)


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckReport:
    inclusion: bool
    endpoint: bool | None
    equality: bool | None
    witnesses: tuple[tuple[float, float], ...]
    bands: BandSet

    @property
    def required_pass(self) -> bool:
        return self.inclusion and (self.endpoint is None or self.endpoint)

    def to_dict(self) -> dict:
        return {
            "inclusion": self.inclusion,
            "endpoint": self.endpoint,
            "equality": self.equality,
            "witnesses": [{"re": a, "im": r} for a, r in self.witnesses],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def cop1_check(A: QMatrix, B: QMatrix, tol: float | None = None,
               sweep_cap: int | None = None) -> CheckReport:
    """Spectrum-of-a-sum containment for a commuting pair.

    Every eigensphere of A + B must lie in the Minkowski sum of the
    sphere sets of A and B. The approximate-point and surjectivity
    variants coincide with the full spectrum at finite dimension, so one
    containment covers all three statements. Non-commuting input is a
    precondition violation, not a falsified theorem.
    """
    if A.n != B.n:
        raise DimensionMismatch(f"operator dims {A.n} and {B.n} differ")
    norm_a, norm_b = A.norm(sweep_cap=sweep_cap), B.norm(sweep_cap=sweep_cap)
    defect = ((A @ B) - (B @ A)).frobenius_norm()
    if defect > 1e-10 * max(norm_a * norm_b, 1.0):
        raise NotCommuting(f"commutator defect {defect:.3e} exceeds tolerance")
    if tol is None:
        tol = 1e-6 * (1.0 + norm_a + norm_b)
    spec_a = s_spectrum(A, sweep_cap=sweep_cap)
    spec_b = s_spectrum(B, sweep_cap=sweep_cap)
    spec_sum = s_spectrum(A + B, sweep_cap=sweep_cap)
    bands = band_arithmetic("sum", spec_a.spheres, spec_b.spheres)
    witnesses = tuple((s.re, s.im) for s in spec_sum.spheres
                      if not bands.contains_point(s.re, s.im, tol))
    return CheckReport(inclusion=not witnesses, endpoint=None, equality=None,
                       witnesses=witnesses, bands=bands)


def _endpoint_candidates(S: QMatrix, T: QMatrix,
                         sweep_cap: int | None = None) -> np.ndarray:
    """Canonical points (Re, |Im|) of all eigenvalue differences, conjugates included."""
    evs = engine.eigvals(complex_adjoint_rep(S), sweep_cap=sweep_cap)
    evt = engine.eigvals(complex_adjoint_rep(T), sweep_cap=sweep_cap)
    out = []
    for lam in evs:
        for mu in evt:
            dre = lam.real - mu.real
            out.append((dre, abs(abs(lam.imag) - abs(mu.imag))))
            out.append((dre, abs(lam.imag) + abs(mu.imag)))
    return np.array(out)


def ct1_check(S: QMatrix, T: QMatrix, tol: float | None = None,
              sweep_cap: int | None = None) -> CheckReport:
    """Commutator spectrum versus the Minkowski difference of the base spectra.

    INCLUSION and ENDPOINT must pass: every sphere of the commutator's
    spectrum lies in the difference band set and arises as the canonical
    point of an eigenvalue difference. EQUALITY (the spectrum exhausting
    the band continuum) is reported, not required: a finite-dimensional
    commutator has finitely many spheres, while a generic band is a
    continuum, so equality typically fails and the report records that.
    """
    if S.n != T.n:
        raise DimensionMismatch(f"operator dims {S.n} and {T.n} differ")
    if tol is None:
        tol = 1e-6 * (1.0 + S.norm(sweep_cap=sweep_cap) + T.norm(sweep_cap=sweep_cap))
    spec_s = s_spectrum(S, sweep_cap=sweep_cap)
    spec_t = s_spectrum(T, sweep_cap=sweep_cap)
    spec_c = superop_s_spectrum(commutator_superop(S, T), sweep_cap=sweep_cap)
    bands = band_arithmetic("diff", spec_s.spheres, spec_t.spheres)

    witnesses = tuple((s.re, s.im) for s in spec_c.spheres
                      if not bands.contains_point(s.re, s.im, tol))
    inclusion = not witnesses

    cands = _endpoint_candidates(S, T, sweep_cap=sweep_cap)
    endpoint = True
    for s in spec_c.spheres:
        d = np.max(np.abs(cands - np.array([s.re, s.im])), axis=1).min()
        if d > tol:
            endpoint = False
            break

    eq_tol = max(4.0 * tol, 1e-3)
    equality = True
    for ba, rmin, rmax in bands.bands:
        samples = np.linspace(rmin, rmax, 21) if rmax > rmin else np.array([rmin])
        for r in samples:
            d = min(max(abs(ba - s.re), abs(r - s.im)) for s in spec_c.spheres)
            if d > eq_tol:
                equality = False
                break
        if not equality:
            break

    return CheckReport(inclusion=inclusion, endpoint=endpoint, equality=equality,
                       witnesses=witnesses, bands=bands)
