"""Quaternion scalars, vectors, matrices and their real/complex realizations.

Conventions, fixed once and enforced by tests:

* a quaternion is stored as (w, x, y, z) with q = w + x i + y j + z k;
* matrix entries multiply vector components from the LEFT, scalars
  multiply vectors from the RIGHT, so A(phi q) = (A phi) q;
* the complex split is q = (w + x i) + (y + z i) j, giving the 2n x 2n
  complex adjoint matrix [[A1, A2], [-conj(A2), conj(A1)]];
* the real representation replaces each entry by the 4x4 matrix of left
  multiplication on coordinates (1, i, j, k).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import engine
from .errors import DimensionError, DimensionMismatch, ParseError, ZeroDivisor

eig = engine.eigvals
min_singular = engine.min_singular


@dataclass(frozen=True)
class Quaternion:
    """Scalar q = w + x i + y j + z k with double-precision coefficients."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_wxyz(cls, arr) -> "Quaternion":
        w, x, y, z = (float(t) for t in arr)
        return cls(w, x, y, z)

    @property
    def wxyz(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def imag_norm(self) -> float:
        return float(np.sqrt(self.x * self.x + self.y * self.y + self.z * self.z))

    def inverse(self) -> "Quaternion":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisor("zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def is_close(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)

    def __rmul__(self, other):
        # real scalars commute with everything
        return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)

    def __truediv__(self, other: float) -> "Quaternion":
        return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)

    def __repr__(self) -> str:
        return f"Quaternion({self.w}, {self.x}, {self.y}, {self.z})"


ONE = Quaternion(1.0)
QI = Quaternion(0.0, 1.0, 0.0, 0.0)
QJ = Quaternion(0.0, 0.0, 1.0, 0.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product; non-commutative (ij = k = -ji)."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def qinv(q: Quaternion) -> Quaternion:
    """Multiplicative inverse, conjugate over squared norm."""
    return q.inverse()


def canonical_rep(q: Quaternion) -> tuple[float, float]:
    """(Re q, |Im q|): the canonical point of the sphere of q."""
    return q.w, q.imag_norm()


# ---------------------------------------------------------------------------
# array helpers on (..., 4) coefficient layouts
# ---------------------------------------------------------------------------

def _qarr_mul(a, b):
    w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def _qarr_conj(a):
    out = a.copy()
    out[..., 1:] *= -1.0
    return out


def _split(a):
    """(..., 4) real -> complex pair (A1, A2) with q = A1 + A2 j."""
    return a[..., 0] + 1j * a[..., 1], a[..., 2] + 1j * a[..., 3]


def _unsplit(c1, c2):
    return np.stack([c1.real, c1.imag, c2.real, c2.imag], axis=-1)


# 4x4 blocks of left/right multiplication by the units, on coords (1,i,j,k)
_LEFT_BLOCKS = np.array([
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
], dtype=np.float64)

_RIGHT_BLOCKS = np.array([
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
], dtype=np.float64)


def left_mult_block(q: Quaternion) -> np.ndarray:
    """4x4 real matrix of p -> q p on coordinates (1, i, j, k)."""
    return np.einsum("c,cab->ab", q.wxyz, _LEFT_BLOCKS)


def right_mult_block(q: Quaternion) -> np.ndarray:
    """4x4 real matrix of p -> p q on coordinates (1, i, j, k)."""
    return np.einsum("c,cab->ab", q.wxyz, _RIGHT_BLOCKS)


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

class QVector:
    """Column vector over the quaternions, components stored as (n, 4)."""

    def __init__(self, data):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] < 1:
            raise DimensionMismatch("QVector needs an (n, 4) coefficient array with n >= 1")
        self.data = arr

    @classmethod
    def from_quaternions(cls, comps) -> "QVector":
        return cls(np.array([c.wxyz for c in comps]))

    @classmethod
    def zeros(cls, n: int) -> "QVector":
        return cls(np.zeros((n, 4)))

    @classmethod
    def basis(cls, n: int, k: int) -> "QVector":
        data = np.zeros((n, 4))
        data[k, 0] = 1.0
        return cls(data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def component(self, k: int) -> Quaternion:
        return Quaternion.from_wxyz(self.data[k])

    def coords(self) -> np.ndarray:
        """Real coordinates, component k occupying slots 4k..4k+3."""
        return self.data.reshape(-1).copy()

    @classmethod
    def from_coords(cls, coords) -> "QVector":
        arr = np.asarray(coords, dtype=np.float64)
        return cls(arr.reshape(-1, 4))

    def right_mul(self, q: Quaternion) -> "QVector":
        """phi q: every component multiplied by q on the right."""
        return QVector(_qarr_mul(self.data, q.wxyz[None, :]))

    def scale(self, r: float) -> "QVector":
        return QVector(self.data * float(r))

    def norm(self) -> float:
        return float(np.sqrt((self.data ** 2).sum()))

    def __add__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(self.data + other.data)

    def __sub__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(self.data - other.data)

    def __neg__(self) -> "QVector":
        return QVector(-self.data)

    def __mul__(self, q: Quaternion) -> "QVector":
        return self.right_mul(q)

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(f"vector dims {self.dim} and {other.dim} differ")

    def is_close(self, other: "QVector", tol: float = 1e-12) -> bool:
        return self.dim == other.dim and (self - other).norm() <= tol

    def __repr__(self) -> str:
        return f"QVector(dim={self.dim})"


def inner(phi: QVector, psi: QVector) -> Quaternion:
    """<phi | psi> = sum_k conj(phi_k) psi_k.

    Right-linear in psi and left-antilinear in phi, matching the axioms
    <phi | psi q> = <phi | psi> q and <phi q | psi> = conj(q) <phi | psi>.
    """
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"vector dims {phi.dim} and {psi.dim} differ")
    prod = _qarr_mul(_qarr_conj(phi.data), psi.data)
    return Quaternion.from_wxyz(prod.sum(axis=0))


class QMatrix:
    """Square matrix over the quaternions, entries stored as (n, n, 4).

    Acts on QVector by (A phi)_i = sum_j a_ij phi_j, which is right-linear.
    """

    def __init__(self, data):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 4 \
                or arr.shape[0] < 1:
            raise DimensionMismatch("QMatrix needs an (n, n, 4) coefficient array with n >= 1")
        self.data = arr

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n), 0] = 1.0
        return cls(data)

    @classmethod
    def zeros(cls, n: int) -> "QMatrix":
        return cls(np.zeros((n, n, 4)))

    @classmethod
    def diag(cls, entries) -> "QMatrix":
        n = len(entries)
        data = np.zeros((n, n, 4))
        for k, q in enumerate(entries):
            data[k, k] = q.wxyz
        return cls(data)

    @classmethod
    def from_entries(cls, rows) -> "QMatrix":
        return cls(np.array([[q.wxyz for q in row] for row in rows]))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def entry(self, i: int, j: int) -> Quaternion:
        return Quaternion.from_wxyz(self.data[i, j])

    def adjoint(self) -> "QMatrix":
        """Entrywise conjugate transpose; <psi|A phi> = <A^dag psi|phi>."""
        return QMatrix(_qarr_conj(self.data.transpose(1, 0, 2)))

    def scale(self, r: float) -> "QMatrix":
        return QMatrix(self.data * float(r))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_dim(other)
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_dim(other)
        return QMatrix(self.data - other.data)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def __matmul__(self, other):
        a1, a2 = _split(self.data)
        if isinstance(other, QMatrix):
            self._check_dim(other)
            b1, b2 = _split(other.data)
            c1 = a1 @ b1 - a2 @ b2.conj()
            c2 = a1 @ b2 + a2 @ b1.conj()
            return QMatrix(_unsplit(c1, c2))
        if isinstance(other, QVector):
            if self.n != other.dim:
                raise DimensionMismatch(f"matrix dim {self.n} cannot act on vector dim {other.dim}")
            v1, v2 = _split(other.data)
            r1 = a1 @ v1 - a2 @ v2.conj()
            r2 = a1 @ v2 + a2 @ v1.conj()
            return QVector(_unsplit(r1, r2))
        return NotImplemented

    def _check_dim(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"matrix dims {self.n} and {other.n} differ")

    def apply_stack(self, stack: np.ndarray) -> np.ndarray:
        """Act on a batch of vectors given as a (..., n, 4) coefficient array."""
        stack = np.asarray(stack, dtype=np.float64)
        if stack.shape[-2] != self.n or stack.shape[-1] != 4:
            raise DimensionMismatch(f"stack shape {stack.shape} does not match dim {self.n}")
        a1, a2 = _split(self.data)
        v1, v2 = _split(stack)
        r1 = np.einsum("ij,...j->...i", a1, v1) - np.einsum("ij,...j->...i", a2, v2.conj())
        r2 = np.einsum("ij,...j->...i", a1, v2) + np.einsum("ij,...j->...i", a2, v1.conj())
        return _unsplit(r1, r2)

    def frobenius_norm(self) -> float:
        return float(np.sqrt((self.data ** 2).sum()))

    def norm(self, sweep_cap: int | None = None) -> float:
        """Operator norm: largest singular value of the complex adjoint matrix."""
        chi = complex_adjoint_rep(self)
        G = chi.conj().T @ chi
        G = 0.5 * (G + G.conj().T)
        lam = engine.eigvals(G, sweep_cap=sweep_cap).real.max()
        return float(np.sqrt(max(lam, 0.0)))

    def is_close(self, other: "QMatrix", tol: float = 1e-12) -> bool:
        return self.n == other.n and (self - other).frobenius_norm() <= tol

    def __repr__(self) -> str:
        return f"QMatrix(n={self.n})"


def adjoint(A: QMatrix) -> QMatrix:
    return A.adjoint()


def real_rep(A: QMatrix) -> np.ndarray:
    """4n x 4n real matrix acting on stacked (1,i,j,k) coordinates.

    real_rep(A) @ phi.coords() == (A @ phi).coords(), and the map is
    multiplicative with real_rep(adjoint(A)) = real_rep(A).T.
    """
    n = A.n
    blocks = np.einsum("ijc,cab->iajb", A.data, _LEFT_BLOCKS)
    return np.ascontiguousarray(blocks.reshape(4 * n, 4 * n))


def complex_adjoint_rep(A: QMatrix) -> np.ndarray:
    """2n x 2n complex matrix [[A1, A2], [-conj(A2), conj(A1)]]."""
    a1, a2 = _split(A.data)
    top = np.hstack([a1, a2])
    bottom = np.hstack([-a2.conj(), a1.conj()])
    return np.ascontiguousarray(np.vstack([top, bottom]))


# ---------------------------------------------------------------------------
# matrix file format
# ---------------------------------------------------------------------------

def matrix_to_json(A: QMatrix) -> str:
    """Serialize as {"n": ..., "entries": [[[w,x,y,z], ...], ...]}, row-major."""
    entries = [[list(A.data[i, j]) for j in range(A.n)] for i in range(A.n)]
    return json.dumps({"n": A.n, "entries": entries})


def matrix_from_json(text: str) -> QMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise ParseError('matrix JSON needs keys "n" and "entries"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f'"n" must be a positive integer, got {n!r}')
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n:
        raise DimensionError(f"expected {n} rows, got {len(entries) if isinstance(entries, list) else 'non-list'}")
    data = np.zeros((n, n, 4))
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise DimensionError(f"row {i} has {len(row) if isinstance(row, list) else 'no'} entries, expected {n}")
        for j, quad in enumerate(row):
            if not isinstance(quad, list) or len(quad) != 4:
                raise ParseError(f"entry ({i},{j}) is not a [w,x,y,z] quadruple")
            try:
                data[i, j] = [float(t) for t in quad]
            except (TypeError, ValueError) as exc:
                raise ParseError(f"entry ({i},{j}) holds a non-numeric value") from exc
    if not np.all(np.isfinite(data)):
        raise ParseError("matrix entries must be finite")
    return QMatrix(data)


def load_matrix(path) -> QMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return matrix_from_json(text)


def save_matrix(A: QMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_json(A))
        fh.write("\n")
