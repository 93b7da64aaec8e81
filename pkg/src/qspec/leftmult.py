"""Basis-dependent left scalar multiplication on vectors and operators.

A left multiplication is induced by a choice of orthonormal basis
{phi_k}: q . phi = sum_k phi_k q <phi_k | phi>. Different bases give
genuinely different products, so the basis is a first-class value here
(an explicit unitary matrix whose columns are the basis vectors); the
standard context is the identity, where the product is componentwise
q phi_k.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .qcore import QMatrix, Quaternion, QVector, inner

_UNITARITY_TOL = 1e-10


class LeftMultContext:
    """Orthonormal basis carried as a unitary matrix U with the basis as columns."""

    def __init__(self, basis: QMatrix):
        gram = basis.adjoint() @ basis
        defect = (gram - QMatrix.identity(basis.n)).frobenius_norm()
        if defect > _UNITARITY_TOL:
            raise ValueError(f"basis is not unitary (defect {defect:.3e})")
        self.basis = basis

    @classmethod
    def standard(cls, n: int) -> "LeftMultContext":
        return cls(QMatrix.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.n

    def basis_vector(self, k: int) -> QVector:
        return QVector(self.basis.data[:, k, :])

    def __repr__(self) -> str:
        return f"LeftMultContext(dim={self.dim})"


def left_mul_vec(ctx: LeftMultContext, q: Quaternion, phi: QVector) -> QVector:
    """q . phi = sum_k phi_k q <phi_k | phi>, evaluated term by term."""
    if ctx.dim != phi.dim:
        raise DimensionMismatch(f"context dim {ctx.dim} cannot act on vector dim {phi.dim}")
    out = np.zeros((phi.dim, 4))
    for k in range(ctx.dim):
        bk = ctx.basis_vector(k)
        coeff = q * inner(bk, phi)
        out += bk.right_mul(coeff).data
    return QVector(out)


def left_mul_matrix(ctx: LeftMultContext, q: Quaternion) -> QMatrix:
    """The unique matrix M_q with M_q phi = q . phi: U diag(q,...,q) U^dag."""
    U = ctx.basis
    D = QMatrix.diag([q] * ctx.dim)
    return U @ D @ U.adjoint()


def left_mul_op(ctx: LeftMultContext, q: Quaternion, A: QMatrix) -> QMatrix:
    """(q A) phi = q (A phi), i.e. M_q A."""
    if ctx.dim != A.n:
        raise DimensionMismatch(f"context dim {ctx.dim} does not match operator dim {A.n}")
    return left_mul_matrix(ctx, q) @ A


def right_mul_op(ctx: LeftMultContext, q: Quaternion, A: QMatrix) -> QMatrix:
    """(A q) phi = A (q phi), i.e. A M_q."""
    if ctx.dim != A.n:
        raise DimensionMismatch(f"context dim {ctx.dim} does not match operator dim {A.n}")
    return A @ left_mul_matrix(ctx, q)


def basis_dependence_witness() -> tuple[LeftMultContext, LeftMultContext, Quaternion, QVector, float]:
    """A constructed (ctx1, ctx2, q, phi) whose two left products differ.

    On a one-dimensional space with basis (1+i)/sqrt(2), the product
    j . e1 evaluates to e1 k, while the standard basis gives e1 j; the
    discrepancy has norm sqrt(2).
    """
    ctx1 = LeftMultContext.standard(1)
    s = 1.0 / np.sqrt(2.0)
    ctx2 = LeftMultContext(QMatrix(np.array([[[s, s, 0.0, 0.0]]])))
    q = Quaternion(0.0, 0.0, 1.0, 0.0)
    phi = QVector.basis(1, 0)
    gap = (left_mul_vec(ctx1, q, phi) - left_mul_vec(ctx2, q, phi)).norm()
    return ctx1, ctx2, q, phi, gap
