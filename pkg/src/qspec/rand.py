"""Seeded random generators for quaternionic objects.

Shared by the test suites and the CLI check driver so that a seed pins
every report byte-for-byte.
"""
from __future__ import annotations

import numpy as np

from .qcore import QMatrix, Quaternion, QVector, inner


def random_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion.from_wxyz(rng.normal(0.0, scale, 4))


def random_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    while True:
        q = rng.normal(0.0, 1.0, 4)
        n = np.sqrt((q ** 2).sum())
        if n > 1e-6:
            return Quaternion.from_wxyz(q / n)


def random_qvector(rng: np.random.Generator, n: int, scale: float = 1.0) -> QVector:
    return QVector(rng.normal(0.0, scale, (n, 4)))


def random_unit_qvector(rng: np.random.Generator, n: int) -> QVector:
    v = random_qvector(rng, n)
    return v.scale(1.0 / v.norm())


def random_qmatrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> QMatrix:
    return QMatrix(rng.normal(0.0, scale, (n, n, 4)))


def random_unitary(rng: np.random.Generator, n: int) -> QMatrix:
    """Random unitary via quaternionic Gram-Schmidt on a random matrix."""
    cols: list[QVector] = []
    while len(cols) < n:
        v = random_qvector(rng, n)
        for u in cols:
            v = v - u.right_mul(inner(u, v))
        if v.norm() > 1e-6:
            cols.append(v.scale(1.0 / v.norm()))
    data = np.zeros((n, n, 4))
    for k, u in enumerate(cols):
        data[:, k, :] = u.data
    return QMatrix(data)


def random_commuting_pair(rng: np.random.Generator, n: int,
                          scale: float = 1.0) -> tuple[QMatrix, QMatrix]:
    """Two real-coefficient polynomials in one random matrix; they commute."""
    M = random_qmatrix(rng, n, scale)
    M2 = M @ M
    a0, a1, a2, b0, b1, b2 = rng.normal(0.0, 1.0, 6)
    eye = QMatrix.identity(n)
    A = eye.scale(a0) + M.scale(a1) + M2.scale(a2)
    B = eye.scale(b0) + M.scale(b1) + M2.scale(b2)
    return A, B
