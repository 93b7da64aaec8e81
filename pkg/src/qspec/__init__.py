"""Quaternionic spectral toolkit.

Quaternion linear algebra, S-spectra of right-linear operators via the
pseudo-resolvent, basis-dependent left scalar multiplication, a
sequence-space operator extension with a constructive generalized limit,
and commutator superoperator spectra, plus a CLI (``qspec``).
"""
from . import berberian, commutator, engine, leftmult, qcore, rand, sspec
from .engine import BACKEND, HAVE_NUMBA
from .errors import (
    DimensionError,
    DimensionMismatch,
    NoConvergence,
    NotAlmostConvergent,
    NotCommuting,
    ParseError,
    QspecError,
    SequenceBoundError,
    UnsupportedRule,
    ZeroDivisor,
)
from .qcore import (
    ONE,
    QI,
    QJ,
    QK,
    QMatrix,
    Quaternion,
    QVector,
    adjoint,
    canonical_rep,
    complex_adjoint_rep,
    eig,
    inner,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    min_singular,
    qinv,
    qmul,
    real_rep,
    save_matrix,
)

__version__ = "0.1.0"
