"""Bounded sequence spaces, a constructive generalized limit, and the
sequence-space extension of bounded operators.

The generalized limit here is PARTIAL. A total positive shift-invariant
limit on all bounded sequences is non-constructive, so ``glim`` detects
its own domain: tail-window means of the raw sequence are compared at
dyadic checkpoints and refined by Richardson extrapolation (exact for
c + alpha/n tails); when the raw windows disagree, the sequence is
re-tried after iterated Cesaro smoothing up to the configured depth,
which handles bounded oscillation. Outside that domain it raises
NotAlmostConvergent. All operations on returned values are linear, so
the additivity and scalar laws hold exactly; convergent sequences give
their limits and nonnegative real sequences give nonnegative values.

Vectors in sequences are finitely supported coordinates in one ambient
indexing; operators act through banded rules, and the quotient inner
product is the generalized limit of the termwise inner products. The
shift-specific Weyl construction psi_n = n^{-1/2} sum_{k<n} e_k conj(q)^k
realizes approximate-point spectrum elements as exact eigenvectors of
the extension, which the certificate verifies numerically.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .errors import (
    NotAlmostConvergent,
    SequenceBoundError,
    UnsupportedRule,
)
from .qcore import (
    QMatrix,
    Quaternion,
    QVector,
    _qarr_conj,
    _qarr_mul,
    inner,
    real_rep,
)


@dataclass(frozen=True)
class GeneralizedLimitConfig:
    """Horizon, Cesaro retry depth and agreement tolerance for glim."""

    horizon: int = 100_000
    cesaro_depth: int = 2
    tol: float = 1e-4

    def __post_init__(self):
        if self.horizon < 100:
            raise ValueError("horizon must be at least 100")
        if not 1 <= self.cesaro_depth <= 4:
            raise ValueError("cesaro_depth must lie in [1, 4]")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")


class ScalarSequence:
    """Lazily evaluated bounded quaternion sequence, indexed from n = 1.

    Terms are memoized into a flat coefficient buffer; every evaluated
    term is checked against the declared bound.
    """

    def __init__(self, generator, bound: float, name: str = ""):
        self.generator = generator
        self.bound = float(bound)
        self.name = name
        self._buf = np.zeros((0, 4))
        self._filled = 0

    def _ensure(self, count: int) -> None:
        if self._filled >= count:
            return
        if self._buf.shape[0] < count:
            grown = np.zeros((max(count, 2 * self._buf.shape[0], 256), 4))
            grown[:self._filled] = self._buf[:self._filled]
            self._buf = grown
        slack = 1e-9 * (1.0 + self.bound)
        for n in range(self._filled + 1, count + 1):
            q = self.generator(n)
            arr = q.wxyz if isinstance(q, Quaternion) else np.asarray(q, dtype=np.float64)
            nrm = float(np.sqrt((arr ** 2).sum()))
            if nrm > self.bound + slack:
                raise SequenceBoundError(
                    f"term {n} has norm {nrm:.6g} above declared bound {self.bound:.6g}")
            self._buf[n - 1] = arr
        self._filled = count

    @classmethod
    def from_values(cls, values: np.ndarray, bound: float,
                    name: str = "") -> "ScalarSequence":
        """Wrap a precomputed (count, 4) coefficient array as a sequence."""
        values = np.ascontiguousarray(values, dtype=np.float64)
        seq = cls(lambda n: Quaternion.from_wxyz(values[n - 1]), bound, name=name)
        norms = np.sqrt((values ** 2).sum(axis=1))
        worst = float(norms.max()) if norms.size else 0.0
        if worst > bound + 1e-9 * (1.0 + bound):
            raise SequenceBoundError(
                f"precomputed terms reach norm {worst:.6g} above bound {bound:.6g}")
        seq._buf = values
        seq._filled = values.shape[0]
        return seq

    def term(self, n: int) -> Quaternion:
        self._ensure(n)
        return Quaternion.from_wxyz(self._buf[n - 1])

    def values(self, count: int) -> np.ndarray:
        self._ensure(count)
        return self._buf[:count]

    def shifted(self) -> "ScalarSequence":
        return ScalarSequence(lambda n: self.term(n + 1), self.bound,
                              name=f"shift({self.name})")

    def conjugated(self) -> "ScalarSequence":
        return ScalarSequence(lambda n: self.term(n).conjugate(), self.bound,
                              name=f"conj({self.name})")


def constant_sequence(q: Quaternion) -> ScalarSequence:
    return ScalarSequence(lambda n: q, bound=q.norm() + 1e-12, name="const")


def _window_means(y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    k = y.shape[0]
    w1 = y[k // 8: k // 4].mean(axis=0)
    w2 = y[k // 4: k // 2].mean(axis=0)
    w3 = y[k // 2: k].mean(axis=0)
    return w1, w2, w3


def glim(s: ScalarSequence, cfg: GeneralizedLimitConfig) -> Quaternion:
    """Partial Banach-style generalized limit of a bounded sequence.

    Richardson-extrapolated tail-window means at dyadic checkpoints; the
    two extrapolations (quarter- and half-horizon) must agree within
    cfg.tol, retrying on Cesaro-smoothed terms up to cfg.cesaro_depth
    before giving up with NotAlmostConvergent.
    """
    k = cfg.horizon
    x = s.values(k)
    real_nonneg = bool(np.all(x[:, 1:] == 0.0) and x[:, 0].min() >= 0.0)
    y = x
    counts = np.arange(1, k + 1, dtype=np.float64)[:, None]
    for depth in range(cfg.cesaro_depth + 1):
        if depth > 0:
            y = np.cumsum(y, axis=0) / counts
        w1, w2, w3 = _window_means(y)
        r_coarse = 2.0 * w2 - w1
        r_fine = 2.0 * w3 - w2
        gap = float(np.max(np.abs(r_fine - r_coarse)))
        if gap <= cfg.tol:
            val = r_fine
            if real_nonneg:
                val = np.array([max(val[0], 0.0), 0.0, 0.0, 0.0])
            return Quaternion.from_wxyz(val)
    raise NotAlmostConvergent(
        f"window extrapolations disagree by {gap:.3g} (> tol {cfg.tol:g}) "
        f"after depth-{cfg.cesaro_depth} smoothing over horizon {k}")


# ---------------------------------------------------------------------------
# vector sequences and banded operator rules
# ---------------------------------------------------------------------------

def _pad(data: np.ndarray, m: int) -> np.ndarray:
    if data.shape[0] >= m:
        return data
    out = np.zeros((m, 4))
    out[:data.shape[0]] = data
    return out


def inner_padded(u: QVector, v: QVector) -> Quaternion:
    """Inner product in the common ambient indexing (shorter vector padded)."""
    m = max(u.dim, v.dim)
    prod = _qarr_mul(_qarr_conj(_pad(u.data, m)), _pad(v.data, m))
    return Quaternion.from_wxyz(prod.sum(axis=0))


def combine_padded(coeffs, vectors) -> QVector:
    m = max(v.dim for v in vectors)
    out = np.zeros((m, 4))
    for c, v in zip(coeffs, vectors):
        out += c * _pad(v.data, m)
    return QVector(out)


class VectorSequence:
    """Lazily evaluated bounded sequence of finitely supported vectors."""

    _MEMO_CAP = 128

    def __init__(self, generator, bound: float, name: str = ""):
        self.generator = generator
        self.bound = float(bound)
        self.name = name
        self._memo: dict[int, QVector] = {}

    def term(self, n: int) -> QVector:
        v = self._memo.get(n)
        if v is None:
            v = self.generator(n)
            nrm = v.norm()
            if nrm > self.bound + 1e-9 * (1.0 + self.bound):
                raise SequenceBoundError(
                    f"term {n} has norm {nrm:.6g} above declared bound {self.bound:.6g}")
            if len(self._memo) >= self._MEMO_CAP:
                self._memo.pop(next(iter(self._memo)))
            self._memo[n] = v
        return v

    def right_mul(self, q: Quaternion) -> "VectorSequence":
        return VectorSequence(lambda n: self.term(n).right_mul(q),
                              self.bound * (q.norm() + 1e-12),
                              name=f"{self.name}.q")

    def __add__(self, other: "VectorSequence") -> "VectorSequence":
        return VectorSequence(
            lambda n: combine_padded([1.0, 1.0], [self.term(n), other.term(n)]),
            self.bound + other.bound,
            name=f"{self.name}+{other.name}")


def constant_vector_sequence(phi: QVector, name: str = "const") -> VectorSequence:
    return VectorSequence(lambda n: phi, bound=phi.norm() + 1e-12, name=name)


class BandedOperatorRule:
    """Entry rule (i, j) -> Quaternion vanishing outside |i - j| <= bandwidth.

    Three construction kinds share the surface: weighted shifts
    (e_k -> w(k) e_{k+1}), finite matrices embedded in the top-left
    corner, and a generic entry-rule fallback.
    """

    def __init__(self, entry, bandwidth: int, norm_bound: float,
                 kind: str = "generic", weights=None, matrix: QMatrix | None = None,
                 name: str = "rule"):
        self.entry = entry
        self.bandwidth = int(bandwidth)
        self.norm_bound = float(norm_bound)
        self.kind = kind
        self.weights = weights
        self.matrix = matrix
        self.name = name
        self._weights_arr = np.zeros(0)

    def _weights_upto(self, m: int) -> np.ndarray:
        if self._weights_arr.shape[0] < m:
            grown = max(m, 2 * self._weights_arr.shape[0], 256)
            self._weights_arr = np.array([float(self.weights(k)) for k in range(grown)])
        return self._weights_arr[:m]

    @classmethod
    def unilateral_shift(cls) -> "BandedOperatorRule":
        def entry(i, j):
            return Quaternion(1.0) if i == j + 1 else Quaternion()
        return cls(entry, bandwidth=1, norm_bound=1.0, kind="shift",
                   weights=lambda k: 1.0, name="unilateral-shift")

    @classmethod
    def weighted_shift(cls, weight=None, name: str = "weighted-shift") -> "BandedOperatorRule":
        """Shift with weights tending to 1; default w(k) = 1 - 1/(k+2)."""
        if weight is None:
            weight = lambda k: 1.0 - 1.0 / (k + 2.0)
        def entry(i, j):
            return Quaternion(float(weight(j))) if i == j + 1 else Quaternion()
        return cls(entry, bandwidth=1, norm_bound=1.0, kind="shift",
                   weights=weight, name=name)

    @classmethod
    def from_qmatrix(cls, A: QMatrix, name: str = "matrix") -> "BandedOperatorRule":
        def entry(i, j):
            if i < A.n and j < A.n:
                return A.entry(i, j)
            return Quaternion()
        return cls(entry, bandwidth=max(A.n - 1, 0), norm_bound=A.norm(),
                   kind="matrix", matrix=A, name=name)

    def apply(self, v: QVector) -> QVector:
        if self.kind == "shift":
            w = self._weights_upto(v.dim)
            out = np.zeros((v.dim + 1, 4))
            out[1:] = v.data * w[:, None]
            return QVector(out)
        if self.kind == "matrix":
            n = self.matrix.n
            head = QVector(_pad(v.data[:n], n))
            return self.matrix @ head
        out_dim = v.dim + self.bandwidth
        out = np.zeros((out_dim, 4))
        for i in range(out_dim):
            j0 = max(0, i - self.bandwidth)
            j1 = min(v.dim, i + self.bandwidth + 1)
            for j in range(j0, j1):
                e = self.entry(i, j)
                if e.norm_sq() > 0.0:
                    out[i] += _qarr_mul(e.wxyz, v.data[j])
        return QVector(out)

    def truncation(self, n: int) -> QMatrix:
        """Top-left n x n corner as a finite matrix."""
        data = np.zeros((n, n, 4))
        for i in range(n):
            j0 = max(0, i - self.bandwidth)
            j1 = min(n, i + self.bandwidth + 1)
            for j in range(j0, j1):
                data[i, j] = self.entry(i, j).wxyz
        return QMatrix(data) if n >= 1 else QMatrix.zeros(1)

    def __repr__(self) -> str:
        return f"BandedOperatorRule({self.name}, bandwidth={self.bandwidth})"


def lift(rule: BandedOperatorRule, s: VectorSequence) -> VectorSequence:
    """Componentwise action {phi_n} -> {A phi_n}; the extension's raw form."""
    return VectorSequence(lambda n: rule.apply(s.term(n)),
                          bound=s.bound * rule.norm_bound + 1e-12,
                          name=f"{rule.name}({s.name})")


def pseudo_resolvent_apply(rule: BandedOperatorRule, q: Quaternion,
                           v: QVector) -> QVector:
    """R_q(A) v = A^2 v - 2 Re(q) A v + |q|^2 v under the banded rule."""
    av = rule.apply(v)
    aav = rule.apply(av)
    m = max(aav.dim, av.dim, v.dim)
    out = _pad(aav.data, m) - 2.0 * q.w * _pad(av.data, m) + q.norm_sq() * _pad(v.data, m)
    return QVector(out)


def quotient_inner(s: VectorSequence, t: VectorSequence,
                   cfg: GeneralizedLimitConfig) -> Quaternion:
    """Inner product of quotient classes: glim of the termwise inner products."""
    scalars = ScalarSequence(lambda n: inner_padded(s.term(n), t.term(n)),
                             bound=s.bound * t.bound + 1e-9,
                             name=f"<{s.name}|{t.name}>")
    return glim(scalars, cfg)


def term_stack(s: VectorSequence, count: int) -> np.ndarray:
    """Terms 1..count as one zero-padded (count, m, 4) coefficient array."""
    terms = [s.term(n).data for n in range(1, count + 1)]
    m = max(t.shape[0] for t in terms)
    out = np.zeros((count, m, 4))
    for i, t in enumerate(terms):
        out[i, :t.shape[0]] = t
    return out


def inner_stack(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Termwise inner products of two (count, m, 4) stacks, padded to align."""
    m = max(u.shape[1], v.shape[1])
    if u.shape[1] < m:
        u = np.pad(u, ((0, 0), (0, m - u.shape[1]), (0, 0)))
    if v.shape[1] < m:
        v = np.pad(v, ((0, 0), (0, m - v.shape[1]), (0, 0)))
    return _qarr_mul(_qarr_conj(u), v).sum(axis=1)


def quotient_inner_stacks(u: np.ndarray, v: np.ndarray, bound: float,
                          cfg: GeneralizedLimitConfig, name: str = "") -> Quaternion:
    """quotient_inner on pre-stacked terms; same arithmetic, batched."""
    return glim(ScalarSequence.from_values(inner_stack(u, v), bound, name=name), cfg)


# ---------------------------------------------------------------------------
# Weyl sequences and the point-spectrum certificate
# ---------------------------------------------------------------------------

class _ConjPowerCache:
    """Lazily grown table of conj(q)^k coefficient rows."""

    def __init__(self, q: Quaternion):
        self._qc = q.conjugate().wxyz
        self._arr = np.zeros((1, 4))
        self._arr[0, 0] = 1.0

    def upto(self, n: int) -> np.ndarray:
        arr = self._arr
        if arr.shape[0] < n:
            grown = np.zeros((max(n, 2 * arr.shape[0]), 4))
            grown[:arr.shape[0]] = arr
            for k in range(arr.shape[0], grown.shape[0]):
                grown[k] = _qarr_mul(grown[k - 1], self._qc)
            self._arr = grown
            arr = grown
        return arr[:n]


def weyl_sequence(shift: BandedOperatorRule, q: Quaternion) -> VectorSequence:
    """psi_n = n^{-1/2} (e_0 + e_1 conj(q) + ... + e_{n-1} conj(q)^{n-1}).

    Unit vectors with || S psi_n - psi_n q || = sqrt(2/n) for the
    unilateral shift at |q| = 1, hence an approximate-point witness whose
    quotient class is an exact eigenvector of the extension.
    """
    if shift.kind != "shift":
        raise UnsupportedRule("the Weyl construction is specific to shift rules")
    if abs(q.norm() - 1.0) > 1e-12:
        raise ValueError("the shift Weyl construction needs |q| = 1")
    powers = _ConjPowerCache(q)

    def term(n: int) -> QVector:
        return QVector(powers.upto(n) / np.sqrt(n))

    return VectorSequence(term, bound=1.0 + 1e-9, name=f"weyl({shift.name})")


def _shift_weyl_residual_sq(rule: BandedOperatorRule, q: Quaternion,
                            powers: _ConjPowerCache, n: int) -> float:
    """||R_q(S) psi_n||^2 for a shift rule, computed without boxing.

    Same arithmetic as pseudo_resolvent_apply on weyl_sequence terms
    (cross-checked in tests); the 1/sqrt(n) normalization is pulled out
    of the squared norm by linearity.
    """
    p = powers.upto(n)
    w = rule._weights_upto(n + 1)
    out = np.zeros((n + 2, 4))
    out[:n] = q.norm_sq() * p
    tmp = w[:n, None] * p
    out[1:n + 1] -= (2.0 * q.w) * tmp
    out[2:n + 2] += w[1:n + 1, None] * tmp
    return float((out ** 2).sum() / n)


def truncation_margins(rule: BandedOperatorRule, q: Quaternion, sizes,
                       sweep_cap: int | None = None) -> list[tuple[int, float]]:
    """min_singular of R_q on the n x n truncations, per requested size.

    Real-entried rules (shifts) stay in the cheap real n x n family; rules
    with genuinely quaternionic entries go through the real representation.
    """
    out = []
    for n in sizes:
        T = rule.truncation(n)
        if np.all(T.data[:, :, 1:] == 0.0):
            M = np.ascontiguousarray(T.data[:, :, 0])
            R = M @ M - 2.0 * q.w * M + q.norm_sq() * np.eye(n)
        else:
            R = real_rep(pseudo_resolvent_matrix(T, q))
        out.append((int(n), float(engine.min_singular(R, sweep_cap=sweep_cap))))
    return out


def pseudo_resolvent_matrix(A: QMatrix, q: Quaternion) -> QMatrix:
    eye = QMatrix.identity(A.n)
    return (A @ A) - A.scale(2.0 * q.w) + eye.scale(q.norm_sq())


def _min_singular_vector(M: np.ndarray) -> np.ndarray:
    """Unit vector achieving (approximately) the smallest singular value."""
    M = np.asarray(M, dtype=np.float64)
    G = M.T @ M
    G = 0.5 * (G + G.T)
    scale = max(np.abs(G).max(), 1.0)
    shift = 1e-12 * scale
    rng = np.random.default_rng(7)
    z = rng.normal(0.0, 1.0, G.shape[0])
    z /= np.linalg.norm(z)
    A = G + shift * np.eye(G.shape[0])
    for _ in range(6):
        try:
            z = np.linalg.solve(A, z)
        except np.linalg.LinAlgError:
            A = A + shift * np.eye(G.shape[0])
            continue
        z /= np.linalg.norm(z)
    return z


@dataclass(frozen=True)
class CertReport:
    """Outcome of the point-spectrum-of-the-extension certificate."""

    q: Quaternion
    verdict: str  # "pass" | "reject"
    glim_value: Quaternion | None
    decay_table: tuple[tuple[int, float], ...] = ()
    margins: tuple[tuple[int, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "q": list(self.q.wxyz),
            "decay_table": [[n, v] for n, v in self.decay_table],
            "glim": None if self.glim_value is None else list(self.glim_value.wxyz),
            "margins": [[n, v] for n, v in self.margins],
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _decay_points(limit: int) -> list[int]:
    pts = sorted({int(round(10 ** (e / 4))) for e in range(0, 200)} | {1, limit})
    return [p for p in pts if 1 <= p <= limit]


def tc1_certificate(rule: BandedOperatorRule, q: Quaternion,
                    cfg: GeneralizedLimitConfig,
                    margin_sizes=None,
                    sweep_cap: int | None = None) -> CertReport:
    """Certify whether q is a point-spectrum element of the extension.

    Shift rules at |q| = 1 use the explicit Weyl sequence: the report
    carries the decay table ||R_q(S) psi_n|| and glim of its square; the
    class of {psi_n} is an exact eigenvector in the quotient exactly when
    that glim vanishes, while no finite truncation has q as a right
    eigenvalue of the pseudo-resolvent kernel. Other (rule, q) pairs
    fall back to truncated smallest-singular-vector witnesses, or are
    rejected with the margin table when the truncation margins stay
    bounded away from zero.
    """
    k = cfg.horizon
    if rule.kind == "shift" and abs(q.norm() - 1.0) <= 1e-12:
        powers = _ConjPowerCache(q)
        residual_bound = (rule.norm_bound ** 2 + 2.0 * abs(q.w) * rule.norm_bound
                          + q.norm_sq()) ** 2
        residuals = ScalarSequence(
            lambda n: Quaternion(_shift_weyl_residual_sq(rule, q, powers, n)),
            bound=residual_bound + 1e-9, name="||R_q psi_n||^2")
        g = glim(residuals, cfg)
        table = tuple((n, float(np.sqrt(residuals.term(n).w))) for n in _decay_points(k))
        verdict = "pass" if abs(g.w) <= cfg.tol else "reject"
        return CertReport(q=q, verdict=verdict, glim_value=g, decay_table=table)

    if margin_sizes is None:
        margin_sizes = range(1, 201) if rule.kind == "shift" else range(1, 49)
    margins = truncation_margins(rule, q, margin_sizes, sweep_cap=sweep_cap)
    floor = min(v for _, v in margins)
    reject_at = max(10.0 * cfg.tol, 0.05 * (1.0 + rule.norm_bound ** 2))
    if floor > reject_at:
        return CertReport(q=q, verdict="reject", glim_value=None,
                          margins=tuple(margins))

    # build witnesses from the minimizing singular vectors of the truncations
    sizes = sorted({n for n, _ in margins})
    grid = [sizes[min(len(sizes) - 1, int(i))] for i in
            np.geomspace(1, len(sizes), num=min(len(sizes), 24)) - 1]
    witnesses = []
    for n in grid:
        T = rule.truncation(n)
        R = real_rep(pseudo_resolvent_matrix(T, q))
        z = _min_singular_vector(R)
        witnesses.append(QVector.from_coords(z))

    def resid(n: int) -> Quaternion:
        w = witnesses[min(n - 1, len(witnesses) - 1)]
        return Quaternion(pseudo_resolvent_apply(rule, q, w).norm() ** 2)

    residual_bound = (rule.norm_bound ** 2 + 2.0 * abs(q.w) * rule.norm_bound
                      + q.norm_sq()) ** 2
    residuals = ScalarSequence(resid, bound=residual_bound + 1e-9,
                               name="||R_q z_N||^2")
    g = glim(residuals, cfg)
    verdict = "pass" if abs(g.w) <= cfg.tol else "reject"
    return CertReport(q=q, verdict=verdict, glim_value=g, margins=tuple(margins))


# ---------------------------------------------------------------------------
# algebra of the extension on sampled sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraCheckReport:
    passed: bool
    max_pointwise: float
    max_adjoint: float
    max_norm_excess: float
    positivity_min: float | None = None
    failures: tuple[str, ...] = field(default_factory=tuple)


def _is_positive_matrix(A: QMatrix, tol: float = 1e-10) -> bool:
    M = real_rep(A)
    if np.abs(M - M.T).max() > tol * (1.0 + np.abs(M).max()):
        return False
    sym = 0.5 * (M + M.T)
    lam = engine.eigvals(sym).real.min()
    return lam >= -tol * (1.0 + np.abs(M).max())


def extension_algebra_report(A: QMatrix, B: QMatrix, samples,
                             cfg: GeneralizedLimitConfig,
                             tol: float = 1e-10) -> AlgebraCheckReport:
    """Pointwise and quotient-level identities of the extension map.

    Verifies (A+B)deg s = A deg s + B deg s, (AB)deg s = A deg (B deg s),
    the adjoint transfer under the quotient inner product, the norm
    bound ||A deg s_n|| <= ||A|| ||s_n||, and positivity transfer when A
    is a positive operator.
    """
    rule_a = BandedOperatorRule.from_qmatrix(A, name="A")
    rule_b = BandedOperatorRule.from_qmatrix(B, name="B")
    rule_sum = BandedOperatorRule.from_qmatrix(A + B, name="A+B")
    rule_prod = BandedOperatorRule.from_qmatrix(A @ B, name="AB")
    adj = A.adjoint()
    opnorm = A.norm()

    ns = list(range(1, 17)) + [cfg.horizon // 2, cfg.horizon]
    max_pointwise = 0.0
    max_adjoint = 0.0
    max_norm_excess = 0.0
    positivity_min = None
    failures = []

    check_positive = _is_positive_matrix(A)

    stacks = [term_stack(s, cfg.horizon) for s in samples]
    for idx, s in enumerate(samples):
        lifted_a = lift(rule_a, s)
        lifted_b = lift(rule_b, s)
        lifted_sum = lift(rule_sum, s)
        lifted_prod = lift(rule_prod, s)
        chained = lift(rule_a, lift(rule_b, s))
        for n in ns:
            u = lifted_sum.term(n)
            v = combine_padded([1.0, 1.0], [lifted_a.term(n), lifted_b.term(n)])
            m = max(u.dim, v.dim)
            max_pointwise = max(max_pointwise,
                                float(np.sqrt(((_pad(u.data, m) - _pad(v.data, m)) ** 2).sum())))
            w1 = lifted_prod.term(n)
            w2 = chained.term(n)
            m = max(w1.dim, w2.dim)
            max_pointwise = max(max_pointwise,
                                float(np.sqrt(((_pad(w1.data, m) - _pad(w2.data, m)) ** 2).sum())))
            sn = s.term(n).norm()
            an = lifted_a.term(n).norm()
            max_norm_excess = max(max_norm_excess, an - opnorm * sn)
        stack_s = stacks[idx]
        stack_t = stacks[(idx + 1) % len(samples)]
        t = samples[(idx + 1) % len(samples)]
        adj_bound = (1.0 + opnorm) * s.bound * t.bound + 1e-9
        lhs = quotient_inner_stacks(adj.apply_stack(stack_s), stack_t, adj_bound, cfg,
                                    name="<Adag s|t>")
        rhs = quotient_inner_stacks(stack_s, A.apply_stack(stack_t), adj_bound, cfg,
                                    name="<s|A t>")
        max_adjoint = max(max_adjoint, (lhs - rhs).norm())
        if check_positive:
            pos_bound = (1.0 + opnorm) * s.bound * s.bound + 1e-9
            val = quotient_inner_stacks(A.apply_stack(stack_s), stack_s, pos_bound, cfg,
                                        name="<A s|s>")
            positivity_min = val.w if positivity_min is None else min(positivity_min, val.w)

    if max_pointwise > tol:
        failures.append(f"pointwise algebra deviates by {max_pointwise:.3g}")
    if max_adjoint > tol:
        failures.append(f"adjoint transfer deviates by {max_adjoint:.3g}")
    if max_norm_excess > tol:
        failures.append(f"norm bound exceeded by {max_norm_excess:.3g}")
    if check_positive and positivity_min is not None and positivity_min < -1e-12:
        failures.append(f"positivity transfer violated: {positivity_min:.3g}")

    return AlgebraCheckReport(passed=not failures,
                              max_pointwise=max_pointwise,
                              max_adjoint=max_adjoint,
                              max_norm_excess=max_norm_excess,
                              positivity_min=positivity_min,
                              failures=tuple(failures))


def extension_algebra_check(A: QMatrix, B: QMatrix, samples,
                            cfg: GeneralizedLimitConfig | None = None,
                            tol: float = 1e-10) -> bool:
    if cfg is None:
        cfg = GeneralizedLimitConfig(horizon=4096, cesaro_depth=2, tol=1e-3)
    return extension_algebra_report(A, B, samples, cfg, tol=tol).passed
