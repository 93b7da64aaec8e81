"""Seeded verification suites behind both the acceptance tests and `qspec check`.

Each suite draws its randomness from one seed, measures worst-case
deviations, and returns a deterministic report (no wall-clock content),
so identical seeds give byte-identical CLI output.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import berberian as bb
from . import commutator as cm
from . import engine, leftmult, sspec
from .errors import NotAlmostConvergent
from .qcore import (
    QMatrix,
    Quaternion,
    QVector,
    complex_adjoint_rep,
    inner,
    qmul,
    real_rep,
)
from .rand import (
    random_commuting_pair,
    random_qmatrix,
    random_quaternion,
    random_qvector,
    random_unit_quaternion,
    random_unitary,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    lines: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": list(self.lines)}


def _multiset_match(ev1, ev2) -> float:
    """Worst pairing distance of two equal-size complex multisets (greedy)."""
    if len(ev1) != len(ev2):
        return float("inf")
    rest = list(ev2)
    worst = 0.0
    for e in sorted(ev1, key=lambda z: (z.real, z.imag)):
        dists = [abs(e - f) for f in rest]
        i = int(np.argmin(dists))
        worst = max(worst, float(dists[i]))
        rest.pop(i)
    return worst


def _sphere_sets_match(r1: sspec.SpectrumReport, r2: sspec.SpectrumReport,
                       tol: float) -> float:
    if len(r1.spheres) != len(r2.spheres):
        return float("inf")
    worst = 0.0
    for s1, s2 in zip(r1.spheres, r2.spheres):
        if s1.mult != s2.mult:
            return float("inf")
        worst = max(worst, abs(s1.re - s2.re), abs(s1.im - s2.im))
    return worst


def representation_suite(seed: int = 2024, trials: int = 100) -> SuiteResult:
    """Eigenvalues of the real representation = doubled eigenvalues of chi."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(trials):
        n = 1 + t % 4
        A = random_qmatrix(rng, n)
        tol_scale = 1.0 + A.norm()
        ev_rr = engine.eigvals(real_rep(A))
        ev_chi = engine.eigvals(complex_adjoint_rep(A))
        doubled = np.repeat(ev_chi, 2)
        worst = max(worst, _multiset_match(ev_rr, doubled) / tol_scale)
    passed = worst <= 1e-8
    return SuiteResult(
        name="representation",
        passed=passed,
        lines=(f"{trials} random matrices, n in 1..4; worst scaled multiset distance {worst!r}"
               " (bound 1e-08)",))


def spectrum_oracle_suite(seed: int = 2025, trials: int = 20,
                          step: float = 0.05) -> SuiteResult:
    """Grid-scan margins bottom out exactly at the reported eigenspheres."""
    rng = np.random.default_rng(seed)
    stray = 0
    unmatched = 0
    for t in range(trials):
        n = 1 + t % 3
        A = random_qmatrix(rng, n, scale=0.5)
        rep = sspec.s_spectrum(A)
        scan = sspec.grid_scan(A, step=step)
        minima = scan.local_minima()
        slack = step * 1.01
        for ia, ir in minima:
            if rep.distance(float(scan.avals[ia]), float(scan.rvals[ir])) > slack:
                stray += 1
        for s in rep.spheres:
            hit = any(max(abs(scan.avals[ia] - s.re), abs(scan.rvals[ir] - s.im)) <= slack
                      for ia, ir in minima)
            if not hit:
                unmatched += 1
    passed = stray == 0 and unmatched == 0
    return SuiteResult(
        name="spectrum-oracle",
        passed=passed,
        lines=(f"{trials} grid scans at step {step}: {stray} stray local minima, "
               f"{unmatched} unmatched spheres",))


def adjoint_suite(seed: int = 2026, trials: int = 200) -> SuiteResult:
    """Adjoint algebra: sums, products, the pairing identity, scalar multiples."""
    rng = np.random.default_rng(seed)
    worst = {"sum": 0.0, "product": 0.0, "pairing": 0.0, "scalar": 0.0}
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        A = random_qmatrix(rng, n)
        B = random_qmatrix(rng, n)
        phi = random_qvector(rng, n)
        psi = random_qvector(rng, n)
        q = random_quaternion(rng)
        worst["sum"] = max(worst["sum"],
                           ((A + B).adjoint() - (A.adjoint() + B.adjoint())).frobenius_norm())
        worst["product"] = max(worst["product"],
                               ((A @ B).adjoint() - (B.adjoint() @ A.adjoint())).frobenius_norm())
        lhs = inner(psi, A @ phi)
        rhs = inner(A.adjoint() @ psi, phi)
        worst["pairing"] = max(worst["pairing"], (lhs - rhs).norm())
        ctx = leftmult.LeftMultContext(random_unitary(rng, n))
        left = leftmult.left_mul_op(ctx, q, A).adjoint()
        right = leftmult.right_mul_op(ctx, q.conjugate(), A.adjoint())
        worst["scalar"] = max(worst["scalar"], (left - right).frobenius_norm())
    passed = all(v <= 1e-12 for v in worst.values())
    lines = tuple(f"{k}: worst {v!r} (bound 1e-12)" for k, v in worst.items())
    return SuiteResult(name="adjoint", passed=passed, lines=lines)


def sphere_symmetry_suite(seed: int = 2027, trials: int = 50,
                          classify_trials: int = 500) -> SuiteResult:
    """sigma_S(A) = sigma_S(A^dag), and the finite-dimensional class collapse."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        A = random_qmatrix(rng, n)
        worst = max(worst, _sphere_sets_match(sspec.s_spectrum(A),
                                              sspec.s_spectrum(A.adjoint()), 1e-8))
    bad_class = 0
    for _ in range(classify_trials):
        n = int(rng.integers(1, 4))
        A = random_qmatrix(rng, n)
        q = random_quaternion(rng, scale=1.5)
        cls = sspec.classify(A, q)
        if cls not in ("point", "regular"):
            bad_class += 1
    passed = worst <= 1e-8 and bad_class == 0
    return SuiteResult(
        name="sphere-symmetry",
        passed=passed,
        lines=(f"adjoint sphere-set distance worst {worst!r} over {trials} matrices (bound 1e-08)",
               f"{classify_trials} classifications, {bad_class} outside {{point, regular}}"))


def leftmult_suite(seed: int = 2028, trials: int = 100,
                   spectra: int = 20) -> SuiteResult:
    """Left-multiplication laws, a basis-dependence witness, M_q spectra."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        ctx = leftmult.LeftMultContext(random_unitary(rng, n))
        q = random_quaternion(rng)
        p = random_quaternion(rng)
        phi = random_qvector(rng, n)
        psi = random_qvector(rng, n)
        lm = leftmult.left_mul_vec
        worst = max(worst, (lm(ctx, q, phi + psi) - (lm(ctx, q, phi) + lm(ctx, q, psi))).norm())
        worst = max(worst, (lm(ctx, q, phi.right_mul(p)) - lm(ctx, q, phi).right_mul(p)).norm())
        worst = max(worst, abs(lm(ctx, q, phi).norm() - q.norm() * phi.norm()))
        worst = max(worst, (lm(ctx, q, lm(ctx, p, phi)) - lm(ctx, qmul(q, p), phi)).norm())
        worst = max(worst, (inner(lm(ctx, q.conjugate(), phi), psi)
                            - inner(phi, lm(ctx, q, psi))).norm())
        r = Quaternion(float(rng.normal()))
        worst = max(worst, (lm(ctx, r, phi) - phi.right_mul(r)).norm())
        for k in range(n):
            bk = ctx.basis_vector(k)
            worst = max(worst, (lm(ctx, q, bk) - bk.right_mul(q)).norm())
    _, _, _, _, gap = leftmult.basis_dependence_witness()
    sphere_worst = 0.0
    mult_ok = True
    for _ in range(spectra):
        n = int(rng.integers(1, 4))
        ctx = leftmult.LeftMultContext(random_unitary(rng, n))
        q = random_quaternion(rng)
        rep = sspec.s_spectrum(leftmult.left_mul_matrix(ctx, q))
        if len(rep.spheres) != 1 or rep.spheres[0].mult != n:
            mult_ok = False
            continue
        s = rep.spheres[0]
        sphere_worst = max(sphere_worst, abs(s.re - q.w), abs(s.im - q.imag_norm()))
    passed = worst <= 1e-12 and gap > 0.1 and mult_ok and sphere_worst <= 1e-6
    return SuiteResult(
        name="leftmult",
        passed=passed,
        lines=(f"property laws worst {worst!r} over {trials} draws (bound 1e-12)",
               f"basis-dependence witness gap {gap!r} (needs > 0.1)",
               f"M_q spectra: single sphere of q, worst offset {sphere_worst!r} "
               f"(bound 1e-06), multiplicities {'ok' if mult_ok else 'WRONG'}"))


def glim_suite(seed: int = 2029) -> SuiteResult:
    """Generalized-limit contract on its constructive domain."""
    rng = np.random.default_rng(seed)
    cfg = bb.GeneralizedLimitConfig(horizon=100_000, cesaro_depth=2, tol=1e-4)
    lines = []
    okay = True

    c = random_quaternion(rng)
    worst_conv = 0.0
    for make, lim in [
        (lambda: bb.constant_sequence(c), c),
        (lambda: bb.ScalarSequence(lambda n: c + Quaternion(3.0 / n, -1.0 / n, 0.0, 0.5 / n),
                                   bound=c.norm() + 4.0), c),
        (lambda: bb.ScalarSequence(lambda n: c + Quaternion(2.0 * 0.9 ** n), bound=c.norm() + 2.1), c),
        (lambda: bb.ScalarSequence(lambda n: Quaternion(1.0 / n ** 2), bound=1.0), Quaternion()),
    ]:
        g = bb.glim(make(), cfg)
        worst_conv = max(worst_conv, (g - lim).norm())
    okay &= worst_conv <= 1e-8
    lines.append(f"convergent sequences: worst limit error {worst_conv!r} (bound 1e-08)")

    alt = bb.glim(bb.ScalarSequence(lambda n: Quaternion((-1.0) ** n), bound=1.0), cfg)
    okay &= alt.norm() <= 1e-4
    lines.append(f"(-1)^n at horizon 100000: |glim| = {alt.norm()!r} (bound 1e-04)")

    neg = 0.0
    for gen, bound in [(lambda n: Quaternion(1.0 / n), 1.0),
                       (lambda n: Quaternion(0.5 * (1.0 + (-1.0) ** n)), 1.0),
                       (lambda n: Quaternion(2.0 + np.sin(2 * np.pi * n / 8)), 3.0)]:
        g = bb.glim(bb.ScalarSequence(gen, bound=bound), cfg)
        neg = min(neg, g.w)
        okay &= g.norm() >= 0.0 and g.w >= 0.0
    lines.append(f"nonnegative real sequences: smallest glim {neg!r} (needs >= 0)")

    conj_worst = 0.0
    for _ in range(3):
        d = random_quaternion(rng)
        s = bb.ScalarSequence(lambda n, d=d: d + Quaternion((-1.0) ** n / n, 1.0 / n, 0.0, 0.0),
                              bound=d.norm() + 2.0)
        conj_worst = max(conj_worst,
                         (bb.glim(s, cfg).conjugate() - bb.glim(s.conjugated(), cfg)).norm())
    okay &= conj_worst <= 1e-10
    lines.append(f"conjugation law: worst gap {conj_worst!r} (bound 1e-10)")

    def blocks(n):
        return Quaternion(float(int(np.log2(n + 1)) % 2))
    try:
        bb.glim(bb.ScalarSequence(blocks, bound=1.0), cfg)
        rejected = False
    except NotAlmostConvergent:
        rejected = True
    okay &= rejected
    lines.append(f"doubling 0/1 blocks rejected: {rejected}")

    return SuiteResult(name="glim", passed=bool(okay), lines=tuple(lines))


def _convergent_samples(rng: np.random.Generator, n: int, count: int) -> list[bb.VectorSequence]:
    samples = []
    for k in range(count):
        phi = random_qvector(rng, n)
        psi = random_qvector(rng, n)
        rho = 0.5 + 0.4 * rng.random()
        kind = k % 3
        if kind == 0:
            samples.append(bb.constant_vector_sequence(phi, name=f"s{k}"))
        elif kind == 1:
            samples.append(bb.VectorSequence(
                lambda m, phi=phi, psi=psi, rho=rho: phi + psi.right_mul(Quaternion(rho ** m)),
                bound=phi.norm() + psi.norm() + 1e-9, name=f"s{k}"))
        else:
            samples.append(bb.VectorSequence(
                lambda m, phi=phi, psi=psi: phi + psi.right_mul(Quaternion(1.0 / m ** 2)),
                bound=phi.norm() + psi.norm() + 1e-9, name=f"s{k}"))
    return samples


def berberian_suite(seed: int = 2030, horizon: int = 10_000) -> SuiteResult:
    """Shift Weyl decay, extension certificates, and the extension algebra."""
    rng = np.random.default_rng(seed)
    cfg = bb.GeneralizedLimitConfig(horizon=horizon, cesaro_depth=2, tol=1e-4)
    shift = bb.BandedOperatorRule.unilateral_shift()
    lines = []
    okay = True

    unit_qs = [Quaternion(0, 1, 0, 0), Quaternion(1.0), Quaternion(0.5, 0.5, 0.5, 0.5)]
    decay_bad = 0
    worst_glim = 0.0
    for q in unit_qs:
        cert = bb.tc1_certificate(shift, q, cfg)
        for n, norm in cert.decay_table:
            if norm > 3.0 / np.sqrt(n) + 1e-12:
                decay_bad += 1
        okay &= cert.verdict == "pass"
        worst_glim = max(worst_glim, abs(cert.glim_value.w))
    okay &= decay_bad == 0 and worst_glim <= 1e-4
    lines.append(f"unit-sphere certificates: worst glim {worst_glim!r} (bound 1e-04), "
                 f"{decay_bad} decay bound violations against 3/sqrt(n)")

    reject = bb.tc1_certificate(shift, Quaternion(3.0), cfg,
                                margin_sizes=range(1, 201))
    floor = min(v for _, v in reject.margins)
    okay &= reject.verdict == "reject" and floor >= 3.0
    lines.append(f"q = 3 rejected with truncation margin floor {floor!r} over N <= 200 "
                 "(needs >= 3.0)")

    # the identities are asserted at 1e-10; this tol only gates admission of
    # the sampled convergent sequences into the partial limit's domain
    algebra_cfg = bb.GeneralizedLimitConfig(horizon=4096, cesaro_depth=2, tol=1e-3)
    A = random_qmatrix(rng, 2)
    B = random_qmatrix(rng, 2)
    samples = _convergent_samples(rng, 2, 20)
    rep = bb.extension_algebra_report(A, B, samples, algebra_cfg, tol=1e-10)
    okay &= rep.passed
    lines.append(f"extension algebra on 20 samples: pointwise {rep.max_pointwise!r}, "
                 f"adjoint {rep.max_adjoint!r}, norm excess {rep.max_norm_excess!r} "
                 "(bounds 1e-10)")

    C = random_qmatrix(rng, 2)
    pos = C.adjoint() @ C
    rep_pos = bb.extension_algebra_report(pos, B, samples, algebra_cfg, tol=1e-10)
    pos_min = rep_pos.positivity_min
    okay &= rep_pos.passed and pos_min is not None and pos_min >= -1e-12
    lines.append(f"positivity transfer on 20 samples: smallest quadratic form {pos_min!r} "
                 "(needs >= -1e-12)")

    return SuiteResult(name="berberian", passed=bool(okay), lines=tuple(lines))


def commutator_suite(seed: int = 2031, trials: int = 20) -> SuiteResult:
    """Superoperator spectra, the commutator theorem checks, and the fixture."""
    rng = np.random.default_rng(seed)
    lines = []
    okay = True

    lr_worst = 0.0
    lr_mult_ok = True
    for _ in range(trials):
        S = random_qmatrix(rng, 2)
        T = random_qmatrix(rng, 2)
        for base, sup in ((S, cm.lmul_superop(S)), (T, cm.rmul_superop(T))):
            rep_base = sspec.s_spectrum(base)
            rep_sup = cm.superop_s_spectrum(sup)
            if len(rep_base.spheres) != len(rep_sup.spheres):
                lr_mult_ok = False
                continue
            for sb, ss in zip(rep_base.spheres, rep_sup.spheres):
                lr_worst = max(lr_worst, abs(sb.re - ss.re), abs(sb.im - ss.im))
                # upper-half-plane counting doubles the quaternionic multiplicity
                if ss.im > 1e-3 and ss.mult != 2 * base.n * sb.mult:
                    lr_mult_ok = False
    okay &= lr_worst <= 1e-6 and lr_mult_ok
    lines.append(f"lmul/rmul spectra vs base spectra: worst sphere offset {lr_worst!r} "
                 f"(bound 1e-06), multiplicity scaling {'ok' if lr_mult_ok else 'WRONG'}")

    incl_fail = 0
    endp_fail = 0
    for _ in range(trials):
        S = random_qmatrix(rng, 2)
        T = random_qmatrix(rng, 2)
        rep = cm.ct1_check(S, T)
        incl_fail += 0 if rep.inclusion else 1
        endp_fail += 0 if rep.endpoint else 1
    okay &= incl_fail == 0 and endp_fail == 0
    lines.append(f"ct1 over {trials} random pairs: {incl_fail} inclusion failures, "
                 f"{endp_fail} endpoint failures")

    S = QMatrix.from_entries([[Quaternion(0, 1, 0, 0)]])
    T = QMatrix.from_entries([[Quaternion(0, 0, 1, 0)]])
    rep_c = cm.superop_s_spectrum(cm.commutator_superop(S, T))
    expected = ((0.0, 0.0, 2), (0.0, 2.0, 1))
    fixture_ok = len(rep_c.spheres) == 2 and all(
        abs(s.re - e[0]) <= 1e-8 and abs(s.im - e[1]) <= 1e-8 and s.mult == e[2]
        for s, e in zip(rep_c.spheres, expected))
    fix_rep = cm.ct1_check(S, T)
    fixture_ok = fixture_ok and fix_rep.inclusion and fix_rep.endpoint \
        and fix_rep.equality is False
    okay &= fixture_ok
    lines.append(f"C(i,j) fixture spheres {[(s.re, s.im, s.mult) for s in rep_c.spheres]!r}, "
                 f"equality verdict {fix_rep.equality} (must be False): "
                 f"{'ok' if fixture_ok else 'WRONG'}")

    cop_fail = 0
    for _ in range(trials):
        A, B = random_commuting_pair(rng, 2)
        rep = cm.cop1_check(A, B)
        cop_fail += 0 if rep.inclusion else 1
    okay &= cop_fail == 0
    lines.append(f"cop1 over {trials} commuting pairs: {cop_fail} inclusion failures")

    return SuiteResult(name="commutator", passed=bool(okay), lines=tuple(lines))


SUITES = {
    "adjoint": lambda seed: [adjoint_suite(seed)],
    "spheres": lambda seed: [representation_suite(seed),
                             spectrum_oracle_suite(seed + 1),
                             sphere_symmetry_suite(seed + 2)],
    "leftmult": lambda seed: [leftmult_suite(seed)],
    "glim": lambda seed: [glim_suite(seed)],
    "berberian": lambda seed: [berberian_suite(seed)],
    "commutator": lambda seed: [commutator_suite(seed)],
}


def run_suite(name: str, seed: int = 2024) -> list[SuiteResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed)
