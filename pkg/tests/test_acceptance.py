"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from qsphere.harness import Context, RunConfig, decay_basis, decay_tables, fit_range
from qsphere.heisenberg import build_lmn_basis, pi_psi_matrix, tomita_adjusted_basis
from qsphere.podles import cross_validate_pi0, grading_obstruction
from qsphere.real import (
    commutant_norm,
    equivariance_check,
    j_formula,
    j_zero,
    r_prime,
    restriction_check,
    spinor_to_product,
    su2_real_structure,
)
from qsphere.scalars import QParam, qint
from qsphere.spectral import (
    build_grading,
    counting_exponent,
    dirac,
    paired_sector_max,
    podles_expected,
    podles_pi,
    podles_spinor_basis,
    spectrum_table,
    spinor_algebra,
    spinor_lambda,
    su2_expected,
    su2_sector_spectrum,
    su2_spinor_basis,
)
from qsphere.uq import UqAlgebra

Q = 0.5
INF = QParam(Q)


@pytest.fixture(scope="module")
def su2_l3():
    lmn = tomita_adjusted_basis(build_lmn_basis(3, Q))
    return lmn, su2_real_structure(lmn)


def test_criterion_01_dirac_spectrum(record_criterion):
    start = time.perf_counter()
    rows = spectrum_table(dirac(su2_spinor_basis(4, Q)), 3.5)
    seconds = time.perf_counter() - start
    ok = rows == su2_expected(3.5) and seconds < 30
    record_criterion(1, "spectrum of D, L=4", ok, f"{len(rows)} rows exact, {seconds:.1f} s")
    assert ok


def test_criterion_02_podles_spectrum(record_criterion):
    start = time.perf_counter()
    pb = podles_spinor_basis(6, Q)
    top = paired_sector_max(pb)
    rows = spectrum_table(dirac(pb), top)
    seconds = time.perf_counter() - start
    ok = top == 5.5 and rows == podles_expected(5.5) and seconds < 10
    record_criterion(2, "spectrum of D~, c=inf, L=6", ok, f"sectors up to {top}, {seconds:.1f} s")
    assert ok


def test_criterion_03_grading_obstruction(record_criterion):
    worst = 0.0
    for q in (0.3, 0.5, 0.8):
        for c in (0.0, 1.0, 10.0):
            worst = max(worst, abs(grading_obstruction(QParam(q, c)) - (q**-2 - 1) / qint(3, q)))
        worst = max(worst, abs(grading_obstruction(QParam(q))))
    ok = worst < 1e-12
    record_criterion(3, "grading obstruction", ok, f"max deviation {worst:.1e}")
    assert ok


def test_criterion_04_grading_operator(record_criterion):
    pb = podles_spinor_basis(6, Q)
    G = build_grading(pb, INF).matrix
    D = dirac(pb).matrix
    top = paired_sector_max(pb)
    P, Pi = pb.sector_projector(top), pb.sector_projector(top - 1)
    alg = max(np.abs(G - G.conj().T).max(), np.abs(G @ G - np.eye(pb.dim)).max(),
              np.abs((G @ D + D @ G) @ P).max())
    pi_err = max(np.linalg.norm((G @ X - X @ G) @ Pi, 2)
                 for X in (podles_pi(n, pb, INF).matrix for n in ("A", "B")))
    U = UqAlgebra.numeric(Q)
    lam_err = max(np.linalg.norm(G @ X - X @ G, 2) for X in (spinor_lambda(h, pb).matrix for h in (U.e, U.f, U.k)))
    ok = alg < 1e-9 and pi_err < 1e-9 and lam_err < 1e-10
    record_criterion(4, "grading operator, L=6", ok,
                     f"algebraic {alg:.1e}, [gamma, pi~] {pi_err:.1e}, [gamma, lambda~] {lam_err:.1e}")
    assert ok


def test_criterion_05_real_structure(record_criterion, su2_l3):
    _, rs = su2_l3
    sb = rs.basis
    J = rs.J
    D = dirac(sb).matrix
    U = UqAlgebra.numeric(Q)
    formula = np.abs(J.matrix - spinor_to_product(j_formula(sb), sb)).max()
    square = np.abs(J.then(J) + np.eye(sb.dim)).max()
    jd = np.linalg.norm(J.after_linear(D).matrix - J.before_linear(D).matrix, 2)
    equi = equivariance_check(J, lambda h: spinor_lambda(h, sb).matrix, U)
    Us = sb.unitary()
    qD = Us @ np.diag(Q ** (-sb.eigenvalues)) @ Us.T
    Rp = r_prime(sb, U)
    w, V = np.linalg.eigh(Rp @ Rp.conj().T)
    abs_R = (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T
    absdev = np.abs(abs_R - qD).max()
    ok = formula < 1e-9 and square < 1e-9 and jd < 1e-10 and equi < 1e-9 and absdev < 1e-9
    record_criterion(5, "real structure on SU_q(2), L=3", ok,
                     f"formula {formula:.1e}, J^2+1 {square:.1e}, JD-DJ {jd:.1e}, equivariance {equi:.1e}, "
                     f"|R*|-q^-D {absdev:.1e}")
    assert ok


def test_criterion_06_exact_commutant(record_criterion, su2_l3):
    lmn, rs = su2_l3
    pis = [spinor_algebra(pi_psi_matrix(x, lmn).matrix, rs.basis).matrix for x in lmn.alg.generators().values()]
    mask = rs.basis.levels <= 2 + 1e-9
    t_err = commutant_norm(pis, pis, rs.T, mask)
    j0_err = commutant_norm(pis, pis, j_zero(rs.T, rs.basis, UqAlgebra.numeric(Q)), mask)
    ok = t_err < 1e-9 and j0_err < 1e-9
    record_criterion(6, "exact commutant for T and J_0", ok, f"T {t_err:.1e}, J_0 {j0_err:.1e}")
    assert ok


def test_criterion_07_decay(record_criterion):
    start = time.perf_counter()
    ctx = Context(RunConfig(level=20, suite="decay"))
    tables = decay_tables(ctx)
    seconds = time.perf_counter() - start
    top = paired_sector_max(decay_basis(ctx))
    positive = all(v > 0 for res in tables.values() for j, v in res["norms"].items() if float(j) <= top + 1e-9)
    ratios = {k: res["ratio"] for k, res in tables.items()}
    worst = max(ratios.values())
    ok = positive and worst < 1 and seconds < 120
    lo, hi = fit_range(top)
    record_criterion(7, "decay of the J~ commutators, L=20", ok,
                     f"max ratio {worst:.3f} over {len(ratios)} tables (sectors {lo}..{hi}), "
                     f"positive {positive}, {seconds:.0f} s")
    assert ok


def test_criterion_08_restriction(record_criterion):
    lmn = tomita_adjusted_basis(build_lmn_basis(3, Q))
    out = restriction_check(lmn, INF)
    ok = out["T_error"] < 1e-10 and out["J_gap"] > 0.1
    record_criterion(8, "restriction to M_0 (x) V_1/2", ok, f"T error {out['T_error']:.1e}, J gap {out['J_gap']:.3f}")
    assert ok


def test_criterion_09_cross_construction(record_criterion):
    lmn = tomita_adjusted_basis(build_lmn_basis(4, Q))
    devs = {c: cross_validate_pi0(4, QParam(Q, c), lmn=lmn)["max_deviation"] for c in (0.0, 1.0, math.inf)}
    worst = max(devs.values())
    ok = worst < 1e-8
    record_criterion(9, "GNS restriction vs closed-form pi_0, L=4", ok,
                     ", ".join(f"c={c}: {d:.1e}" for c, d in devs.items()))
    assert ok


def test_criterion_10_counting_exponents(record_criterion):
    e_d = counting_exponent(su2_sector_spectrum(8, Q))
    pb = podles_spinor_basis(20, Q)
    e_dt = counting_exponent(spectrum_table(dirac(pb), paired_sector_max(pb)))
    ok = 2.8 <= e_d <= 3.2 and 1.9 <= e_dt <= 2.1
    record_criterion(10, "summability exponents", ok, f"D {e_d:.4f} (l <= 8), D~ {e_dt:.4f} (l <= 20)")
    assert ok
