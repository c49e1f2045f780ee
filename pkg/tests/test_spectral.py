import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.scalars import HalfInt, QParam
from qsphere.spectral import (
    SpectralError,
    build_grading,
    c_coeff,
    claim_values,
    commutant_dimension,
    counting_exponent,
    dirac,
    lldn_vectors,
    paired_sector_max,
    podles_expected,
    podles_pi,
    podles_spinor_basis,
    s_coeff,
    spectrum_table,
    spinor_lambda,
    spinor_rho,
    su2_expected,
    su2_sector_spectrum,
    su2_spinor_basis,
)
from qsphere.podles import beta
from qsphere.uq import UqAlgebra

Q = 0.5
INF = QParam(Q)


@given(st.floats(0.1, 0.95), st.integers(1, 12), st.integers(0, 24))
def test_cg_coefficients_unit_norm(q, t, s):
    j = HalfInt(t)
    m = HalfInt(-t + 2 * (s % (t + 1)))
    assert c_coeff(j, m, q) ** 2 + s_coeff(j, m, q) ** 2 == pytest.approx(1.0)


def test_su2_spectrum_small_level():
    rows = spectrum_table(dirac(su2_spinor_basis(1, Q)), 0.5)
    assert rows == [(0.5, 2, HalfInt(0)), (-1.0, 2, HalfInt(1)), (1.0, 6, HalfInt(1))]


@pytest.mark.parametrize("L", [HalfInt(3), 2, HalfInt(5)])
def test_su2_spectrum_pattern(L):
    top = float(HalfInt.of(L)) - 0.5
    assert spectrum_table(dirac(su2_spinor_basis(L, Q)), top) == su2_expected(top)


def test_blockwise_spectrum_matches_dense():
    assert su2_sector_spectrum(2.5, Q) == su2_expected(2.5)


@pytest.mark.parametrize("L", [2, 4, 7])
def test_podles_spectrum_pattern(L):
    pb = podles_spinor_basis(L, Q)
    top = paired_sector_max(pb)
    assert spectrum_table(dirac(pb), top) == podles_expected(top)


def test_counting_exponents_frozen():
    # half-step counting function; values computed once and frozen
    assert counting_exponent(su2_sector_spectrum(8, Q)) == pytest.approx(2.9004, abs=5e-4)
    assert counting_exponent(podles_expected(20)) == pytest.approx(2.000, abs=5e-3)


def test_dirac_equivariant():
    U = UqAlgebra.numeric(Q)
    sb = su2_spinor_basis(2, Q)
    D = dirac(sb).matrix
    for h in (U.e, U.f, U.k):
        for X in (spinor_lambda(h, sb).matrix, spinor_rho(h, sb).matrix):
            assert np.abs(D @ X - X @ D).max() < 1e-10


@pytest.fixture(scope="module")
def podles6():
    pb = podles_spinor_basis(6, Q)
    return pb, build_grading(pb, INF).matrix, dirac(pb).matrix


def test_grading_algebra(podles6):
    pb, G, D = podles6
    P = pb.sector_projector(paired_sector_max(pb))
    assert np.abs(G - G.T.conj()).max() < 1e-12
    assert np.abs(G @ G - np.eye(pb.dim)).max() < 1e-12
    assert np.abs((G @ D + D @ G) @ P).max() < 1e-12


def test_grading_commutes_with_algebra(podles6):
    pb, G, _ = podles6
    P = pb.sector_projector(paired_sector_max(pb) - 1)
    for name in ("A", "B", "B*"):
        X = podles_pi(name, pb, INF).matrix
        assert np.linalg.norm((G @ X - X @ G) @ P, 2) < 1e-9


def test_grading_highest_weight_values(podles6):
    pb, _, _ = podles6
    for l, plus, minus in claim_values(pb, INF):
        assert plus == pytest.approx(beta(HalfInt(1), l, INF), abs=1e-10)
        assert minus == pytest.approx(beta(HalfInt(-1), l, INF), abs=1e-10)
    # frozen value at l = 1/2, q = 1/2: [1][2]/(q[3])
    assert claim_values(pb, INF)[0][1] == pytest.approx(0.952380952380952, abs=1e-12)


def test_lldn_pair_is_orthonormal(podles6):
    pb, _, _ = podles6
    dn, up = lldn_vectors(pb, HalfInt(3))
    assert dn @ dn == pytest.approx(1.0)
    assert up @ up == pytest.approx(1.0)
    assert abs(dn @ up) < 1e-14


@pytest.mark.parametrize("c", [0.0, 1.0])
def test_no_grading_off_equator(c):
    with pytest.raises(SpectralError):
        build_grading(podles_spinor_basis(2, Q), QParam(Q, c))


@pytest.mark.parametrize("c", [0.0, 1.0, math.inf])
def test_equivariant_commutant_is_two_dimensional(c):
    assert commutant_dimension(podles_spinor_basis(4, Q), QParam(Q, c)) == 2
