import numpy as np
import pytest

from qsphere.heisenberg import (
    BasisError,
    build_lmn_basis,
    default_precision,
    lambda_matrix,
    pi_psi_matrix,
    rho_matrix,
    sigma_block_error,
    tomita_adjusted_basis,
    tomita_formula,
    tomita_matrix,
    tomita_signs,
)
from qsphere.real import AntilinearOperator
from qsphere.scalars import HalfInt

Q = 0.5


@pytest.fixture(scope="module")
def lmn():
    return tomita_adjusted_basis(build_lmn_basis(2, Q))


def test_dimension_and_labels(lmn):
    assert lmn.dim == sum((t + 1) ** 2 for t in range(5))
    assert lmn.labels[0] == (HalfInt(0), HalfInt(0), HalfInt(0))


def test_orthonormal(lmn):
    assert np.abs(lmn.gram() - np.eye(lmn.dim)).max() < 1e-20


def test_precision_schedule():
    assert [default_precision(L, 0.5) for L in ("1", "2", "3", "6")] == [26, 31, 38, 79]


def test_rejects_bad_q():
    with pytest.raises((BasisError, ValueError)):
        build_lmn_basis(1, 1.2)


def test_raw_tomita_sign_alternates():
    raw = build_lmn_basis(2, Q)
    signs = tomita_signs(raw)
    for l, eps in signs.items():
        assert eps.real == pytest.approx((-1) ** l.twice)


def test_tomita_formula_after_rephasing(lmn):
    assert np.abs(tomita_matrix(lmn) - tomita_formula(lmn)).max() < 1e-20


def test_tomita_examples(lmn):
    T = AntilinearOperator(tomita_matrix(lmn))
    one = np.zeros(lmn.dim)
    one[0] = 1
    assert np.allclose(T(one), one)
    h = HalfInt(1)
    v = np.zeros(lmn.dim)
    v[lmn.index[(h, h, h)]] = 1
    expected = np.zeros(lmn.dim)
    expected[lmn.index[(h, -h, -h)]] = Q  # sign (-1)^{2l+m+n} = +1
    assert np.allclose(T(v), expected)


def test_modular_conjugation(lmn):
    U = lmn.alg.uq
    T = AntilinearOperator(tomita_matrix(lmn))
    lk = lambda_matrix(U.k, lmn).matrix
    rk = rho_matrix(U.k, lmn).matrix
    rki = rho_matrix(U.kinv, lmn).matrix
    J = T.before_linear(lk @ rki)
    assert np.allclose(J.then(J), np.eye(lmn.dim))
    assert J.unitarity_error() < 1e-12
    assert np.allclose(T.adjoint().matrix, lk @ lk @ rki @ rki @ T.matrix)
    assert np.allclose(rk @ rki, np.eye(lmn.dim))


def test_lambda_is_sigma_on_blocks(lmn):
    U = lmn.alg.uq
    for h in (U.e, U.f, U.k, U.e * U.f):
        assert sigma_block_error(lmn, h) < 1e-12


def test_lambda_rho_commute(lmn):
    U = lmn.alg.uq
    for h in (U.e, U.f, U.k):
        for g in (U.e, U.f, U.k):
            X, Y = lambda_matrix(h, lmn).matrix, rho_matrix(g, lmn).matrix
            assert np.abs(X @ Y - Y @ X).max() < 1e-12


def test_pi_psi_relations_on_interior(lmn):
    A = lmn.alg
    a, b, ast, bst = (pi_psi_matrix(x, lmn) for x in (A.a, A.b, A.astar, A.bstar))
    inner = a.interior(1.0)
    eye = np.eye(lmn.dim)
    assert np.abs(((a @ ast + b @ bst).matrix - eye)[:, inner]).max() < 1e-12
    assert np.abs(((b @ a).matrix - Q * (a @ b).matrix)[:, inner]).max() < 1e-12
    assert np.abs((ast.matrix - a.matrix.conj().T)[:, inner]).max() < 1e-12


def test_pi_psi_covariance(lmn):
    # λ(k) π(a) λ(k)^{-1} = π(k ▷ a)
    A = lmn.alg
    U = A.uq
    lk = lambda_matrix(U.k, lmn).matrix
    lki = lambda_matrix(U.kinv, lmn).matrix
    for x in (A.a, A.b):
        from qsphere.coord import act_left

        lhs = lk @ pi_psi_matrix(x, lmn).matrix @ lki
        rhs = pi_psi_matrix(act_left(U.k, x), lmn).matrix
        inner = pi_psi_matrix(x, lmn).interior(1.0)
        assert np.abs((lhs - rhs)[:, inner]).max() < 1e-12
