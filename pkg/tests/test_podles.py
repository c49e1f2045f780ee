import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.podles import (
    PodlesBasis,
    PodlesError,
    alpha,
    beta,
    cross_validate_pi0,
    grading_obstruction,
    pi_j_matrices,
    pi_j_matrix,
    sigma_matrix,
)
from qsphere.scalars import HalfInt, QParam, qint

cs = st.one_of(st.floats(0.0, 20.0), st.just(math.inf))
qs = st.floats(0.2, 0.9)
js = st.sampled_from([0, HalfInt(1), HalfInt(-1), 1, -1, HalfInt(3)])


def relations_error(j, params, l_max=5):
    j = HalfInt.of(j)
    top = abs(j) + l_max
    pb = PodlesBasis(j, top, params)
    m = {n: op.matrix for n, op in pi_j_matrices(pb).items()}
    A, B, Bs = m["A"], m["B"], m["B*"]
    q, c = params.q, params.c
    eye = np.eye(pb.dim)
    inner = pb.levels <= float(top) - 1 + 1e-9
    rels = [B @ A - q * q * A @ B, A - A.conj().T, Bs - B.conj().T]
    if params.equatorial:
        rels += [Bs @ B + A @ A - eye, B @ Bs + q**4 * A @ A - eye]
    else:
        rels += [Bs @ B - A + A @ A - c * eye, B @ Bs - q * q * A + q**4 * A @ A - c * eye]
    return max(np.abs(r[:, inner]).max() for r in rels)


@given(js, qs, cs)
def test_podles_relations(j, q, c):
    params = QParam(q, c)
    try:
        err = relations_error(j, params)
    except PodlesError:
        # α_j(l) may have no real square root for some (j, c); that is a genuine non-representation
        return
    assert err < 1e-9


@given(qs, st.floats(0.0, 50.0))
def test_obstruction_closed_form(q, c):
    value = grading_obstruction(QParam(q, c))
    assert value == pytest.approx((q**-2 - 1) / qint(3, q), rel=1e-12)


@given(qs)
def test_obstruction_vanishes_at_infinity(q):
    assert grading_obstruction(QParam(q)) == 0


def test_beta_values_equatorial():
    p = QParam(0.5)
    # β_{±½}(½) = ±[1][2]/(q[3]) = ±2.5/(0.5·5.25)
    assert beta(HalfInt(1), HalfInt(1), p) == pytest.approx(2.5 / 2.625)
    assert beta(HalfInt(-1), HalfInt(1), p) == pytest.approx(-2.5 / 2.625)
    assert beta(0, 3, p) == 0


@given(qs, cs, st.integers(0, 8))
def test_alpha_nonnegative_for_j0(q, c, l):
    assert alpha(0, l, QParam(q, c)) >= 0


def test_basis_validation():
    with pytest.raises(PodlesError):
        PodlesBasis(HalfInt(1), 2, QParam(0.5))
    with pytest.raises(PodlesError):
        beta(1, 0, QParam(0.5))
    with pytest.raises(PodlesError):
        pi_j_matrix(0, "C", PodlesBasis(0, 2, QParam(0.5)))


def test_sigma_matrix_is_equivariant():
    p = QParam(0.5, 1.0)
    pb = PodlesBasis(0, 4, p)
    from qsphere.uq import UqAlgebra

    U = UqAlgebra.numeric(0.5)
    m = pi_j_matrices(pb)
    K = sigma_matrix(U.k, pb).matrix
    Ki = sigma_matrix(U.kinv, pb).matrix
    inner = pb.levels <= 3 + 1e-9
    # k x_1 k^{-1} = q^{-1} x_1 and x_0 is invariant under k
    assert np.allclose((K @ m["x_1"].matrix @ Ki)[:, inner], (m["x_1"].matrix / 0.5)[:, inner]) or \
        np.allclose((K @ m["x_1"].matrix @ Ki)[:, inner], (0.5 * m["x_1"].matrix)[:, inner])
    assert np.allclose((K @ m["x_0"].matrix @ Ki)[:, inner], m["x_0"].matrix[:, inner])


@pytest.mark.parametrize("c", [0.0, 1.0, math.inf])
def test_gns_cross_validation_small(c):
    out = cross_validate_pi0(2, QParam(0.5, c))
    assert out["norm_error"] < 1e-12
    assert out["isometry_error"] < 1e-12
    assert out["max_deviation"] < 1e-10
