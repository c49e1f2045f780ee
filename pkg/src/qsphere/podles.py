"""Irreducible integrable representations π_j of A(S²_qc) ⋊ U_q(su(2)).

The representation space of π_j has the abstract orthonormal basis v^l_{k,j},
l = |j|, |j|+1, ..., truncated at ``l_max``.  U_q(su(2)) acts by σ_l on each V^l;
x_1 and x_0 act by three-term formulas whose coefficients are α_j(l), β_j(l).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .heisenberg import TruncatedOperator
from .scalars import HalfInt, QParam, half_range, qint
from .uq import UqElement, represent, spin_generators

GENERATORS = ("x_1", "x_0", "x_-1", "A", "B", "B*")


class PodlesError(ValueError):
    pass


def _lambdas(c: float):
    root = math.sqrt(c + 0.25)
    return 0.5 + root, 0.5 - root


def beta(j, l, params: QParam) -> float:
    """β_j(l); the branch is chosen by c."""
    j, l = HalfInt.of(j), HalfInt.of(l)
    q = params.q
    aj = abs(j)
    if l < aj:
        raise PodlesError(f"β_j(l) needs l >= |j|, got j={j}, l={l}")
    sign = (j.twice > 0) - (j.twice < 0)
    if params.equatorial:
        return sign * qint(2 * float(aj), q) * qint(2, q) / (q * qint(2 * float(l) + 2, q))
    lam_plus, lam_minus = _lambdas(params.c)
    if sign < 0:
        lam_plus, lam_minus = lam_minus, lam_plus
    aj, l = float(aj), float(l)
    total = (
        qint(2 * aj, q) * (lam_plus / q**2 - lam_minus)
        + (1 - q**-2) * qint(aj, q) * qint(aj + 1, q)
        - (1 - q**-2) * qint(l, q) * qint(l + 1, q)
    )
    return total / qint(2 * l + 2, q)


def alpha(j, l, params: QParam) -> float:
    """α_j(l) >= 0; a negative radicand is rejected."""
    j, l = HalfInt.of(j), HalfInt.of(l)
    q = params.q
    b = beta(j, l, params)
    lf = float(l)
    if params.equatorial:
        radicand = qint(2, q) ** 2 - q**2 * b**2
    else:
        radicand = 1 + qint(2, q) ** 2 * params.c - (1 - q**2) * b - q**2 * b**2
    if radicand < 0:
        if radicand > -1e-12:
            radicand = 0.0
        else:
            raise PodlesError(f"α_{j}({l}) has negative radicand {radicand}")
    prefactor = math.sqrt(qint(2 * lf + 2, q) / (qint(2, q) * qint(2 * lf + 3, q)))
    return prefactor * math.sqrt(radicand)


def grading_obstruction(params: QParam) -> float:
    """β_½(½) + β_{-½}(½); vanishes exactly when c = ∞."""
    half = HalfInt(1)
    return beta(half, half, params) + beta(-half, half, params)


@dataclass
class PodlesBasis:
    """Labels (l, k) of v^l_{k,j} for |j| <= l <= l_max."""

    j: HalfInt
    l_max: HalfInt
    params: QParam

    def __post_init__(self):
        self.j = HalfInt.of(self.j)
        self.l_max = HalfInt.of(self.l_max)
        if self.l_max < abs(self.j) or (self.l_max - self.j).twice % 2:
            raise PodlesError(f"l_max={self.l_max} is not a level of π_{self.j}")
        levels = [abs(self.j) + t for t in range(int(self.l_max - abs(self.j)) + 1)]
        self.labels = [(l, k) for l in levels for k in half_range(l)]
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def levels(self) -> np.ndarray:
        return np.array([float(l) for l, _ in self.labels])

    def operator(self, matrix) -> TruncatedOperator:
        return TruncatedOperator(np.asarray(matrix), self.labels, self.levels, float(self.l_max))


def _x1_x0(basis: PodlesBasis):
    q = basis.params.q
    j = basis.j
    idx = basis.index
    X1 = np.zeros((basis.dim, basis.dim))
    X0 = np.zeros((basis.dim, basis.dim))

    def qi(x):
        return qint(float(x), q)

    for col, (l, k) in enumerate(basis.labels):
        lf, kf = float(l), float(k)
        a_l = alpha(j, l, basis.params)
        b_l = beta(j, l, basis.params)
        has_lower = l - 1 >= abs(j)
        a_lm = alpha(j, l - 1, basis.params) if has_lower else 0.0
        # x_1
        up = (l + 1, k + 1)
        if up in idx:
            X1[idx[up], col] += (q ** (-lf + kf) * math.sqrt(qi(l + k + 1) * qi(l + k + 2))
                                 / math.sqrt(qi(2 * lf + 1) * qi(2 * lf + 2)) * a_l)
        same = (l, k + 1)
        if same in idx and qi(l - k) != 0:
            X1[idx[same], col] -= (q ** (kf + 2) * math.sqrt(qi(l - k) * qi(l + k + 1) * qi(2))
                                   / qi(2 * lf) * b_l)
        down = (l - 1, k + 1)
        if has_lower and down in idx:
            X1[idx[down], col] -= (q ** (lf + kf + 1) * math.sqrt(qi(l - k - 1) * qi(l - k))
                                   / math.sqrt(qi(2 * lf - 1) * qi(2 * lf)) * a_lm)
        # x_0
        up = (l + 1, k)
        if up in idx:
            X0[idx[up], col] += (q**kf * math.sqrt(qi(l - k + 1) * qi(l + k + 1) * qi(2))
                                 / math.sqrt(qi(2 * lf + 1) * qi(2 * lf + 2)) * a_l)
        diag = 1.0 if qi(l - k) == 0 else 1 - q ** (lf + kf + 1) * qi(l - k) * qi(2) / qi(2 * lf)
        X0[col, col] += diag * b_l
        down = (l - 1, k)
        if has_lower and down in idx:
            X0[idx[down], col] += (q**kf * math.sqrt(qi(l - k) * qi(l + k) * qi(2))
                                   / math.sqrt(qi(2 * lf - 1) * qi(2 * lf)) * a_lm)
    return X1, X0


def pi_j_matrices(basis: PodlesBasis) -> dict:
    """All six generator matrices of π_j, keyed by name; exact on columns with l <= l_max - 1."""
    q = basis.params.q
    X1, X0 = _x1_x0(basis)
    Xm1 = -X1.T / q
    norm = math.sqrt(1 + q * q)
    A = (-X0 if basis.params.equatorial else np.eye(basis.dim) - X0) / (1 + q * q)
    mats = {"x_1": X1, "x_0": X0, "x_-1": Xm1, "A": A, "B": q * Xm1 / norm, "B*": -X1 / norm}
    return {name: basis.operator(m.astype(complex)) for name, m in mats.items()}


def pi_j_matrix(j, generator: str, basis: PodlesBasis) -> TruncatedOperator:
    if generator not in GENERATORS:
        raise PodlesError(f"unknown generator {generator!r}")
    if HalfInt.of(j) != basis.j:
        raise PodlesError("basis belongs to a different π_j")
    return pi_j_matrices(basis)[generator]


def _spin_blocks(basis: PodlesBasis):
    q = basis.params.q
    mats = []
    for which in range(3):
        M = np.zeros((basis.dim, basis.dim), dtype=complex)
        for l2 in sorted({l.twice for l, _ in basis.labels}):
            l = HalfInt(l2)
            gens = spin_generators(l2, q)
            idx = [basis.index[(l, k)] for k in half_range(l)]
            M[np.ix_(idx, idx)] = gens[which]
        mats.append(M)
    return tuple(mats)


def sigma_matrix(h: UqElement, basis: PodlesBasis) -> TruncatedOperator:
    """U_q(su(2)) acting by σ_l on each V^l."""
    E, F, K = _spin_blocks(basis)
    return basis.operator(represent(h, E, F, K))


SPIN_ONE = {1: "x_1", 0: "x_0", -1: "x_-1"}


# GNS restriction ----------------------------------------------------------------

@dataclass
class GnsM0:
    """The ladder basis of M_0 ⊂ O(SU_q(2)) and its coordinates in an |lmn> basis."""

    basis: PodlesBasis
    vectors: dict
    embedding: np.ndarray
    norm_error: float


def gns_m0(lmn, params: QParam) -> GnsM0:
    """v^0_{0,0} = 1, v^{l+1}_{l+1,0} = α_0(l)^{-1} x_1 v^l_{l,0}, lowered by e ▷ with positive coefficients."""
    from .coord import act_left, embed_podles, inner_product

    alg = lmn.alg
    s = alg.scalars
    q = params.q
    top = HalfInt(2 * (lmn.L.twice // 2))
    pb = PodlesBasis(0, top, params)
    x1 = embed_podles("x_1", params.c, alg)
    vectors = {}
    seed = alg.one
    for t in range(int(top) + 1):
        l = HalfInt(2 * t)
        if t:
            seed = x1 * vectors[(l - 1, l - 1)] * (s.one / s(alpha(0, l - 1, params)))
        vec = seed
        for k in list(half_range(l))[::-1]:
            if k != l:
                vec = act_left(alg.uq.e, vec) * (s.one / s(math.sqrt(qint(float(l - k), q) * qint(float(l + k + 1), q))))
            vectors[(l, k)] = vec
    norm_error = max(abs(complex(inner_product(v, v)) - 1) for v in vectors.values())
    E = np.zeros((lmn.dim, pb.dim), dtype=complex)
    for col, lab in enumerate(pb.labels):
        E[:, col] = lmn.expand(vectors[lab])
    return GnsM0(pb, vectors, E, float(norm_error))


def cross_validate_pi0(L, params: QParam, lmn=None, generators=("A", "B")) -> dict:
    """Max deviation between the GNS-restricted π_0 and the closed-form π_0 on columns with l <= L-1."""
    from .coord import embed_podles
    from .heisenberg import build_lmn_basis, tomita_adjusted_basis

    if lmn is None:
        lmn = tomita_adjusted_basis(build_lmn_basis(L, params.q))
    gns = gns_m0(lmn, params)
    E = gns.embedding
    closed = pi_j_matrices(gns.basis)
    mask = gns.basis.levels <= float(gns.basis.l_max) - 1 + 1e-9
    out = {"norm_error": gns.norm_error,
           "isometry_error": float(np.abs(E.conj().T @ E - np.eye(gns.basis.dim)).max())}
    for name in generators:
        x = embed_podles(name, params.c, lmn.alg)
        cols = np.flatnonzero(mask)
        # π_0(y) v = y v, expanded back onto the M_0 ladder
        restricted = np.stack([E.conj().T @ lmn.expand(x * gns.vectors[gns.basis.labels[c]]) for c in cols], axis=1)
        out[name] = float(np.abs(restricted - closed[name].matrix[:, cols]).max())
    out["max_deviation"] = max(out[name] for name in generators)
    return out
