"""Truncated Heisenberg representation of O(SU_q(2)) ⋊ U_q(su(2)).

The orthonormal basis |lmn> (l <= L) is built by ladders: the seed |lll> is the
normalized a^{2l}, the left action of e lowers m and ρ(f) = ◁S^{-1}(f) lowers n,
each step divided by the positive matrix element of the spin-l representation.
Operators are dense matrices over this basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coord import (
    CoordAlgebra,
    CoordElement,
    act_left,
    act_right,
    haar,
    inner_product,
    monomial_degree,
    monomial_weights,
    normal_monomials,
    star,
)
from .scalars import HalfInt, half_range, qint
from .uq import UqElement, antipode_inverse, represent, sigma

MAX_TWICE_LEVEL = 12


class BasisError(RuntimeError):
    pass


@dataclass
class TruncatedOperator:
    """A matrix over an ordered, labeled orthonormal basis; ``levels`` holds the spin label of each vector."""

    matrix: np.ndarray
    labels: list
    levels: np.ndarray
    top: float

    def interior(self, margin: float) -> np.ndarray:
        """Boolean mask of basis vectors at least ``margin`` below the truncation level."""
        return self.levels <= self.top - margin + 1e-9

    def _check(self, other: TruncatedOperator):
        if other.matrix.shape != self.matrix.shape or other.top != self.top:
            raise ValueError("operators live on different truncated bases")

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            self._check(other)
            return self.like(self.matrix @ other.matrix)
        return self.matrix @ other

    def __add__(self, other: TruncatedOperator):
        self._check(other)
        return self.like(self.matrix + other.matrix)

    def __sub__(self, other: TruncatedOperator):
        self._check(other)
        return self.like(self.matrix - other.matrix)

    def __mul__(self, scalar):
        return self.like(self.matrix * scalar)

    __rmul__ = __mul__

    def like(self, matrix) -> TruncatedOperator:
        return TruncatedOperator(np.asarray(matrix), self.labels, self.levels, self.top)

    def adjoint(self) -> TruncatedOperator:
        return self.like(self.matrix.conj().T)

    def interior_norm(self, margin: float) -> float:
        """Operator norm of the matrix restricted to interior columns."""
        cols = self.matrix[:, self.interior(margin)]
        return float(np.linalg.norm(cols, 2)) if cols.size else 0.0


def commutator(x: TruncatedOperator, y: TruncatedOperator) -> TruncatedOperator:
    return x @ y - y @ x


@dataclass
class LmnBasis:
    """Orthonormal |lmn> basis of the polynomials of degree <= 2L.

    Vectors are stored as real polynomials over multiprecision scalars.  An optional
    unimodular phase per spin l is applied at the matrix level: the basis actually
    used is φ_l |lmn>.
    """

    L: HalfInt
    alg: CoordAlgebra
    labels: list
    vectors: dict
    phases: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def q(self) -> float:
        return float(self.alg.scalars.q)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def index(self) -> dict:
        if "index" not in self._cache:
            self._cache["index"] = {lab: i for i, lab in enumerate(self.labels)}
        return self._cache["index"]

    @property
    def levels(self) -> np.ndarray:
        return np.array([float(lab[0]) for lab in self.labels])

    @property
    def phase_vector(self) -> np.ndarray:
        return np.array([complex(self.phases.get(lab[0], 1)) for lab in self.labels])

    def operator(self, matrix) -> TruncatedOperator:
        return TruncatedOperator(np.asarray(matrix), self.labels, self.levels, float(self.L))

    def rephase_linear(self, raw: np.ndarray) -> np.ndarray:
        p = self.phase_vector
        return raw * (p.conj()[:, None] * p[None, :])

    def rephase_antilinear(self, raw: np.ndarray) -> np.ndarray:
        p = self.phase_vector
        return raw * (p.conj()[:, None] * p.conj()[None, :])

    def _block_data(self):
        if "weights" in self._cache:
            return self._cache["weights"]
        ctx = self.alg.scalars.ctx
        groups: dict = {}
        for mono in normal_monomials(self.L.twice):
            groups.setdefault(monomial_weights(mono), ([], []))[0].append(mono)
        for lab in self.labels:
            _, m, n = lab
            groups[(m.twice, n.twice)][1].append(lab)
        data = {}
        for key, (monos, labs) in groups.items():
            if len(monos) != len(labs):
                raise BasisError(f"weight block {key} is not square")
            pos = {mono: i for i, mono in enumerate(monos)}
            mat = ctx.zeros(len(monos), len(labs))
            for col, lab in enumerate(labs):
                for mono, c in self.vectors[lab].terms.items():
                    mat[pos[mono], col] = c
            data[key] = (pos, [self.index[lab] for lab in labs], ctx.inverse(mat))
        self._cache["weights"] = data
        return data

    def expand_raw(self, x: CoordElement) -> np.ndarray:
        """Coordinates of x against the unphased vectors; x must have degree <= 2L."""
        data = self._block_data()
        ctx = self.alg.scalars.ctx
        out = np.zeros(self.dim, dtype=complex)
        grouped: dict = {}
        for mono, c in x.terms.items():
            if monomial_degree(mono) > self.L.twice:
                raise BasisError(f"monomial {mono} exceeds the truncation degree {self.L.twice}")
            grouped.setdefault(monomial_weights(mono), []).append((mono, c))
        for key, items in grouped.items():
            pos, cols, inv = data[key]
            vec = ctx.zeros(len(pos), 1)
            for mono, c in items:
                vec[pos[mono]] += c
            sol = inv * vec
            out[cols] += np.array([complex(sol[i]) for i in range(len(cols))])
        return out

    def expand(self, x: CoordElement) -> np.ndarray:
        """Coordinates of x in the (phased) basis."""
        return self.expand_raw(x) * self.phase_vector.conj()

    def gram(self) -> np.ndarray:
        """Gram matrix under the Haar inner product (only same-weight pairs can be nonzero)."""
        G = np.zeros((self.dim, self.dim), dtype=complex)
        by_weight: dict = {}
        for i, lab in enumerate(self.labels):
            by_weight.setdefault((lab[1], lab[2]), []).append(i)
        for idxs in by_weight.values():
            for i in idxs:
                for j in idxs:
                    G[i, j] = complex(inner_product(self.vectors[self.labels[j]], self.vectors[self.labels[i]]))
        return G

    def with_phases(self, phases: dict) -> LmnBasis:
        """The same vectors with per-spin phases; ladder matrices are unchanged."""
        out = LmnBasis(self.L, self.alg, list(self.labels), self.vectors, dict(phases))
        out._cache.update(self._cache)
        return out


def _check_level(L) -> HalfInt:
    L = HalfInt.of(L)
    if L.twice < 0:
        raise ValueError("truncation level must be nonnegative")
    if L.twice > MAX_TWICE_LEVEL:
        raise ValueError(f"2L = {L.twice} exceeds the configured maximum {MAX_TWICE_LEVEL}")
    return L


def default_precision(L, q: float) -> int:
    """Working digits for the ladder construction at level L.

    Monomial coefficients of |lmn> grow like q^{-(2l)^2 / 2.7}, and the Gram and
    expansion steps cancel about 2.5 times that many digits.
    """
    twice = HalfInt.of(L).twice
    return 24 + int(math.ceil(1.25 * twice**2 * math.log10(1.0 / q)))


def build_lmn_basis(L, q: float, dps: int | None = None, tol: float = 1e-12, check: bool = True) -> LmnBasis:
    """Ladder construction of |lmn> for l <= L."""
    L = _check_level(L)
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    alg = CoordAlgebra.multiprecision(q, dps or default_precision(L, q))
    s = alg.scalars
    U = alg.uq
    rho_f = antipode_inverse(U.f)
    vectors = {}
    for l2 in range(L.twice + 1):
        l = HalfInt(l2)
        seed = alg.a**l2
        seed = seed * (s.one / s.sqrt(inner_product(seed, seed)))
        top_row = {l: seed}
        ms = list(half_range(l))[::-1]
        for m_prev, m in zip(ms, ms[1:]):
            coeff = s.sqrt(s(qint(l - m_prev + 1, q)) * s(qint(l + m_prev, q)))
            top_row[m] = act_left(U.e, top_row[m_prev]) * (s.one / coeff)
        for m in ms:
            column = {l: top_row[m]}
            for n_prev, n in zip(ms, ms[1:]):
                coeff = s.sqrt(s(qint(l + n_prev, q)) * s(qint(l - n_prev + 1, q)))
                column[n] = act_right(column[n_prev], rho_f) * (s.one / coeff)
            for n, vec in column.items():
                vectors[(l, m, n)] = vec
    labels = [(HalfInt(l2), m, n) for l2 in range(L.twice + 1) for m in half_range(HalfInt(l2)) for n in half_range(HalfInt(l2))]
    basis = LmnBasis(L, alg, labels, vectors)
    if check:
        err = np.abs(basis.gram() - np.eye(basis.dim)).max()
        if err > tol:
            raise BasisError(f"Gram matrix deviates from identity by {err:.3e}")
    return basis


# operator matrices -----------------------------------------------------------------

def lift(x: CoordElement, basis: LmnBasis) -> CoordElement:
    """Re-express x over the basis' multiprecision scalars."""
    if x.alg is basis.alg:
        return x
    s = basis.alg.scalars
    src = x.alg.scalars
    return CoordElement(basis.alg, {mono: s(src.to_complex(c)) if src.exact else s(c) for mono, c in x.terms.items()})


def _columns(x: CoordElement, basis: LmnBasis, fits: np.ndarray) -> np.ndarray:
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j, lab in enumerate(basis.labels):
        if fits[j]:
            M[:, j] = basis.expand_raw(x * basis.vectors[lab])
    return M


def _pi_psi_pair(x: CoordElement, basis: LmnBasis):
    """Raw matrices of x and x*; columns leaving the truncation are filled from the adjoint."""
    d = x.degree
    fits = np.array([lab[0].twice + d <= basis.L.twice for lab in basis.labels])
    X = _columns(x, basis, fits)
    xs = star(x)
    Xs = _columns(xs, basis, fits) if not xs == x else X
    out = []
    for M, N, y in ((X, Xs, x), (Xs, X, xs)):
        M = M.copy()
        M[np.ix_(fits, ~fits)] = N[np.ix_(~fits, fits)].conj().T
        for i in np.flatnonzero(~fits):
            for j in np.flatnonzero(~fits):
                li, lj = basis.labels[i], basis.labels[j]
                if abs(li[0].twice - lj[0].twice) <= d:
                    M[i, j] = complex(haar(star(basis.vectors[li]) * y * basis.vectors[lj]))
        out.append(M)
    return out


def _key(x: CoordElement):
    return ("matrix",) + tuple(sorted((mono, complex(c)) for mono, c in x.terms.items()))


def pi_psi_matrix(x: CoordElement, basis: LmnBasis) -> TruncatedOperator:
    """Left multiplication by x compressed to the truncated basis (exact on columns with 2l + deg x <= 2L)."""
    x = lift(x, basis)
    key = _key(x)
    if key not in basis._cache:
        M, Ms = _pi_psi_pair(x, basis)
        basis._cache[key] = M
        basis._cache[_key(star(x))] = Ms
    return basis.operator(basis.rephase_linear(basis._cache[key]))


def _generator_matrices(basis: LmnBasis, side: str):
    key = f"gens_{side}"
    if key not in basis._cache:
        U = basis.alg.uq
        mats = []
        for h in (U.e, U.f, U.k):
            M = np.zeros((basis.dim, basis.dim), dtype=complex)
            for j, lab in enumerate(basis.labels):
                v = basis.vectors[lab]
                image = act_left(h, v) if side == "left" else act_right(v, antipode_inverse(h))
                M[:, j] = basis.expand_raw(image)
            mats.append(M)
        basis._cache[key] = tuple(mats)
    return tuple(basis.rephase_linear(M) for M in basis._cache[key])


def lambda_matrix(h: UqElement, basis: LmnBasis) -> TruncatedOperator:
    """π_ψ(h) x = h ▷ x."""
    E, F, K = _generator_matrices(basis, "left")
    return basis.operator(represent(h, E, F, K))


def rho_matrix(h: UqElement, basis: LmnBasis) -> TruncatedOperator:
    """ρ_ψ(h) x = x ◁ S^{-1}(h)."""
    E, F, K = _generator_matrices(basis, "right")
    return basis.operator(represent(h, E, F, K))


def tomita_matrix(basis: LmnBasis) -> np.ndarray:
    """Matrix M of the star map, T_ψ(v) = M conj(v) in basis coordinates."""
    if "tomita" not in basis._cache:
        M = np.zeros((basis.dim, basis.dim), dtype=complex)
        for j, lab in enumerate(basis.labels):
            M[:, j] = basis.expand_raw(star(basis.vectors[lab]))
        basis._cache["tomita"] = M
    return basis.rephase_antilinear(basis._cache["tomita"])


def tomita_formula(basis: LmnBasis) -> np.ndarray:
    """T_ψ|lmn> = (-1)^{2l+m+n} q^{m+n} |l,-m,-n> as a matrix acting on conjugated coordinates."""
    q = basis.q
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j, (l, m, n) in enumerate(basis.labels):
        sign = -1 if (l.twice + (m.twice + n.twice) // 2) % 2 else 1
        M[basis.index[(l, -m, -n)], j] = sign * q ** float(m + n)
    return M


def tomita_signs(basis: LmnBasis) -> dict:
    """Ratio of <l,-l,-l| T_ψ |lll> to q^{2l} for each spin, in the current phases."""
    M = tomita_matrix(basis)
    q = basis.q
    out = {}
    for l2 in range(basis.L.twice + 1):
        l = HalfInt(l2)
        out[l] = M[basis.index[(l, -l, -l)], basis.index[(l, l, l)]] / q**l2
    return out


def tomita_adjusted_basis(basis: LmnBasis, tol: float = 1e-8) -> LmnBasis:
    """Rephase each spin block by φ_l with φ_l^2 = ε_l, the sign measured on |lll>.

    This makes T_ψ agree with ``tomita_formula`` and leaves the λ and ρ matrices unchanged.
    """
    phases = {}
    for l, eps in tomita_signs(basis.with_phases({})).items():
        if abs(abs(eps) - 1) > tol or abs(eps.imag) > tol:
            raise BasisError(f"T_ψ does not map |lll> to a real unimodular multiple at l={l}: {eps}")
        phases[l] = 1.0 if eps.real > 0 else 1j
    return basis.with_phases(phases)


def sigma_block_error(basis: LmnBasis, h: UqElement) -> float:
    """Max deviation between λ(h) restricted to each V_{l,n} and σ_l(h)."""
    lam = lambda_matrix(h, basis).matrix
    err = 0.0
    for l2 in range(basis.L.twice + 1):
        l = HalfInt(l2)
        sig = sigma(h, l)
        for n in half_range(l):
            idx = [basis.index[(l, m, n)] for m in half_range(l)]
            err = max(err, float(np.abs(lam[np.ix_(idx, idx)] - sig).max()))
    return err
