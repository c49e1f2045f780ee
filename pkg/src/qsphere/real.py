"""Antilinear operators, Tomita operators, the spin-½ R-matrix and the real structures J, J̃.

An antilinear operator on a space with orthonormal basis is stored as the matrix M
with A v = M conj(v).  Then A∘B is linear with matrix M_A conj(M_B), the adjoint
(<A*x, y> = <Ay, x>) has matrix M^T, and A X A^{-1} has matrix M conj(X) M^{-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .scalars import HalfInt
from .spectral import DOWN, UP, SpinorBasis, base_lambda, paired_sector_max, spinor_terms
from .uq import UqAlgebra, UqElement, antipode, sigma, star


@dataclass
class AntilinearOperator:
    matrix: np.ndarray

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.conj(v)

    def then(self, other: AntilinearOperator) -> np.ndarray:
        """Matrix of the linear map self ∘ other."""
        return self.matrix @ np.conj(other.matrix)

    def after_linear(self, X: np.ndarray) -> AntilinearOperator:
        """self ∘ X."""
        return AntilinearOperator(self.matrix @ np.conj(X))

    def before_linear(self, X: np.ndarray) -> AntilinearOperator:
        """X ∘ self."""
        return AntilinearOperator(X @ self.matrix)

    def adjoint(self) -> AntilinearOperator:
        return AntilinearOperator(self.matrix.T.copy())

    def inverse(self) -> AntilinearOperator:
        return AntilinearOperator(np.conj(np.linalg.inv(self.matrix)))

    def conjugate(self, X: np.ndarray) -> np.ndarray:
        """self X self^{-1}."""
        return self.matrix @ np.conj(X) @ np.linalg.inv(self.matrix)

    def unitarity_error(self) -> float:
        M = self.matrix
        return float(np.abs(M.conj().T @ M - np.eye(M.shape[0])).max())


def kron(a: AntilinearOperator, b: AntilinearOperator) -> AntilinearOperator:
    return AntilinearOperator(np.kron(a.matrix, b.matrix))


def polar(a: AntilinearOperator, min_singular: float = 0.0):
    """A = J |A| with J antiunitary and |A| = (A*A)^{½}, via M = UΣV†: J ~ UV†, |A| = conj(V) Σ V^T."""
    U, sv, Vh = np.linalg.svd(a.matrix)
    if sv.min() <= min_singular:
        raise np.linalg.LinAlgError(f"antilinear operator is rank deficient (min singular value {sv.min():.3e})")
    V = Vh.conj().T
    return AntilinearOperator(U @ Vh), (np.conj(V) * sv) @ V.T


def spinor_to_product(M_spin: np.ndarray, basis: SpinorBasis) -> np.ndarray:
    """Matrix of an antilinear operator given in the spinor basis, in product coordinates."""
    U = basis.unitary()
    return U @ M_spin @ U.T


def t_half(q: float) -> AntilinearOperator:
    """T_½|½,½> = i q^{½}|½,−½>, T_½|½,−½> = −i q^{−½}|½,½>, order (−, +)."""
    r = math.sqrt(q)
    return AntilinearOperator(np.array([[0, 1j * r], [-1j / r, 0]]))


def r_prime(basis: SpinorBasis, alg: UqAlgebra) -> np.ndarray:
    """τRτ on B ⊗ V_½: (λ ⊗ σ_½)(q k⊗fe + q k^{-1}⊗ef + (q − q^{-1}) q^{½} e⊗f)."""
    q = basis.q
    lab = basis.base_labels
    half = HalfInt(1)
    e, f, k, kinv = alg.e, alg.f, alg.k, alg.kinv
    out = q * np.kron(base_lambda(k, lab, q), sigma(f * e, half))
    out = out + q * np.kron(base_lambda(kinv, lab, q), sigma(e * f, half))
    out = out + (q - 1 / q) * math.sqrt(q) * np.kron(base_lambda(e, lab, q), sigma(f, half))
    return out


def tomita_spinor(base_tomita: np.ndarray, basis: SpinorBasis, alg: UqAlgebra) -> AntilinearOperator:
    """T = R̂ ∘ τ ∘ (T_base ⊗ T_½), written on B ⊗ V_½ as R' (T_base ⊗ T_½)."""
    T0 = kron(AntilinearOperator(base_tomita), t_half(basis.q))
    return T0.before_linear(r_prime(basis, alg))


def podles_tomita_base(basis: SpinorBasis) -> np.ndarray:
    """T̃_ψ v^l_{m,0} = (−q)^m v^l_{−m,0}."""
    pos = {b: i for i, b in enumerate(basis.base_labels)}
    M = np.zeros((basis.base_dim, basis.base_dim), dtype=complex)
    for i, (l, m, tag) in enumerate(basis.base_labels):
        M[pos[(l, -m, tag)], i] = (-basis.q) ** int(m)
    return M


# multiprecision sparse route ---------------------------------------------------------
#
# T = R'(T_base ⊗ T_½) has entries of size q^{l} that arise as differences of terms of
# size q^{-l}; in double precision the small singular directions of T are lost by
# L ≈ 10.  All matrices involved are very sparse, so T, its spinor coordinates and a
# blockwise polar decomposition are computed with mpmath dictionaries of entries.

def default_tomita_precision(top: float, q: float) -> int:
    return 30 + math.ceil(4 * (top + 1) * math.log10(1 / q))


def _sparse_mul(A: dict, B: dict) -> dict:
    rows_of: dict = {}
    for (r, c), v in A.items():
        rows_of.setdefault(c, []).append((r, v))
    out: dict = {}
    for (r, c), v in B.items():
        for r2, w in rows_of.get(r, ()):
            out[(r2, c)] = out.get((r2, c), 0) + w * v
    return out


class _MpNumbers:
    def __init__(self, q: float, dps: int):
        self.ctx = mpmath.MPContext()
        self.ctx.dps = dps
        self.q = self.ctx.mpf(q)

    def qint(self, x) -> mpmath.mpf:
        x = float(x)
        q = self.q
        return (q**x - q**-x) / (q - 1 / q)

    def coeff(self, kind: str, j, m):
        j, m = float(j), float(m)
        if kind == "C":
            return self.q ** (-(j + m) / 2) * self.ctx.sqrt(max(self.qint(j - m), 0) / self.qint(2 * j))
        return self.q ** ((j - m) / 2) * self.ctx.sqrt(max(self.qint(j + m), 0) / self.qint(2 * j))


def _r_prime_sparse(basis: SpinorBasis, num: _MpNumbers) -> dict:
    """Entries of R' in product coordinates (spin index 0 = −½, 1 = +½)."""
    q, ctx = num.q, num.ctx
    pos = {b: i for i, b in enumerate(basis.base_labels)}
    cross = (q - 1 / q) * ctx.sqrt(q)
    out = {}
    for i, (l, m, tag) in enumerate(basis.base_labels):
        mf = float(m)
        out[(2 * i + 1, 2 * i + 1)] = q * q**mf
        out[(2 * i, 2 * i)] = q * q**-mf
        lower = (l, m - 1, tag)
        if lower in pos:
            out[(2 * pos[lower] + 1, 2 * i)] = cross * ctx.sqrt(num.qint(l - m + 1) * num.qint(l + m))
    return out


def _cg_sparse(basis: SpinorBasis, num: _MpNumbers) -> dict:
    """Entries of the Clebsch–Gordan unitary: product row, spinor column."""
    pos = {b: i for i, b in enumerate(basis.base_labels)}
    out = {}
    for _, _, entries in spinor_terms(basis.base_labels):
        for label, terms in entries:
            col = basis.index_of(label)
            for base, s, sign, kind, jj in terms:
                out[(2 * pos[base] + s, col)] = sign * num.coeff(kind, jj, label[1])
    return out


@dataclass
class SparseAntilinear:
    """Antilinear operator on spinors given by multiprecision entries in spinor coordinates."""

    basis: SpinorBasis
    entries: dict
    ctx: mpmath.MPContext

    def spinor_matrix(self) -> np.ndarray:
        M = np.zeros((self.basis.dim, self.basis.dim), dtype=complex)
        for (r, c), v in self.entries.items():
            M[r, c] = complex(v)
        return M

    def operator(self) -> AntilinearOperator:
        return AntilinearOperator(spinor_to_product(self.spinor_matrix(), self.basis))


def tomita_spinor_mp(base_tomita, basis: SpinorBasis, dps: int | None = None) -> SparseAntilinear:
    """R'(T_base ⊗ T_½) in spinor coordinates, computed in multiprecision.

    ``base_tomita`` is either a dense matrix or a callable (numbers) -> {(row, col): entry}.
    """
    dps = dps or default_tomita_precision(basis.top, basis.q)
    num = _MpNumbers(basis.q, dps)
    ctx = num.ctx
    if callable(base_tomita):
        base = base_tomita(num)
    else:
        rows, cols = np.nonzero(base_tomita)
        base = {(int(r), int(c)): ctx.mpc(base_tomita[r, c]) for r, c in zip(rows, cols)}
    root = ctx.sqrt(num.q)
    half = {(0, 1): ctx.mpc(0, root), (1, 0): ctx.mpc(0, -1 / root)}
    T0 = {(2 * r + a, 2 * c + b): v * w for (r, c), v in base.items() for (a, b), w in half.items()}
    T = _sparse_mul(_r_prime_sparse(basis, num), T0)
    U = _cg_sparse(basis, num)
    Ut = {(c, r): v for (r, c), v in U.items()}
    spin = _sparse_mul(Ut, _sparse_mul(T, U))
    # cancellation residue sits at the working precision relative to the largest entry
    eps = ctx.mpf(10) ** (-(dps - 10)) * max(abs(v) for v in spin.values())
    return SparseAntilinear(basis, {k: v for k, v in spin.items() if abs(v) > eps}, ctx)


def podles_tomita_entries(basis: SpinorBasis):
    """T̃_ψ v^l_{m,0} = (−q)^m v^l_{−m,0}, as a callable for ``tomita_spinor_mp``."""
    def entries(num: _MpNumbers) -> dict:
        pos = {b: i for i, b in enumerate(basis.base_labels)}
        return {(pos[(l, -m, tag)], i): num.ctx.mpc((-num.q) ** int(m))
                for i, (l, m, tag) in enumerate(basis.base_labels)}
    return entries


def _components(entries: dict) -> list:
    """Connected components of the row/column incidence graph, as (rows, cols)."""
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r, c in entries:
        parent[find(("r", r))] = find(("c", c))
    groups: dict = {}
    for node in list(parent):
        groups.setdefault(find(node), []).append(node)
    out = []
    for nodes in groups.values():
        rows = sorted(i for kind, i in nodes if kind == "r")
        cols = sorted(i for kind, i in nodes if kind == "c")
        out.append((rows, cols))
    return sorted(out)


def polar_blockwise(a: SparseAntilinear):
    """Polar decomposition a = J|a| computed block by block with mpmath SVDs.

    Returns J (product coordinates), |a| (product coordinates) and the smallest singular value.
    """
    ctx, basis = a.ctx, a.basis
    covered = set()
    Jm = np.zeros((basis.dim, basis.dim), dtype=complex)
    Pm = np.zeros((basis.dim, basis.dim), dtype=complex)
    smallest = math.inf
    for rows, cols in _components(a.entries):
        if len(rows) != len(cols):
            raise np.linalg.LinAlgError(f"antilinear operator is rank deficient on columns {cols}")
        block = ctx.matrix(len(rows), len(cols))
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                block[i, j] = a.entries.get((r, c), 0)
        U, S, Vh = ctx.svd_c(block)
        smallest = min(smallest, float(min(S)))
        J = U * Vh
        P = Vh.T * ctx.diag(S) * Vh.apply(ctx.conj)
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                Jm[r, c] = complex(J[i, j])
        for i, r in enumerate(cols):
            for j, c in enumerate(cols):
                Pm[r, c] = complex(P[i, j])
        covered.update(cols)
    if len(covered) != basis.dim:
        raise np.linalg.LinAlgError("antilinear operator has zero columns")
    U = basis.unitary()
    return AntilinearOperator(U @ Jm @ U.T), U @ Pm @ U.T, smallest


def _i_pow(n: int) -> complex:
    return 1j ** (n % 4)


def j_formula(basis: SpinorBasis) -> np.ndarray:
    """J|jmn↑> = i^{2(2j+m+n)}|j,−m,−n,↑>, J|jmn↓> = i^{2(2j−m−n)}|j,−m,−n,↓> in spinor coordinates."""
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, (j, m, n, arrow) in enumerate(basis.labels):
        sign = 1 if arrow == UP else -1
        power = 2 * j.twice + sign * (m.twice + n.twice)
        M[basis.index_of((j, -m, -n, arrow)), col] = _i_pow(power)
    return M


def t_formula(basis: SpinorBasis) -> np.ndarray:
    """T|lmν↓> = i^{2(2l−m−ν)} q^{l+m+ν+½}|l,−m,−ν,↓>, T|lmμ↑> = i^{2(2l+m+μ)} q^{−l+m+μ−½}|l,−m,−μ,↑>."""
    q = basis.q
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, (j, m, n, arrow) in enumerate(basis.labels):
        if arrow == DOWN:
            val = _i_pow(2 * j.twice - m.twice - n.twice) * q ** (float(j + m + n) + 0.5)
        else:
            val = _i_pow(2 * j.twice + m.twice + n.twice) * q ** (float(-j + m + n) - 0.5)
        M[basis.index_of((j, -m, -n, arrow)), col] = val
    return M


def t_adjoint_formula(basis: SpinorBasis) -> np.ndarray:
    """T*|lmν↓> = i^{2(2l+m+ν)} q^{l−m−ν+½}|l,−m,−ν,↓>, T*|lmμ↑> = i^{2(2l−m−μ)} q^{−l−m−μ−½}|l,−m,−μ,↑>."""
    q = basis.q
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, (j, m, n, arrow) in enumerate(basis.labels):
        if arrow == DOWN:
            val = _i_pow(2 * j.twice + m.twice + n.twice) * q ** (float(j - m - n) + 0.5)
        else:
            val = _i_pow(2 * j.twice - m.twice - n.twice) * q ** (float(-j - m - n) - 0.5)
        M[basis.index_of((j, -m, -n, arrow)), col] = val
    return M


def podles_t_formula(basis: SpinorBasis) -> np.ndarray:
    """T̃|lm↓> = i^{2m} q^{l+m+½}|l,−m,↓>, T̃|lm↑> = −i^{2m} q^{−l+m−½}|l,−m,↑>."""
    q = basis.q
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, (j, m, tag, arrow) in enumerate(basis.labels):
        if arrow == DOWN:
            val = _i_pow(m.twice) * q ** (float(j + m) + 0.5)
        else:
            val = -_i_pow(m.twice) * q ** (float(-j + m) - 0.5)
        M[basis.index_of((j, -m, tag, arrow)), col] = val
    return M


def podles_j_formula(basis: SpinorBasis) -> np.ndarray:
    """J̃|lm↓> = i^{2m}|l,−m,↓>, J̃|lm↑> = −i^{2m}|l,−m,↑>."""
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, (j, m, tag, arrow) in enumerate(basis.labels):
        M[basis.index_of((j, -m, tag, arrow)), col] = (1 if arrow == DOWN else -1) * _i_pow(m.twice)
    return M


def equivariance_image(h: UqElement) -> UqElement:
    """k S(h)* k^{-1}."""
    alg = h.alg
    return alg.k * star(antipode(h)) * alg.kinv


def equivariance_check(J: AntilinearOperator, rep, alg: UqAlgebra, mask: np.ndarray | None = None) -> float:
    """max over h in {e, f, k} of |J π(h) J^{-1} − π(k S(h)* k^{-1})| (columns restricted by mask)."""
    err = 0.0
    for h in (alg.e, alg.f, alg.k):
        diff = J.conjugate(rep(h)) - rep(equivariance_image(h))
        if mask is not None:
            diff = diff[:, mask]
        err = max(err, float(np.abs(diff).max(initial=0.0)))
    return err


def antilinear_equivariance_check(T: AntilinearOperator, rep, alg: UqAlgebra, mask=None) -> float:
    """max over h of |T π(h) − π(S(h)*) T|."""
    err = 0.0
    for h in (alg.e, alg.f, alg.k):
        diff = T.after_linear(rep(h)).matrix - T.before_linear(rep(star(antipode(h)))).matrix
        if mask is not None:
            diff = diff[:, mask]
        err = max(err, float(np.abs(diff).max(initial=0.0)))
    return err


# commutant decay -------------------------------------------------------------

def sector_columns(basis: SpinorBasis) -> dict:
    """Spinor sector j -> product-coordinate projector columns (as an isometry)."""
    U = basis.unitary()
    out: dict = {}
    for i, (j, _, _, _) in enumerate(basis.labels):
        out.setdefault(j, []).append(i)
    return {j: U[:, cols] for j, cols in sorted(out.items())}


def block_norms(C: np.ndarray, basis: SpinorBasis) -> dict:
    """Operator norm of C restricted to each spin sector (columns)."""
    return {j: float(np.linalg.norm(C @ iso, 2)) for j, iso in sector_columns(basis).items()}


def fitted_ratio(norms: dict, lo: float, hi: float) -> float:
    """exp of the least-squares slope of log b_j over lo <= j <= hi."""
    pts = [(float(j), b) for j, b in norms.items() if lo - 1e-9 <= float(j) <= hi + 1e-9]
    if len(pts) < 2 or any(b <= 0 for _, b in pts):
        return float("nan")
    xs = np.array([p[0] for p in pts])
    ys = np.log([p[1] for p in pts])
    return float(np.exp(np.polyfit(xs, ys, 1)[0]))


def commutant_decay(X: np.ndarray, Y: np.ndarray, J: AntilinearOperator, basis: SpinorBasis,
                    D: np.ndarray | None = None, fit_range=None) -> dict:
    """Block norms of [X, J Y J^{-1}] (or [[D, X], J Y J^{-1}] when D is given) and the fitted ratio."""
    JYJ = J.conjugate(Y)
    Xc = X if D is None else D @ X - X @ D
    norms = block_norms(Xc @ JYJ - JYJ @ Xc, basis)
    top = paired_sector_max(basis)
    lo, hi = fit_range or (2.0, top - 2.0)
    return {"norms": norms, "ratio": fitted_ratio(norms, lo, hi), "fit_range": (lo, hi)}


# assembled real structures ------------------------------------------------------------

@dataclass
class RealStructure:
    """T, its polar parts J and |T|, on a spinor basis (product coordinates)."""

    basis: SpinorBasis
    T: AntilinearOperator
    J: AntilinearOperator
    abs_T: np.ndarray
    min_singular: float


def _assemble(sparse: SparseAntilinear) -> RealStructure:
    J, P, smin = polar_blockwise(sparse)
    return RealStructure(sparse.basis, sparse.operator(), J, P, smin)


def su2_real_structure(lmn, dps: int | None = None) -> RealStructure:
    """T = R'(T_ψ ⊗ T_½) and T = J|T| over a Tomita-adjusted |lmn> basis."""
    from .heisenberg import tomita_matrix
    from .spectral import su2_spinor_basis

    basis = su2_spinor_basis(lmn.L, lmn.q)
    return _assemble(tomita_spinor_mp(tomita_matrix(lmn), basis, dps))


def podles_real_structure(basis: SpinorBasis, dps: int | None = None) -> RealStructure:
    """T̃ = R'(T̃_ψ ⊗ T_½) and T̃ = J̃|T̃| on an M_0 spinor basis."""
    return _assemble(tomita_spinor_mp(podles_tomita_entries(basis), basis, dps))


def j_zero(T: AntilinearOperator, basis: SpinorBasis, alg: UqAlgebra) -> AntilinearOperator:
    """J_0 = T π(k^{-1}) ρ(k)."""
    from .spectral import spinor_lambda, spinor_rho

    return T.after_linear(spinor_lambda(alg.kinv, basis).matrix @ spinor_rho(alg.k, basis).matrix)


def commutant_norm(xs, ys, A: AntilinearOperator, mask: np.ndarray) -> float:
    """max over pairs of |[x, A y A^{-1}]| restricted to the masked columns."""
    worst = 0.0
    for y in ys:
        Y = A.conjugate(y)
        for x in xs:
            worst = max(worst, float(np.linalg.norm((x @ Y - Y @ x)[:, mask], 2)))
    return worst


def restriction_check(lmn, params, dps: int | None = None) -> dict:
    """Compress T and J from O(SU_q(2)) ⊗ V_½ to M_0 ⊗ V_½ and compare with T̃ and J̃."""
    from .podles import gns_m0
    from .spectral import build_spinor_basis, podles_base_labels

    gns = gns_m0(lmn, params)
    E = np.kron(gns.embedding, np.eye(2))
    full = su2_real_structure(lmn, dps)
    pb = build_spinor_basis(podles_base_labels(int(gns.basis.l_max)), lmn.q)
    small = podles_real_structure(pb, dps)
    Tc = E.conj().T @ full.T.matrix @ np.conj(E)
    Jc = E.conj().T @ full.J.matrix @ np.conj(E)
    from .heisenberg import tomita_matrix

    Tpsi = gns.embedding.conj().T @ tomita_matrix(lmn) @ np.conj(gns.embedding)
    return {
        "tomita_base_error": float(np.abs(Tpsi - podles_tomita_base(pb)).max()),
        "T_error": float(np.abs(Tc - small.T.matrix).max()),
        "J_gap": float(np.linalg.norm(Jc - small.J.matrix, 2)),
    }
