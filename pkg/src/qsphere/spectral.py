"""Spinor spaces, the Dirac operators D and D̃, and the grading at c = ∞.

A spinor space is B ⊗ V_½ where B has labels (l, m, tag) and U_q(su(2)) acts by
σ_l on the m index (tag = n for O(SU_q(2)), tag = 0 for M_0).  Clebsch–Gordan
vectors split each B_l ⊗ V_½ into a spin l+½ (↓) and a spin l−½ (↑) part; D is
−(j+½) on ↓ and +(j+½) on ↑.  Spin-½ vectors are ordered |½,−½>, |½,+½>.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .heisenberg import TruncatedOperator
from .podles import PodlesBasis, grading_obstruction, pi_j_matrices
from .scalars import HalfInt, QParam, half_range, qint
from .uq import UqElement, coproduct, represent, sigma, spin_generators

UP, DOWN = "up", "down"
SPIN_HALF = (HalfInt(-1), HalfInt(1))


class SpectralError(RuntimeError):
    pass


def c_coeff(j, m, q: float) -> float:
    """C_{jm} = q^{-(j+m)/2} [j-m]^{1/2} [2j]^{-1/2}."""
    j, m = float(j), float(m)
    return q ** (-(j + m) / 2) * math.sqrt(max(qint(j - m, q), 0.0) / qint(2 * j, q))


def s_coeff(j, m, q: float) -> float:
    """S_{jm} = q^{(j-m)/2} [j+m]^{1/2} [2j]^{-1/2}."""
    j, m = float(j), float(m)
    return q ** ((j - m) / 2) * math.sqrt(max(qint(j + m, q), 0.0) / qint(2 * j, q))


def su2_base_labels(L) -> list:
    """Labels (l, m, n) of H_l, l <= L, in the order used by LmnBasis."""
    L = HalfInt.of(L)
    return [(HalfInt(l2), m, n) for l2 in range(L.twice + 1) for m in half_range(HalfInt(l2)) for n in half_range(HalfInt(l2))]


def podles_base_labels(N: int) -> list:
    return [(HalfInt(2 * l), k, HalfInt(0)) for l in range(N + 1) for k in half_range(HalfInt(2 * l))]


def podles_top_level(L) -> int:
    """M_0 levels kept for spinor sectors up to L: floor(L + ½)."""
    return HalfInt.of(L).twice // 2 + HalfInt.of(L).twice % 2


@dataclass
class SpinorBasis:
    """Orthonormal ↓/↑ basis of B ⊗ V_½, stored per (l, tag) block."""

    base_labels: list
    q: float
    labels: list = field(default_factory=list)
    blocks: list = field(default_factory=list)

    @property
    def base_dim(self) -> int:
        return len(self.base_labels)

    @property
    def dim(self) -> int:
        return 2 * self.base_dim

    @property
    def product_labels(self) -> list:
        return [(b, s) for b in self.base_labels for s in SPIN_HALF]

    @property
    def levels(self) -> np.ndarray:
        return np.repeat(np.array([float(b[0]) for b in self.base_labels]), 2)

    @property
    def top(self) -> float:
        return max(float(b[0]) for b in self.base_labels)

    @property
    def eigenvalues(self) -> np.ndarray:
        """D on each spinor label: +(j+½) on ↑, −(j+½) on ↓."""
        return np.array([(1 if arrow == UP else -1) * (float(j) + 0.5) for j, _, _, arrow in self.labels])

    def unitary(self) -> np.ndarray:
        """Columns are the spinor vectors in product coordinates."""
        U = np.zeros((self.dim, self.dim))
        for rows, cols, block in self.blocks:
            U[np.ix_(rows, cols)] = block
        return U

    def operator(self, matrix) -> TruncatedOperator:
        return TruncatedOperator(np.asarray(matrix), self.product_labels, self.levels, self.top)

    def sector_projector(self, max_j: float, arrows=(UP, DOWN)) -> np.ndarray:
        """Orthogonal projector (product coordinates) onto sectors j <= max_j."""
        U = self.unitary()
        keep = [i for i, (j, _, _, arrow) in enumerate(self.labels) if float(j) <= max_j + 1e-9 and arrow in arrows]
        return U[:, keep] @ U[:, keep].T

    def index_of(self, label) -> int:
        if not hasattr(self, "_index"):
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        return self._index[label]


def spinor_terms(base_labels: list) -> list:
    """Clebsch–Gordan recipe: per (l, tag) block, the spinor labels and their terms.

    Each term is (base label, spin index s, sign, kind, j') standing for
    sign * kind_{j', m} |base> ⊗ |s>, where kind is "C" or "S".  Terms whose base
    label is absent (|m| > l) are dropped; their coefficients vanish.
    """
    present = set(base_labels)
    groups: dict = {}
    for b in base_labels:
        groups.setdefault((b[0], b[2]), []).append(b)
    half = HalfInt(1)
    out = []
    for (l, tag) in sorted(groups, key=lambda key: (key[0], key[1])):
        entries = []
        j = l + half  # ↓ vectors of spin l+½
        for m in half_range(j):
            terms = [((l, m + half, tag), 0, 1, "C", j), ((l, m - half, tag), 1, 1, "S", j)]
            entries.append(((j, m, tag, DOWN), [t for t in terms if t[0] in present]))
        if l.twice > 0:
            j = l - half  # ↑ vectors of spin l−½
            for m in half_range(j):
                terms = [((l, m + half, tag), 0, -1, "S", j + 1), ((l, m - half, tag), 1, 1, "C", j + 1)]
                entries.append(((j, m, tag, UP), [t for t in terms if t[0] in present]))
        out.append(((l, tag), groups[(l, tag)], entries))
    return out


def build_spinor_basis(base_labels: list, q: float, tol: float = 1e-10) -> SpinorBasis:
    """Clebsch–Gordan ↓/↑ vectors over any base whose λ acts by σ_l on the m index."""
    basis = SpinorBasis(list(base_labels), q)
    pos = {b: i for i, b in enumerate(basis.base_labels)}
    coeff = {"C": c_coeff, "S": s_coeff}
    for (l, tag), members, entries in spinor_terms(basis.base_labels):
        rows = sorted(2 * pos[b] + s for b in members for s in range(2))
        local = {r: i for i, r in enumerate(rows)}
        block = np.zeros((len(rows), len(entries)))
        for col, ((_, m, _, _), terms) in enumerate(entries):
            for base, s, sign, kind, jj in terms:
                block[local[2 * pos[base] + s], col] += sign * coeff[kind](jj, m, q)
        err = np.abs(block.T @ block - np.eye(block.shape[1])).max()
        if block.shape[0] != block.shape[1] or err > tol:
            raise SpectralError(f"spinor block (l={l}, tag={tag}) is not orthonormal: {err:.2e}")
        cols = list(range(len(basis.labels), len(basis.labels) + len(entries)))
        basis.labels.extend(lab for lab, _ in entries)
        basis.blocks.append((rows, cols, block))
    return basis


def su2_spinor_basis(L, q: float) -> SpinorBasis:
    return build_spinor_basis(su2_base_labels(L), q)


def podles_spinor_basis(L, q: float) -> SpinorBasis:
    return build_spinor_basis(podles_base_labels(podles_top_level(L)), q)


def dirac(basis: SpinorBasis) -> TruncatedOperator:
    """D in product coordinates; exact on the whole truncated space."""
    U = basis.unitary()
    return basis.operator((U * basis.eigenvalues) @ U.T)


def dirac_su2(L, q: float) -> TruncatedOperator:
    return dirac(su2_spinor_basis(L, q))


def dirac_podles(L, params: QParam) -> TruncatedOperator:
    return dirac(podles_spinor_basis(L, params.q))


# representations on spinors -------------------------------------------------------

def base_lambda(h: UqElement, base_labels: list, q: float) -> np.ndarray:
    """σ_l(h) acting on the m index of (l, m, tag) labels."""
    pos = {b: i for i, b in enumerate(base_labels)}
    dim = len(base_labels)
    mats = [np.zeros((dim, dim)) for _ in range(3)]
    done = set()
    for l, _, tag in base_labels:
        if (l, tag) in done:
            continue
        done.add((l, tag))
        idx = [pos[(l, m, tag)] for m in half_range(l)]
        for M, G in zip(mats, spin_generators(l.twice, q)):
            M[np.ix_(idx, idx)] = G
    return represent(h, *mats)


def spinor_lambda(h: UqElement, basis: SpinorBasis) -> TruncatedOperator:
    """π(h) = (λ ⊗ σ_½)(Δh)."""
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for c, h1, h2 in coproduct(h).legs():
        out += complex(c) * np.kron(base_lambda(h1, basis.base_labels, basis.q), sigma(h2, HalfInt(1)))
    return basis.operator(out)


def spinor_rho(h: UqElement, basis: SpinorBasis) -> TruncatedOperator:
    """ρ(h) = ρ_ψ(h) ⊗ 1; ρ_ψ acts as σ_l on the index -n of |lmn>."""
    relabeled = [(l, -n, m) for l, m, n in basis.base_labels]
    return basis.operator(np.kron(base_lambda(h, relabeled, basis.q), np.eye(2)))


def spinor_algebra(base_matrix: np.ndarray, basis: SpinorBasis) -> TruncatedOperator:
    """π(x) = π_base(x) ⊗ 1."""
    return basis.operator(np.kron(base_matrix, np.eye(2)))


# spectra ------------------------------------------------------------------------

def spectrum_table(op: TruncatedOperator, max_sector: float | None = None, tol: float = 1e-9) -> list:
    """Rows (eigenvalue, multiplicity, sector) from eigvalsh, sector = |λ| − ½."""
    vals = np.linalg.eigvalsh(op.matrix)
    rounded = np.round(2 * vals) / 2
    if np.abs(vals - rounded).max(initial=0.0) > tol:
        raise SpectralError("eigenvalues are not half-integers within tolerance")
    counts = Counter(float(v) for v in rounded)
    rows = []
    for value, mult in counts.items():
        sector = abs(value) - 0.5
        if max_sector is None or sector <= max_sector + 1e-9:
            rows.append((value, mult, HalfInt.of(sector)))
    rows.sort(key=lambda r: (r[2], r[0] > 0, r[0]))
    return rows


def su2_expected(max_sector: float) -> list:
    rows = []
    for t in range(int(round(2 * max_sector)) + 1):
        j = t / 2
        if j > 0:
            rows.append((-(j + 0.5), int(2 * j * (2 * j + 1)), HalfInt(t)))
        rows.append((j + 0.5, int((2 * j + 1) * (2 * j + 2)), HalfInt(t)))
    rows.sort(key=lambda r: (r[2], r[0] > 0, r[0]))
    return rows


def podles_expected(max_sector: float) -> list:
    rows = []
    for t in range(1, int(round(2 * max_sector)) + 1, 2):
        j = t / 2
        rows.append((-(j + 0.5), t + 1, HalfInt(t)))
        rows.append((j + 0.5, t + 1, HalfInt(t)))
    rows.sort(key=lambda r: (r[2], r[0] > 0, r[0]))
    return rows


def counting_exponent(rows: list) -> float:
    """Least-squares slope of log N(Λ) against log Λ at the distinct |λ|.

    N(Λ) = #{|λ| < Λ} + ½ #{|λ| = Λ}, the half-step value of the counting function at its jumps.
    """
    by_abs: Counter = Counter()
    for value, mult, _ in rows:
        by_abs[abs(value)] += mult
    lams = np.array(sorted(by_abs))
    mults = np.array([by_abs[x] for x in lams], dtype=float)
    N = np.cumsum(mults) - mults / 2
    return float(np.polyfit(np.log(lams), np.log(N), 1)[0])


def su2_sector_spectrum(max_sector: float, q: float) -> list:
    """Spectrum of D over sectors j <= max_sector, assembled block by block (scales past the dense limit)."""
    L = HalfInt.of(max_sector) + HalfInt(1)
    basis = su2_spinor_basis(L, q)
    counts: Counter = Counter()
    for _, cols, block in basis.blocks:
        vals = np.linalg.eigvalsh((block * basis.eigenvalues[cols]) @ block.T)
        counts.update(float(v) for v in np.round(2 * vals) / 2)
    rows = [(v, m, HalfInt.of(abs(v) - 0.5)) for v, m in counts.items() if abs(v) - 0.5 <= max_sector + 1e-9]
    rows.sort(key=lambda r: (r[2], r[0] > 0, r[0]))
    return rows


# Podleś operators on spinors ------------------------------------------------------

def podles_base_matrices(basis: SpinorBasis, params: QParam) -> dict:
    N = int(max(float(b[0]) for b in basis.base_labels))
    pb = PodlesBasis(0, N, params)
    mats = pi_j_matrices(pb)
    if [(l, k) for l, k, _ in basis.base_labels] != pb.labels:
        raise SpectralError("spinor base labels do not match the Podleś basis")
    return {name: op.matrix for name, op in mats.items()}


def podles_pi(name: str, basis: SpinorBasis, params: QParam) -> TruncatedOperator:
    return spinor_algebra(podles_base_matrices(basis, params)[name], basis)


def build_grading(basis: SpinorBasis, params: QParam) -> TruncatedOperator:
    """γ|jm↓> = |jm↑> on complete pairs; unpaired top ↓ vectors are left fixed."""
    if not params.equatorial:
        raise SpectralError(
            f"no equivariant grading for c={params.c}: obstruction {grading_obstruction(params):.6g} != 0")
    G = np.zeros((basis.dim, basis.dim))
    U = basis.unitary()
    for i, (j, m, tag, arrow) in enumerate(basis.labels):
        partner = (j, m, tag, UP if arrow == DOWN else DOWN)
        try:
            k = basis.index_of(partner)
        except KeyError:
            k = i
        G[k, i] = 1.0
    return basis.operator(U @ G @ U.T)


def paired_sector_max(basis: SpinorBasis) -> float:
    """Largest j with both ↑ and ↓ sectors present."""
    ups = {j for j, _, _, a in basis.labels if a == UP}
    downs = {j for j, _, _, a in basis.labels if a == DOWN}
    return float(max(ups & downs))


def claim_values(basis: SpinorBasis, params: QParam) -> list:
    """(l, <w+, π(x_0) w+>, <w-, π(x_0) w->) for w± = 2^{-½}(|ll↓> ± |ll↑>)."""
    X0 = podles_pi("x_0", basis, params).matrix
    U = basis.unitary()
    out = []
    for t in range(1, int(2 * paired_sector_max(basis)) + 1, 2):
        l = HalfInt(t)
        dn = U[:, basis.index_of((l, l, HalfInt(0), DOWN))]
        up = U[:, basis.index_of((l, l, HalfInt(0), UP))]
        vals = []
        for sign in (1, -1):
            w = (dn + sign * up) / math.sqrt(2)
            vals.append(float(np.real(w.conj() @ X0 @ w)))
        out.append((l, vals[0], vals[1]))
    return out


def lldn_vectors(basis: SpinorBasis, l) -> tuple:
    """The explicit highest-weight pair of the grading proof, in product coordinates."""
    l = HalfInt.of(l)
    q = basis.q
    pos = {b: i for i, b in enumerate(basis.base_labels)}
    zero, half = HalfInt(0), HalfInt(1)
    dn = np.zeros(basis.dim)
    dn[2 * pos[(l - half, l - half, zero)] + 1] = 1.0
    up = np.zeros(basis.dim)
    lf = float(l)
    norm = 1 / math.sqrt(qint(2 * lf + 2, q))
    up[2 * pos[(l + half, l + half, zero)]] = -math.sqrt(q * qint(2 * lf + 1, q)) * norm
    up[2 * pos[(l + half, l - half, zero)] + 1] = q ** (-lf - 0.5) * norm
    return dn, up


def commutant_dimension(basis: SpinorBasis, params: QParam, tol: float = 1e-8, names=("A", "B", "B*")) -> int:
    """Dimension of the equivariant commutant of π̃(A), π̃(B), π̃(B*) on complete sectors.

    Equivariant operators are Σ_j X_j ⊗ 1 over the (↓, ↑) multiplicity space of each spin j;
    the constraints [X, π̃(x)] = 0 are imposed on columns in sectors j <= top − 1.
    """
    U = basis.unitary()
    top = paired_sector_max(basis)
    sectors = sorted({j for j, _, _, _ in basis.labels if float(j) <= top + 1e-9})
    mats = [U.T @ podles_pi(name, basis, params).matrix @ U for name in names]
    cols = [i for i, (j, _, _, _) in enumerate(basis.labels) if float(j) <= top - 1 + 1e-9]
    unknowns = []
    for j in sectors:
        arrows = [a for a in (DOWN, UP) if any(lab[0] == j and lab[3] == a for lab in basis.labels)]
        for a in arrows:
            for b in arrows:
                E = np.zeros((basis.dim, basis.dim))
                for m in half_range(j):
                    E[basis.index_of((j, m, HalfInt(0), a)), basis.index_of((j, m, HalfInt(0), b))] = 1.0
                unknowns.append(E)
    system = np.array([np.concatenate([(E @ P - P @ E)[:, cols].ravel() for P in mats]) for E in unknowns]).T
    sv = np.linalg.svd(system, compute_uv=False)
    return int(np.sum(sv < tol * max(sv.max(), 1.0)) + max(0, len(unknowns) - len(sv)))


# commutator diagnostics ------------------------------------------------------------

def interior_commutator_norm(D: TruncatedOperator, X: TruncatedOperator, margin: float) -> float:
    C = D @ X - X @ D
    return C.interior_norm(margin)
