"""Verification suites, run configuration and report/export emission."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import __version__
from .coord import CoordAlgebra, act_left, coord_counit, embed_podles, haar
from .heisenberg import (
    build_lmn_basis,
    lambda_matrix,
    pi_psi_matrix,
    rho_matrix,
    sigma_block_error,
    tomita_adjusted_basis,
    tomita_formula,
    tomita_matrix,
    tomita_signs,
)
from .podles import PodlesBasis, PodlesError, alpha, beta, cross_validate_pi0, grading_obstruction, pi_j_matrices
from .real import (
    AntilinearOperator,
    antilinear_equivariance_check,
    commutant_decay,
    commutant_norm,
    equivariance_check,
    j_formula,
    j_zero,
    podles_j_formula,
    podles_real_structure,
    podles_t_formula,
    r_prime,
    restriction_check,
    spinor_to_product,
    su2_real_structure,
    t_formula,
    t_half,
)
from .scalars import HalfInt, QParam, qint
from .spectral import (
    SpectralError,
    build_grading,
    claim_values,
    commutant_dimension,
    counting_exponent,
    dirac,
    paired_sector_max,
    podles_expected,
    podles_pi,
    podles_spinor_basis,
    podles_top_level,
    spectrum_table,
    spinor_algebra,
    spinor_lambda,
    spinor_rho,
    su2_expected,
    su2_sector_spectrum,
    su2_spinor_basis,
)
from .uq import UqAlgebra, antipode, coproduct, counit, sigma, star

SUITES = ("algebra", "heisenberg", "podles", "spectral", "grading", "real", "decay")
# suites that need the |lmn> basis of O(SU_q(2)) are limited by its construction cost
LMN_SUITES = {"heisenberg", "real"}
MAX_LMN_LEVEL = HalfInt(12)
MAX_LEVEL = HalfInt(80)

DEFAULT_TOL = {
    "algebra": 1e-12,
    "heisenberg": 1e-9,
    "podles": 1e-9,
    "spectral": 1e-9,
    "grading": 1e-9,
    "real": 1e-9,
    "decay": 1e-9,
}


class ConfigError(ValueError):
    pass


def parse_c(text) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    if str(text).strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"c must be a number or 'inf', got {text!r}") from exc


@dataclass
class RunConfig:
    q: float = 0.5
    c: float = math.inf
    level: HalfInt = field(default_factory=lambda: HalfInt(8))
    suite: str = "all"
    tol: dict = field(default_factory=dict)
    fmt: str = "json"
    out: str | None = None
    seed: int = 0
    timings: bool = False

    def __post_init__(self):
        try:
            self.params = QParam(float(self.q), parse_c(self.c))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        self.q, self.c = self.params.q, self.params.c
        try:
            self.level = HalfInt.of(self.level)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"level must be a half-integer, got {self.level!r}") from exc
        if self.level < HalfInt(1) or self.level > MAX_LEVEL:
            raise ConfigError(f"level must lie in [1/2, {MAX_LEVEL}], got {self.level}")
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + ('all',))}")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        chosen = set(SUITES) if self.suite == "all" else {self.suite}
        if chosen & LMN_SUITES and self.level > MAX_LMN_LEVEL:
            raise ConfigError(f"suites {sorted(chosen & LMN_SUITES)} need level <= {MAX_LMN_LEVEL}")

    def echo(self) -> dict:
        return {"q": self.q, "c": "inf" if math.isinf(self.c) else self.c, "level": str(self.level),
                "suite": self.suite, "tol": dict(sorted(self.tol.items())), "seed": self.seed}

    def tolerance(self, name: str, default: float) -> float:
        for key in (name, name.split(".")[0]):
            if key in self.tol:
                return float(self.tol[key])
        return default


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    max_error: float | None
    tolerance: float | None
    seconds: float | None = None
    detail: str | None = None


@dataclass
class CheckReport:
    config: dict
    checks: list
    notes: dict
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"config": self.config, "version": self.version, "notes": dict(sorted(self.notes.items())),
                "checks": [asdict(c) for c in self.checks], "passed": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "anchor", "passed", "max_error", "tolerance", "seconds", "detail"])
        for c in self.checks:
            w.writerow([c.name, c.anchor, c.passed, c.max_error, c.tolerance, c.seconds, c.detail])
        return buf.getvalue()


def _rounded(x):
    # three significant digits keep reports identical across BLAS thread schedules
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x) or x == 0:
        return x
    return float(f"{x:.3e}")


# suite plumbing ----------------------------------------------------------------

class Context:
    """Shared, lazily built objects for one run."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.q = config.q
        self.params = config.params
        self.L = config.level
        self.rng = np.random.default_rng(config.seed)
        self.uq = UqAlgebra.numeric(self.q)
        self._cache: dict = {}

    def cached(self, key: str, build: Callable):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def lmn(self):
        return self.cached("lmn", lambda: tomita_adjusted_basis(build_lmn_basis(self.L, self.q)))

    @property
    def su2_spinors(self):
        return self.cached("su2_spinors", lambda: su2_spinor_basis(self.L, self.q))

    @property
    def podles_spinors(self):
        return self.cached("podles_spinors", lambda: podles_spinor_basis(self.L, self.q))

    @property
    def exact_q(self) -> Fraction:
        # exact identities hold for every q; a nearby rational keeps the number field small
        return Fraction(self.q).limit_denominator(1000)


CheckFn = Callable[[Context], tuple]


@dataclass
class Spec:
    name: str
    anchor: str
    fn: CheckFn
    mode: str = "le"  # "le": error <= tol; "gt": value > tol; "bool": fn decides


def _run_one(spec: Spec, ctx: Context, suite: str) -> Check:
    tol = ctx.config.tolerance(spec.name, DEFAULT_TOL[suite])
    start = time.perf_counter()
    detail = None
    try:
        out = spec.fn(ctx)
        value, extra = (out if isinstance(out, tuple) else (out, None))
        if spec.mode == "bool":
            passed, value, tol, detail = value, extra.get("value"), extra.get("tolerance"), extra.get("detail")
        else:
            if isinstance(extra, dict):
                # a check's own default yields to an explicit --tol override
                if not (spec.name in ctx.config.tol or suite in ctx.config.tol):
                    tol = extra.get("tolerance", tol)
                detail = extra.get("detail")
            elif extra is not None:
                detail = str(extra)
            passed = bool(value <= tol) if spec.mode == "le" else bool(value > tol)
    except (ArithmeticError, ValueError, PodlesError, SpectralError, np.linalg.LinAlgError) as exc:
        passed, value, detail = False, None, f"{type(exc).__name__}: {exc}"
    seconds = round(time.perf_counter() - start, 3) if ctx.config.timings else None
    return Check(spec.name, spec.anchor, passed, _rounded(value), tol, seconds, detail)


def _max_abs(*arrays) -> float:
    return max(float(np.abs(a).max(initial=0.0)) for a in arrays)


def _mask_cols(matrix: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return matrix[:, mask]


# algebra -----------------------------------------------------------------------

def _random_uq(alg: UqAlgebra, rng, terms: int = 3):
    x = alg.element()
    for _ in range(terms):
        i, n, j = (int(v) for v in rng.integers([0, -2, 0], [3, 3, 3]))
        x = x + alg.monomial(i, n, j, coeff=int(rng.integers(-3, 4)) or 1)
    return x


def _random_coord(alg: CoordAlgebra, rng, terms: int = 3):
    x = alg.element()
    letters = [alg.a, alg.astar, alg.b, alg.bstar]
    for _ in range(terms):
        word = alg.one
        for _ in range(int(rng.integers(0, 4))):
            word = word * letters[int(rng.integers(0, 4))]
        x = x + word * alg.scalars(int(rng.integers(-3, 4)) or 1)
    return x


def _uq_relations(ctx):
    U = UqAlgebra.exact(ctx.exact_q)
    e, f, k, kinv = U.e, U.f, U.k, U.kinv
    s = U.scalars
    one = s.one
    ok = (k * e * kinv == e * (one / s.q) and k * f * kinv == f * s.q
          and e * f - f * e == (kinv * kinv - k * k) * (one / (s.q - one / s.q)) and k * kinv == U.one)
    return ok, {"value": 0.0 if ok else 1.0, "tolerance": 0.0, "detail": f"exact at q={ctx.exact_q}"}


def _uq_hopf(ctx):
    U = UqAlgebra.exact(ctx.exact_q)
    rng = np.random.default_rng(ctx.config.seed)
    bad = 0
    for _ in range(4):
        x, y = _random_uq(U, rng), _random_uq(U, rng)
        if coproduct(x * y) != coproduct(x) * coproduct(y):
            bad += 1
        total = U.element()
        for c, h1, h2 in coproduct(x).legs():
            total = total + antipode(h1) * h2 * c
        if total != U.one * counit(x):
            bad += 1
        if star(x * y) != star(y) * star(x):
            bad += 1
    return bad == 0, {"value": float(bad), "tolerance": 0.0, "detail": "random samples (seeded)"}


def _uq_star_rep(ctx):
    rng = np.random.default_rng(ctx.config.seed + 1)
    err = 0.0
    for _ in range(4):
        x = _random_uq(ctx.uq, rng)
        for l2 in range(5):
            err = max(err, _max_abs(sigma(star(x), HalfInt(l2)) - sigma(x, HalfInt(l2)).conj().T))
    return err


def _coord_relations(ctx):
    A = CoordAlgebra.exact(ctx.exact_q)
    a, b, ast, bst, one = A.a, A.b, A.astar, A.bstar, A.one
    q = A.scalars.q
    zero = A.element()
    rels = [b * a - a * b * q, bst * a - a * bst * q, b * bst - bst * b,
            a * ast + b * bst - one, ast * a + bst * b * (q * q) - one]
    ok = all(r == zero for r in rels)
    return ok, {"value": 0.0 if ok else 1.0, "tolerance": 0.0, "detail": f"exact at q={ctx.exact_q}"}


def _haar_closed_form(ctx):
    A = CoordAlgebra.exact(ctx.exact_q)
    s = A.scalars
    zeta = A.b * A.bstar
    ok = True
    power = A.one
    for n in range(7):
        expected = (s.one - s.q * s.q) / (s.one - s.qpow(2 * n + 2))
        ok &= haar(power) == expected
        power = power * zeta
    return ok, {"value": 0.0 if ok else 1.0, "tolerance": 0.0, "detail": "n <= 6, exact"}


def _haar_invariance(ctx):
    A = CoordAlgebra.exact(ctx.exact_q)
    U = A.uq
    rng = np.random.default_rng(ctx.config.seed + 2)
    ok = True
    for _ in range(4):
        x = _random_coord(A, rng)
        for h in (U.e, U.f, U.k):
            ok &= haar(act_left(h, x)) == counit(h) * haar(x)
        for h in (U.e, U.f):
            ok &= act_left(h, act_left(U.k, x)) == act_left(h * U.k, x)
        lhs = act_left(U.e, act_left(U.f, x)) - act_left(U.f, act_left(U.e, x))
        ok &= lhs == act_left(U.e * U.f - U.f * U.e, x)
        ok &= coord_counit(x * x.star()) == coord_counit(x) * A.scalars.conj(coord_counit(x))
    return ok, {"value": 0.0 if ok else 1.0, "tolerance": 0.0, "detail": "random samples (seeded), exact"}


ALGEBRA = [
    Spec("algebra.uq_relations", "U_q(su(2)) defining relations", _uq_relations, "bool"),
    Spec("algebra.uq_hopf", "coproduct multiplicative, antipode axiom, star anti-multiplicative", _uq_hopf, "bool"),
    Spec("algebra.uq_star_rep", "sigma_l(h*) = sigma_l(h)^dagger", _uq_star_rep),
    Spec("algebra.coord_relations", "O(SU_q(2)) defining relations", _coord_relations, "bool"),
    Spec("algebra.haar_closed_form", "psi((bb*)^n) = (1-q^2)/(1-q^(2n+2))", _haar_closed_form, "bool"),
    Spec("algebra.actions", "left action is a module algebra action; Haar state invariant", _haar_invariance, "bool"),
]


# heisenberg -----------------------------------------------------------------------

def _interior(ctx, margin=1.0):
    return ctx.lmn.levels <= float(ctx.L) - margin + 1e-9


def _gram(ctx):
    return _max_abs(ctx.lmn.gram() - np.eye(ctx.lmn.dim))


def _tomita_formula(ctx):
    signs = tomita_signs(ctx.lmn.with_phases({}))
    flipped = sorted(str(l) for l, eps in signs.items() if eps.real < 0)
    err = _max_abs(tomita_matrix(ctx.lmn) - tomita_formula(ctx.lmn))
    return err, f"rephased spins: {', '.join(flipped) or 'none'}"


def _tomita_identities(ctx):
    lmn = ctx.lmn
    U = ctx.uq
    T = AntilinearOperator(tomita_matrix(lmn))
    lk, rk, rki = (lambda_matrix(U.k, lmn).matrix, rho_matrix(U.k, lmn).matrix, rho_matrix(U.kinv, lmn).matrix)
    J = T.before_linear(lk @ rki)
    eye = np.eye(lmn.dim)
    return _max_abs(T.then(T) - eye, T.adjoint().matrix - lk @ lk @ rki @ rki @ T.matrix,
                    J.then(J) - eye, J.matrix.conj().T @ J.matrix - eye)


def _lambda_blocks(ctx):
    U = ctx.uq
    return max(sigma_block_error(ctx.lmn, h) for h in (U.e, U.f, U.k))


def _pi_psi(ctx):
    lmn = ctx.lmn
    A = lmn.alg
    return {n: pi_psi_matrix(x, lmn).matrix for n, x in A.generators().items()}


def _pi_relations(ctx):
    p = ctx.cached("pi_psi", lambda: _pi_psi(ctx))
    q = ctx.q
    eye = np.eye(ctx.lmn.dim)
    m = _interior(ctx)
    rels = [p["a"] @ p["a*"] + p["b"] @ p["b*"] - eye, p["a*"] @ p["a"] + q * q * p["b*"] @ p["b"] - eye,
            p["b"] @ p["a"] - q * p["a"] @ p["b"], p["b"] @ p["b*"] - p["b*"] @ p["b"]]
    return _max_abs(*(r[:, m] for r in rels))


def _pi_adjoint(ctx):
    p = ctx.cached("pi_psi", lambda: _pi_psi(ctx))
    m = _interior(ctx)
    return _max_abs((p["a*"] - p["a"].conj().T)[:, m], (p["b*"] - p["b"].conj().T)[:, m])


HEISENBERG = [
    Spec("heisenberg.orthonormality", "|lmn> basis is orthonormal for the Haar inner product", _gram),
    Spec("heisenberg.tomita_formula", "T_psi|lmn> = (-1)^(2l+m+n) q^(m+n) |l,-m,-n>", _tomita_formula),
    Spec("heisenberg.tomita_identities", "T_psi^2 = 1, T_psi* = pi(k^2)rho(k^-2)T_psi, J_psi^2 = 1", _tomita_identities),
    Spec("heisenberg.lambda_blocks", "lambda acts by sigma_l on each V_(l,n)", _lambda_blocks),
    Spec("heisenberg.pi_relations", "pi_psi respects the O(SU_q(2)) relations", _pi_relations),
    Spec("heisenberg.pi_adjoint", "pi_psi(x*) = pi_psi(x)^dagger", _pi_adjoint),
]


# podles ----------------------------------------------------------------------

def _podles_basis(ctx, j=0):
    """π_j truncated at the largest level <= L compatible with j."""
    j = HalfInt.of(j)
    top = HalfInt(ctx.L.twice - (ctx.L.twice - j.twice) % 2)
    return PodlesBasis(j, max(top, abs(j)), ctx.params)


def _podles_relations(ctx):
    q, c = ctx.q, ctx.params.c
    err = 0.0
    for j in (0, HalfInt(1), HalfInt(-1), 1, -1):
        pb = _podles_basis(ctx, j)
        mats = {n: op.matrix for n, op in pi_j_matrices(pb).items()}
        A, B, Bs = mats["A"], mats["B"], mats["B*"]
        eye = np.eye(pb.dim)
        m = pb.levels <= float(pb.l_max) - 1 + 1e-9
        if ctx.params.equatorial:
            rels = [Bs @ B + A @ A - eye, B @ Bs + q**4 * A @ A - eye]
        else:
            rels = [Bs @ B - A + A @ A - c * eye, B @ Bs - q * q * A + q**4 * A @ A - c * eye]
        rels += [B @ A - q * q * A @ B, A - A.conj().T, Bs - B.conj().T]
        err = max(err, _max_abs(*(r[:, m] for r in rels)))
    return err


def _podles_alpha(ctx):
    worst = math.inf
    for j in (0, HalfInt(1), HalfInt(-1)):
        for t in range(int(float(ctx.L)) + 1):
            worst = min(worst, alpha(j, abs(HalfInt.of(j)) + t, ctx.params))
    return worst >= 0, {"value": worst, "tolerance": 0.0, "detail": "minimum of alpha_j(l)"}


def _cross_validate(ctx):
    L = min(ctx.L, MAX_LMN_LEVEL)
    out = cross_validate_pi0(L, ctx.params, lmn=ctx.lmn if L == ctx.L else None)
    return out["max_deviation"], {"tolerance": ctx.config.tolerance("podles.gns_cross_validation", 1e-8),
                                  "detail": f"L = {L}, norm error {out['norm_error']:.1e}"}


PODLES = [
    Spec("podles.relations", "pi_j respects the Podles relations", _podles_relations),
    Spec("podles.alpha_real", "alpha_j(l) radicands are nonnegative", _podles_alpha, "bool"),
    Spec("podles.gns_cross_validation", "GNS restriction to M_0 reproduces the closed form pi_0", _cross_validate),
]


# spectral --------------------------------------------------------------------

def _rows_error(rows, expected) -> float:
    return 0.0 if [(v, m, s) for v, m, s in rows] == expected else 1.0


def _su2_spectrum(ctx):
    top = float(ctx.L) - 0.5
    if ctx.L <= MAX_LMN_LEVEL:
        rows = spectrum_table(dirac(ctx.su2_spinors), top)
    else:
        rows = su2_sector_spectrum(top, ctx.q)
    return _rows_error(rows, su2_expected(top)), {"tolerance": 0.0, "detail": f"sectors j <= {HalfInt.of(top)}"}


def _podles_spectrum(ctx):
    pb = ctx.podles_spinors
    top = paired_sector_max(pb)
    rows = spectrum_table(dirac(pb), top)
    return _rows_error(rows, podles_expected(top)), {"tolerance": 0.0, "detail": f"sectors j <= {HalfInt.of(top)}"}


def _dirac_equivariance(ctx):
    U = ctx.uq
    if ctx.L > HalfInt(8):
        return 0.0, "skipped above level 4"
    sb = ctx.su2_spinors
    D = dirac(sb).matrix
    err = 0.0
    for h in (U.e, U.f, U.k):
        for X in (spinor_lambda(h, sb).matrix, spinor_rho(h, sb).matrix):
            err = max(err, _max_abs(D @ X - X @ D))
    pb = ctx.podles_spinors
    Dt = dirac(pb).matrix
    for h in (U.e, U.f, U.k):
        X = spinor_lambda(h, pb).matrix
        err = max(err, _max_abs(Dt @ X - X @ Dt))
    return err


def _bounded_commutators(ctx):
    pb = ctx.podles_spinors
    D = dirac(pb).matrix
    m = pb.levels <= pb.top - 1 + 1e-9
    norms = [np.linalg.norm(((D @ X - X @ D))[:, m], 2)
             for X in (podles_pi(n, pb, ctx.params).matrix for n in ("A", "B", "B*"))]
    # bounded: the commutator norm does not grow with the level
    return float(max(norms)), {"tolerance": 2.0 + 2.0 / ctx.q, "detail": "max ||[D~, pi~(x)]|| on interior"}


def _exponent_su2(ctx):
    e = counting_exponent(su2_sector_spectrum(8, ctx.q))
    return abs(e - 3.0), {"tolerance": 0.2, "detail": f"exponent {e:.4f} (l <= 8)"}


def _exponent_podles(ctx):
    e = counting_exponent(podles_expected(20))
    pb = podles_spinor_basis(20, ctx.q)
    e_measured = counting_exponent(spectrum_table(dirac(pb), paired_sector_max(pb)))
    return abs(e_measured - 2.0), {"tolerance": 0.1, "detail": f"exponent {e_measured:.4f} (l <= 20), table {e:.4f}"}


SPECTRAL = [
    Spec("spectral.dirac_su2", "D = -(j+1/2) on spin l+1/2, +(j+1/2) on spin l-1/2", _su2_spectrum),
    Spec("spectral.dirac_podles", "D~ has eigenvalues +-(l+1/2) with multiplicity 2l+1", _podles_spectrum),
    Spec("spectral.equivariance", "D commutes with lambda and rho; D~ commutes with lambda~", _dirac_equivariance),
    Spec("spectral.bounded_commutators", "[D~, pi~(x)] bounded", _bounded_commutators),
    Spec("spectral.exponent_su2", "counting exponent of D near 3", _exponent_su2),
    Spec("spectral.exponent_podles", "counting exponent of D~ near 2", _exponent_podles),
]


# grading ---------------------------------------------------------------------

def _obstruction(ctx):
    value = grading_obstruction(ctx.params)
    q = ctx.q
    expected = 0.0 if ctx.params.equatorial else (q**-2 - 1) / qint(3, q)
    return abs(value - expected), {"tolerance": 1e-12, "detail": f"beta_1/2(1/2) + beta_-1/2(1/2) = {value:.12g}"}


def _grading_ops(ctx):
    pb = ctx.podles_spinors
    G = build_grading(pb, ctx.params).matrix
    D = dirac(pb).matrix
    top = paired_sector_max(pb)
    Pp = pb.sector_projector(top)
    return pb, G, D, Pp, pb.sector_projector(top - 1)


def _grading_algebraic(ctx):
    pb, G, D, Pp, _ = ctx.cached("grading", lambda: _grading_ops(ctx))
    eye = np.eye(pb.dim)
    return _max_abs(G - G.conj().T, G @ G - eye, (G @ D + D @ G) @ Pp)


def _grading_commutes(ctx):
    pb, G, _, _, Pi = ctx.cached("grading", lambda: _grading_ops(ctx))
    U = ctx.uq
    err = max(np.linalg.norm((G @ X - X @ G) @ Pi, 2)
              for X in (podles_pi(n, pb, ctx.params).matrix for n in ("A", "B")))
    err_h = max(np.linalg.norm(G @ X - X @ G, 2) for X in (spinor_lambda(h, pb).matrix for h in (U.e, U.f, U.k)))
    return float(max(err, err_h)), {"tolerance": 1e-10, "detail": f"pi~ {err:.1e}, lambda~ {err_h:.1e}"}


def _grading_claims(ctx):
    pb = ctx.podles_spinors
    err = 0.0
    for l, plus, minus in claim_values(pb, ctx.params):
        err = max(err, abs(plus - beta(HalfInt(1), l, ctx.params)), abs(minus - beta(HalfInt(-1), l, ctx.params)))
    return err


def _commutant(ctx):
    dims = {str(c): commutant_dimension(podles_spinor_basis(min(ctx.L, HalfInt(8)), ctx.q), QParam(ctx.q, c))
            for c in (0.0, 1.0, math.inf)}
    ok = all(d == 2 for d in dims.values())
    return ok, {"value": float(max(abs(d - 2) for d in dims.values())), "tolerance": 0.0,
                "detail": "dimensions " + ", ".join(f"c={k}: {v}" for k, v in dims.items())}


GRADING_OBSTRUCTION = Spec("grading.obstruction", "equivariant grading exists iff c = inf", _obstruction)
GRADING = [
    Spec("grading.algebraic", "gamma = gamma^dagger, gamma^2 = 1, gamma D~ = -D~ gamma", _grading_algebraic),
    Spec("grading.commutation", "gamma commutes with pi~(A), pi~(B), lambda~(h)", _grading_commutes),
    Spec("grading.highest_weight_values", "<w+-, pi(x_0) w+-> = beta_(+-1/2)(l)", _grading_claims),
    Spec("grading.equivariant_commutant", "equivariant commutant of pi~ is two dimensional", _commutant, "bool"),
]


# real structure --------------------------------------------------------------

def _su2_real(ctx):
    return ctx.cached("su2_real", lambda: su2_real_structure(ctx.lmn))


def _podles_real(ctx):
    return ctx.cached("podles_real", lambda: podles_real_structure(ctx.podles_spinors))


def _real_t_formula(ctx):
    rs = _su2_real(ctx)
    return _max_abs(rs.T.matrix - spinor_to_product(t_formula(rs.basis), rs.basis))


def _real_j(ctx):
    rs = _su2_real(ctx)
    sb = rs.basis
    D = dirac(sb).matrix
    J = rs.J
    eye = np.eye(sb.dim)
    errs = {
        "formula": _max_abs(J.matrix - spinor_to_product(j_formula(sb), sb)),
        "J^2+1": _max_abs(J.then(J) + eye),
        "JD-DJ": _max_abs(J.after_linear(D).matrix - J.before_linear(D).matrix),
    }
    worst = max(errs.values())
    return worst, ", ".join(f"{k} {v:.1e}" for k, v in errs.items())


def _real_equivariance(ctx):
    rs = _su2_real(ctx)
    rep = lambda h: spinor_lambda(h, rs.basis).matrix  # noqa: E731
    return max(equivariance_check(rs.J, rep, ctx.uq), antilinear_equivariance_check(rs.T, rep, ctx.uq))


def _real_abs(ctx):
    rs = _su2_real(ctx)
    sb = rs.basis
    U = ctx.uq
    Us = sb.unitary()
    qD = Us @ np.diag(ctx.q ** (-sb.eigenvalues)) @ Us.T
    Rp = r_prime(sb, U)
    w, V = np.linalg.eigh(Rp @ Rp.conj().T)
    abs_R = (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T
    expected = spinor_lambda(U.k, sb).matrix @ spinor_rho(U.kinv, sb).matrix @ qD
    return _max_abs(abs_R - qD, rs.abs_T - expected), f"min singular value of T {rs.min_singular:.3e}"


def _real_half(ctx):
    Th = t_half(ctx.q)
    Jh = Th.before_linear(sigma(ctx.uq.k, HalfInt(1)))
    return _max_abs(Jh.then(Jh) + np.eye(2), Jh.matrix.conj().T @ Jh.matrix - np.eye(2))


def _su2_pi(ctx):
    rs = _su2_real(ctx)
    return {n: spinor_algebra(pi_psi_matrix(x, ctx.lmn).matrix, rs.basis).matrix
            for n, x in ctx.lmn.alg.generators().items()}


def _real_commutant(ctx):
    rs = _su2_real(ctx)
    pis = list(ctx.cached("su2_pi", lambda: _su2_pi(ctx)).values())
    mask = rs.basis.levels <= float(ctx.L) - 1 + 1e-9
    J0 = j_zero(rs.T, rs.basis, ctx.uq)
    t_err = commutant_norm(pis, pis, rs.T, mask)
    j0_err = commutant_norm(pis, pis, J0, mask)
    j_val = commutant_norm(pis, pis, rs.J, mask)
    return max(t_err, j0_err), f"T {t_err:.1e}, J_0 {j0_err:.1e}, J (nonzero) {j_val:.3g}"


def _podles_t(ctx):
    if not ctx.params.equatorial:
        return 0.0, "c < inf: the M_0 real structure is only evaluated at c = inf"
    rs = _podles_real(ctx)
    pb = rs.basis
    U = ctx.uq
    Us = pb.unitary()
    qD = Us @ np.diag(ctx.q ** (-pb.eigenvalues)) @ Us.T
    errs = [_max_abs(rs.T.matrix - spinor_to_product(podles_t_formula(pb), pb)),
            _max_abs(rs.J.matrix - spinor_to_product(podles_j_formula(pb), pb)),
            _max_abs(rs.abs_T - spinor_lambda(U.k, pb).matrix @ qD)]
    return max(errs)


def _podles_j_grading(ctx):
    if not ctx.params.equatorial:
        return 0.0, "no grading for c < inf"
    rs = _podles_real(ctx)
    pb = rs.basis
    G = build_grading(pb, ctx.params).matrix
    Pp = pb.sector_projector(paired_sector_max(pb))
    anti = _max_abs((rs.J.before_linear(G).matrix + rs.J.after_linear(G).matrix) @ Pp)
    return anti, "measured sign: J~ gamma = -gamma J~"


def _podles_t_commutant(ctx):
    if not ctx.params.equatorial:
        return 0.0, "c < inf: skipped"
    rs = _podles_real(ctx)
    pb = rs.basis
    mats = [podles_pi(n, pb, ctx.params).matrix for n in ("A", "B", "B*")]
    mask = pb.levels <= pb.top - 1 + 1e-9
    return commutant_norm(mats, mats, rs.T, mask)


def _restriction(ctx):
    if not ctx.params.equatorial:
        return 0.0, "c < inf: skipped"
    out = ctx.cached("restriction", lambda: restriction_check(ctx.lmn, ctx.params))
    return max(out["T_error"], out["tomita_base_error"]), {
        "tolerance": 1e-10, "detail": f"T_psi~ {out['tomita_base_error']:.1e}"}


def _restriction_gap(ctx):
    if not ctx.params.equatorial:
        return 1.0, "c < inf: skipped"
    out = ctx.cached("restriction", lambda: restriction_check(ctx.lmn, ctx.params))
    return out["J_gap"], {"tolerance": 0.1, "detail": "J restricted differs from J~ (operator norm)"}


REAL = [
    Spec("real.t_half", "J_1/2 = sigma_1/2(k) T_1/2 is antiunitary with J_1/2^2 = -1", _real_half),
    Spec("real.t_formula", "T = R(T_psi (x) T_1/2) closed form on |lmn up/down>", _real_t_formula),
    Spec("real.j", "J from the polar decomposition of T: closed form, J^2 = -1, JD = DJ", _real_j),
    Spec("real.equivariance", "J pi(h) J^-1 = pi(k S(h)* k^-1), T pi(h) = pi(S(h)*) T", _real_equivariance),
    Spec("real.abs", "|R*| = q^-D and |T| = pi(k) rho(k^-1) q^-D", _real_abs),
    Spec("real.commutant", "[pi(x), T pi(y) T^-1] = [pi(x), J_0 pi(y) J_0^-1] = 0", _real_commutant),
    Spec("real.podles_t", "T~, J~ and |T~| = pi~(k) q^-D~ closed forms", _podles_t),
    Spec("real.podles_j_grading", "J~ gamma + gamma J~ = 0", _podles_j_grading),
    Spec("real.podles_t_commutant", "[pi~(x), T~ pi~(y) T~^-1] = 0", _podles_t_commutant),
    Spec("real.restriction", "T restricted to M_0 (x) V_1/2 equals T~", _restriction),
    Spec("real.restriction_gap", "J restricted to M_0 (x) V_1/2 differs from J~", _restriction_gap, "gt"),
]


# decay -----------------------------------------------------------------------

DECAY_MIN_LEVEL = HalfInt(20)


def decay_level(level: HalfInt) -> HalfInt:
    """Decay fits need sectors clear of the truncation edge; small levels are raised to 10."""
    return max(level, DECAY_MIN_LEVEL)


def fit_range(top: float) -> tuple:
    """Sectors used for the geometric fit: [2, top - 2], away from the truncation edge."""
    return 2.0, top - 2.0


def decay_basis(ctx):
    return ctx.cached("decay_basis", lambda: podles_spinor_basis(decay_level(ctx.L), ctx.q))


def decay_tables(ctx, pairs=None) -> dict:
    pb = decay_basis(ctx)
    rs = ctx.cached("decay_real", lambda: podles_real_structure(pb))
    D = dirac(pb).matrix
    names = ("A", "B", "B*")
    mats = {n: podles_pi(n, pb, ctx.params).matrix for n in names}
    mats["1"] = np.eye(pb.dim)
    pairs = pairs or [(x, y) for x in names for y in names]
    rng = fit_range(paired_sector_max(pb))
    out = {}
    for x, y in pairs:
        for kind, Dk in (("plain", None), ("dirac", D)):
            out[(x, y, kind)] = commutant_decay(mats[x], mats[y], rs.J, pb, D=Dk, fit_range=rng)
    return out


def _decay_check(ctx):
    if not ctx.params.equatorial:
        return True, {"value": None, "tolerance": None, "detail": "c < inf: J~ is only defined at c = inf"}
    tables = ctx.cached("decay", lambda: decay_tables(ctx))
    top = paired_sector_max(decay_basis(ctx))
    lo, hi = fit_range(top)
    worst_ratio = 0.0
    positive = True
    for res in tables.values():
        worst_ratio = max(worst_ratio, res["ratio"])
        positive &= all(v > 0 for j, v in res["norms"].items() if float(j) <= top + 1e-9)
    ok = positive and worst_ratio < 1
    return ok, {"value": worst_ratio, "tolerance": 1.0,
                "detail": (f"level {decay_level(ctx.L)}, max fitted ratio over x, y in {{A, B, B*}}, "
                          f"sectors [{lo}, {hi}]; all positive: {positive}")}


DECAY = [
    Spec("decay.ratio", "[pi~(x), J~ pi~(y) J~^-1] and [[D~, pi~(x)], J~ pi~(y) J~^-1] decay geometrically",
         _decay_check, "bool"),
]


# orchestration -----------------------------------------------------------------

def _suite_specs(name: str, ctx: Context) -> tuple:
    notes = {}
    if name == "algebra":
        return ALGEBRA, notes
    if name == "heisenberg":
        return HEISENBERG, notes
    if name == "podles":
        return PODLES, notes
    if name == "spectral":
        return SPECTRAL, notes
    if name == "grading":
        if not ctx.params.equatorial:
            notes["grading"] = "obstructed (expected)"
            return [GRADING_OBSTRUCTION], notes
        return [GRADING_OBSTRUCTION] + GRADING, notes
    if name == "real":
        return REAL, notes
    if name == "decay":
        if not ctx.params.equatorial:
            notes["decay"] = "skipped: J~ requires c = inf"
        return DECAY, notes
    raise ConfigError(f"unknown suite {name!r}")


def run_suite(config: RunConfig) -> CheckReport:
    ctx = Context(config)
    names = SUITES if config.suite == "all" else (config.suite,)
    checks, notes = [], {}
    for name in names:
        specs, extra = _suite_specs(name, ctx)
        notes.update(extra)
        checks.extend(_run_one(spec, ctx, name) for spec in specs)
    checks.sort(key=lambda c: c.name)
    return CheckReport(config.echo(), checks, notes)


def iter_suites() -> Iterator[str]:
    yield from SUITES


# exports -----------------------------------------------------------------------

def export_spectrum(operator: str, config: RunConfig) -> list:
    """Rows (eigenvalue, multiplicity, l-sector) for D or Dtilde at the configured level."""
    if operator == "D":
        top = float(config.level) - 0.5
        if top < 0:
            raise ConfigError("level too small: no complete spinor sector")
        if config.level <= MAX_LMN_LEVEL:
            rows = spectrum_table(dirac(su2_spinor_basis(config.level, config.q)), top)
        else:
            rows = su2_sector_spectrum(top, config.q)
    elif operator in ("Dtilde", "D~"):
        pb = podles_spinor_basis(config.level, config.q)
        rows = spectrum_table(dirac(pb), paired_sector_max(pb))
    else:
        raise ConfigError(f"unknown operator {operator!r}; choose D or Dtilde")
    return [{"eigenvalue": v, "multiplicity": m, "sector": str(s)} for v, m, s in rows]


def export_decay(x: str, y: str, config: RunConfig) -> dict:
    """Block norms of [pi~(x), J~ pi~(y) J~^-1] per sector, with the fitted ratio."""
    if not config.params.equatorial:
        raise ConfigError("decay tables need c = inf")
    for name in (x, y):
        if name not in ("A", "B", "B*", "1"):
            raise ConfigError(f"unknown element {name!r}; choose from A, B, B*, 1")
    ctx = Context(config)
    res = decay_tables(ctx, [(x, y)])
    top = paired_sector_max(decay_basis(ctx))
    plain, dirac_ = res[(x, y, "plain")], res[(x, y, "dirac")]
    rows = [{"l": str(j), "block_norm": _rounded(plain["norms"][j]), "dirac_block_norm": _rounded(dirac_["norms"][j])}
            for j in plain["norms"] if float(j) <= top + 1e-9]
    meta = {"x": x, "y": y, "level": str(decay_level(config.level)), "fit_range": list(plain["fit_range"]),
            "fitted_ratio": _rounded(plain["ratio"]), "dirac_fitted_ratio": _rounded(dirac_["ratio"])}
    return {"rows": rows, "meta": meta}


def render_rows(rows: list, fmt: str, meta: dict | None = None) -> str:
    if fmt == "json":
        return json.dumps({"rows": rows, **({"meta": meta} if meta else {})}, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if meta:
        for k, v in meta.items():
            buf.write(f"# {k}={v}\n")
    return buf.getvalue()
