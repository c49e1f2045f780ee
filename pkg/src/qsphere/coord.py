"""The coordinate Hopf *-algebra O(SU_q(2)).

A normal-form monomial is a triple ``(p, j, k)`` standing for ``a^p b^j b*^k`` when
``p >= 0`` and ``a*^{-p} b^j b*^k`` when ``p < 0``.  Elements are dictionaries from
monomials to coefficients.  Multiplication uses

    ba = q ab,  b*a = q ab*,  bb* = b*b,  a*a + q^2 b*b = 1,  aa* + bb* = 1

through the closed forms a^r a*^r = Π_{s<r} (1 - q^{-2s} ζ) and
a*^r a^r = Π_{s=1..r} (1 - q^{2s} ζ), with ζ = bb*.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .scalars import MpScalars, NumericScalars, make_scalars
from .uq import UqAlgebra, UqElement, _accumulate

A_ = (1, 0, 0)
ASTAR_ = (-1, 0, 0)
B_ = (0, 1, 0)
BSTAR_ = (0, 0, 1)
ONE_ = (0, 0, 0)

# generator tables: letter -> (target letter, which scalar)
_LEFT_E = {A_: (B_, "one"), BSTAR_: (ASTAR_, "-1/q")}
_LEFT_F = {B_: (A_, "one"), ASTAR_: (BSTAR_, "-q")}
_RIGHT_E = {BSTAR_: (A_, "-1/q"), ASTAR_: (B_, "one")}
_RIGHT_F = {A_: (BSTAR_, "-q"), B_: (ASTAR_, "one")}
# k-weights as exponents of q^{1/2}
_LEFT_K = {A_: 1, ASTAR_: -1, B_: -1, BSTAR_: 1}
_RIGHT_K = {A_: 1, ASTAR_: -1, B_: 1, BSTAR_: -1}


def monomial_degree(mono) -> int:
    p, j, k = mono
    return abs(p) + j + k


def monomial_weights(mono):
    """(2m, 2n): twice the λ(k)- and ρ-type weights, λ(k) x = q^m x and x ◁ k^-1 = q^{-n} x."""
    p, j, k = mono
    return p - j + k, p + j - k


def normal_monomials(max_degree: int):
    """All normal-form monomials of degree <= max_degree."""
    out = []
    for p in range(-max_degree, max_degree + 1):
        for j in range(max_degree - abs(p) + 1):
            for k in range(max_degree - abs(p) - j + 1):
                out.append((p, j, k))
    return out


class CoordAlgebra:
    """O(SU_q(2)) over a coefficient field, together with its U_q(su(2)) actions."""

    def __init__(self, scalars):
        self.scalars = scalars
        self.uq = UqAlgebra(scalars)
        self._haar_cache: list = []

    @classmethod
    def numeric(cls, q: float) -> CoordAlgebra:
        return cls(NumericScalars(q))

    @classmethod
    def multiprecision(cls, q: float, dps: int = 60) -> CoordAlgebra:
        return cls(MpScalars(q, dps))

    @classmethod
    def exact(cls, q) -> CoordAlgebra:
        return cls(make_scalars(q, exact=True))

    @property
    def q(self):
        return self.scalars.q

    # elements -------------------------------------------------------------
    def element(self, terms=None) -> CoordElement:
        return CoordElement(self, terms or {})

    def monomial(self, mono, coeff=None) -> CoordElement:
        c = self.scalars.one if coeff is None else self.scalars(coeff)
        return CoordElement(self, {tuple(mono): c})

    @property
    def one(self):
        return self.monomial(ONE_)

    @property
    def a(self):
        return self.monomial(A_)

    @property
    def astar(self):
        return self.monomial(ASTAR_)

    @property
    def b(self):
        return self.monomial(B_)

    @property
    def bstar(self):
        return self.monomial(BSTAR_)

    def generators(self) -> dict:
        return {"a": self.a, "b": self.b, "a*": self.astar, "b*": self.bstar}

    # multiplication -------------------------------------------------------
    def _zeta_poly(self, r: int, sign: int):
        """Coefficients of Π (1 - q^{2 sign s} ζ) for s in 0..r-1 (sign=-1) or 1..r (sign=+1)."""
        s = self.scalars
        poly = [s.one]
        exps = range(r) if sign < 0 else range(1, r + 1)
        for e in exps:
            factor = s.qpow(2 * e * (1 if sign > 0 else -1))
            new = poly + [s.zero]
            for t in range(len(poly)):
                new[t + 1] = new[t + 1] - factor * poly[t]
            poly = new
        return poly

    def _a_part(self, p: int, p2: int):
        """A(p) A(p2) as a list of (p'', {t: coeff}) with ζ^t to the right."""
        s = self.scalars
        if p >= 0 and p2 >= 0 or p <= 0 and p2 <= 0:
            return p + p2, [s.one]
        if p > 0:  # a^p a*^r
            r = -p2
            if p >= r:
                return p - r, self._zeta_poly(r, -1)
            poly = self._zeta_poly(p, -1)
            shift = r - p
            return -shift, [c * s.qpow(-2 * shift * t) for t, c in enumerate(poly)]
        r = -p  # a*^r a^p2
        if r >= p2:
            return -(r - p2), self._zeta_poly(p2, +1)
        poly = self._zeta_poly(r, +1)
        shift = p2 - r
        return shift, [c * s.qpow(2 * shift * t) for t, c in enumerate(poly)]

    def mono_product(self, left, right) -> tuple:
        return _coord_mono_product(self, left, right)

    def _mono_product(self, left, right):
        s = self.scalars
        p, j, k = left
        p2, j2, k2 = right
        factor = s.qpow((j + k) * p2)
        pp, poly = self._a_part(p, p2)
        out: dict = {}
        for t, c in enumerate(poly):
            if not s.is_zero(c):
                _accumulate(out, (pp, j + j2 + t, k + k2 + t), factor * c, s)
        return tuple(out.items())

    def multiply_terms(self, x: dict, y: dict) -> dict:
        s = self.scalars
        out: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for m, c in self.mono_product(m1, m2):
                    _accumulate(out, m, c1 * c2 * c, s)
        return out

    def word(self, letters) -> CoordElement:
        """Normal form of a product of generator letters given as strings 'a', 'a*', 'b', 'b*'."""
        table = {"a": A_, "a*": ASTAR_, "b": B_, "b*": BSTAR_}
        out = self.one
        for letter in letters:
            out = out * self.monomial(table[letter])
        return out

    # scalars used by the action tables ------------------------------------
    def _named(self, name: str):
        s = self.scalars
        return {"one": s.one, "-q": -s.q, "-1/q": -s.one / s.q}[name]

    # actions ----------------------------------------------------------------
    def _letters(self, mono):
        p, j, k = mono
        letter = A_ if p >= 0 else ASTAR_
        return [letter] * abs(p) + [B_] * j + [BSTAR_] * k

    def _product_of_letters(self, letters) -> dict:
        s = self.scalars
        current = {ONE_: s.one}
        for letter in letters:
            current = self.multiply_terms(current, {letter: s.one})
        return current

    def generator_action(self, side: str, gen: str, mono) -> tuple:
        return _coord_gen_action(self, side, gen, mono)

    def _generator_action(self, side: str, gen: str, mono):
        s = self.scalars
        kweights = _LEFT_K if side == "left" else _RIGHT_K
        letters = self._letters(mono)
        if gen in ("k", "kinv"):
            sign = 1 if gen == "k" else -1
            total = sum(kweights[x] for x in letters)
            return ((tuple(mono), s.sqrt_q_pow(sign * total)),)
        table = {("left", "e"): _LEFT_E, ("left", "f"): _LEFT_F,
                 ("right", "e"): _RIGHT_E, ("right", "f"): _RIGHT_F}[(side, gen)]
        out: dict = {}
        # twisted Leibniz rule for Δh = h ⊗ k + k^-1 ⊗ h
        for pos, letter in enumerate(letters):
            if letter not in table:
                continue
            target, name = table[letter]
            before = sum(kweights[x] for x in letters[:pos])
            after = sum(kweights[x] for x in letters[pos + 1:])
            coeff = self._named(name) * s.sqrt_q_pow(after - before)
            prod = self._product_of_letters(letters[:pos] + [target] + letters[pos + 1:])
            for m, c in prod.items():
                _accumulate(out, m, coeff * c, s)
        return tuple(out.items())

    def _apply_gen(self, side: str, gen: str, terms: dict) -> dict:
        s = self.scalars
        out: dict = {}
        for mono, c in terms.items():
            for m, v in self.generator_action(side, gen, mono):
                _accumulate(out, m, c * v, s)
        return out

    def _apply_uq(self, side: str, h: UqElement, terms: dict) -> dict:
        s = self.scalars
        out: dict = {}
        for (i, n, j), coeff in h.terms.items():
            current = dict(terms)
            # left: f^i ▷ (k^n ▷ (e^j ▷ x));  right: ((x ◁ f^i) ◁ k^n) ◁ e^j
            steps = ["e"] * j + (["k"] * n if n > 0 else ["kinv"] * (-n)) + ["f"] * i
            if side == "right":
                steps = steps[::-1]
            for gen in steps:
                current = self._apply_gen(side, gen, current)
                if not current:
                    break
            for m, c in current.items():
                _accumulate(out, m, coeff * c, s)
        return out

    # Haar state -------------------------------------------------------------
    def haar_table(self, n_max: int) -> list:
        """ψ((bb*)^t) for t = 0..n_max, solved from left invariance ψ(e ▷ a b^t b*^{t+1}) = 0."""
        s = self.scalars
        table = self._haar_cache
        if not table:
            table.append(s.one)
        while len(table) <= n_max:
            t = len(table) - 1
            image = dict(self._apply_gen("left", "e", {(1, t, t + 1): s.one}))
            known = s.zero
            lead = s.zero
            for (p, j, k), c in image.items():
                if p != 0 or j != k:
                    continue
                if j == t + 1:
                    lead = lead + c
                elif j <= t:
                    known = known + c * table[j]
                else:
                    raise RuntimeError("invariance constraint reaches beyond the next Haar value")
            if s.is_zero(lead):
                raise RuntimeError(f"degenerate invariance constraint at t={t}")
            table.append(-known / lead)
        return table[: n_max + 1]


@lru_cache(maxsize=500000)
def _coord_mono_product(alg: CoordAlgebra, left, right):
    return alg._mono_product(left, right)


@lru_cache(maxsize=500000)
def _coord_gen_action(alg: CoordAlgebra, side: str, gen: str, mono):
    return alg._generator_action(side, gen, mono)


class CoordElement:
    """An element of O(SU_q(2)) in normal form."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: CoordAlgebra, terms: dict):
        self.alg = alg
        s = alg.scalars
        self.terms = {m: c for m, c in terms.items() if not s.is_zero(c)}

    def _coerce(self, other) -> CoordElement:
        if isinstance(other, CoordElement):
            return other
        return self.alg.monomial(ONE_, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(out, m, c, self.alg.scalars)
        return CoordElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return CoordElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, CoordElement):
            return multiply(self, other)
        c = other if not isinstance(other, (int, float, complex)) else self.alg.scalars(other)
        return CoordElement(self.alg, {m: v * c for m, v in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, CoordElement):
            return multiply(other, self)
        return self * other

    def __truediv__(self, other):
        return self * (self.alg.scalars.one / self.alg.scalars(other))

    def __pow__(self, n: int):
        out = self.alg.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CoordElement):
            other = self._coerce(other)
        return not (self - other).terms

    def __hash__(self):
        return id(self)

    def is_close(self, other, tol: float = 1e-10) -> bool:
        diff = self - self._coerce(other)
        s = self.alg.scalars
        return all(abs(s.to_complex(c)) <= tol for c in diff.terms.values())

    @property
    def degree(self) -> int:
        return max((monomial_degree(m) for m in self.terms), default=0)

    def star(self) -> CoordElement:
        return star(self)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, j, k), c in sorted(self.terms.items()):
            word = []
            if p:
                word.append(("a" if p > 0 else "a*") + (f"^{abs(p)}" if abs(p) > 1 else ""))
            if j:
                word.append("b" + (f"^{j}" if j > 1 else ""))
            if k:
                word.append("b*" + (f"^{k}" if k > 1 else ""))
            parts.append(f"({c})*{' '.join(word) or '1'}")
        return " + ".join(parts)


# module-level operations ------------------------------------------------------

def multiply(x: CoordElement, y: CoordElement) -> CoordElement:
    return CoordElement(x.alg, x.alg.multiply_terms(x.terms, y.terms))


def normalize(x: CoordElement) -> CoordElement:
    """Re-canonicalize an element (products are always returned in normal form)."""
    return CoordElement(x.alg, dict(x.terms))


def star(x: CoordElement) -> CoordElement:
    """(A(p) b^j b*^k)* = q^{-(j+k)p} A(-p) b^k b*^j."""
    s = x.alg.scalars
    out: dict = {}
    for (p, j, k), c in x.terms.items():
        _accumulate(out, (-p, k, j), s.conj(c) * s.qpow(-(j + k) * p), s)
    return CoordElement(x.alg, out)


def coord_counit(x: CoordElement):
    s = x.alg.scalars
    total = s.zero
    for (_p, j, k), c in x.terms.items():
        if j == 0 and k == 0:
            total = total + c
    return total


def act_left(h: UqElement, x: CoordElement) -> CoordElement:
    """h ▷ x = x_(1) <h, x_(2)>."""
    return CoordElement(x.alg, x.alg._apply_uq("left", h, x.terms))


def act_right(x: CoordElement, h: UqElement) -> CoordElement:
    """x ◁ h = <h, x_(1)> x_(2)."""
    return CoordElement(x.alg, x.alg._apply_uq("right", h, x.terms))


def pair(h: UqElement, x: CoordElement):
    """The dual pairing <h, x> = ε(h ▷ x)."""
    return coord_counit(act_left(h, x))


def haar(x: CoordElement):
    """The Haar state; nonzero only on powers of bb*."""
    s = x.alg.scalars
    diag = [(j, c) for (p, j, k), c in x.terms.items() if p == 0 and j == k]
    if not diag:
        return s.zero
    table = x.alg.haar_table(max(j for j, _ in diag))
    total = s.zero
    for j, c in diag:
        total = total + c * table[j]
    return total


def inner_product(x: CoordElement, y: CoordElement):
    """<x, y> = ψ(y* x), linear in x."""
    return haar(star(y) * x)


def pair_tensor(t, x: CoordElement, y: CoordElement):
    """<h_(1), x><h_(2), y> for a coproduct tensor t = Δh."""
    s = x.alg.scalars
    total = s.zero
    for c, h1, h2 in t.legs():
        total = total + c * pair(h1, x) * pair(h2, y)
    return total


# Podleś spheres -----------------------------------------------------------------

PODLES_GENERATORS = ("A", "B", "B*", "x_-1", "x_0", "x_1")


def _sqrt_c(alg: CoordAlgebra, c: float):
    s = alg.scalars
    if s.exact:
        from fractions import Fraction

        frac = Fraction(c).limit_denominator(10**9)
        num, den = math.isqrt(frac.numerator), math.isqrt(frac.denominator)
        if num * num != frac.numerator or den * den != frac.denominator:
            raise ValueError("exact mode needs c to be the square of a rational")
        return s(Fraction(num, den))
    return s(math.sqrt(c))


def embed_podles(name: str, c: float, alg: CoordAlgebra) -> CoordElement:
    """Image of a Podleś generator in O(SU_q(2)) for c in [0, inf]."""
    if name not in PODLES_GENERATORS:
        raise ValueError(f"unknown Podleś generator {name!r}")
    if math.isnan(c) or c < 0:
        raise ValueError(f"c must lie in [0, inf], got {c}")
    s = alg.scalars
    a, b, astar, bstar = alg.a, alg.b, alg.astar, alg.bstar
    q = s.q
    if math.isinf(c):
        B = astar * astar - b * b * q
        A = bstar * astar + a * b
    else:
        rc = _sqrt_c(alg, c)
        B = astar * astar * rc + astar * b - b * b * (q * rc)
        A = bstar * astar * rc + b * bstar + a * b * rc
    if name == "A":
        return A
    if name == "B":
        return B
    if name == "B*":
        return star(B)
    norm = _sqrt_one_plus_q2(s)
    if name == "x_-1":
        return B * (norm / q)
    if name == "x_1":
        return star(B) * (-norm)
    x0 = -(A * (s.one + q * q))
    return x0 if math.isinf(c) else x0 + alg.one


def _sqrt_one_plus_q2(s):
    if not s.exact:
        return math.sqrt(1.0 + s.q * s.q)
    value = s.one + s.q * s.q
    # (1 + q^2)^{1/2} = q^{1/2} [2]^{1/2}; only exact when it lies in the field
    import sympy

    root = sympy.sqrt(s.to_sympy(value))
    try:
        return s.field.from_sympy(sympy.nsimplify(root))
    except Exception as exc:  # pragma: no cover - depends on q
        raise ValueError("(1+q^2)^{1/2} is not in the coefficient field") from exc


class PodlesElement:
    """A noncommutative polynomial in A, B, B* together with its image in O(SU_q(2)).

    ``terms`` maps words (tuples over 'A', 'B', 'B*') to coefficients.
    """

    def __init__(self, terms: dict, c: float, alg: CoordAlgebra):
        self.terms = dict(terms)
        self.c = c
        self.alg = alg

    @classmethod
    def generator(cls, name: str, c: float, alg: CoordAlgebra) -> PodlesElement:
        return cls({(name,): alg.scalars.one}, c, alg)

    def __mul__(self, other: PodlesElement) -> PodlesElement:
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out[w1 + w2] = out.get(w1 + w2, self.alg.scalars.zero) + c1 * c2
        return PodlesElement(out, self.c, self.alg)

    def __add__(self, other: PodlesElement) -> PodlesElement:
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, self.alg.scalars.zero) + c
        return PodlesElement(out, self.c, self.alg)

    def star(self) -> PodlesElement:
        flip = {"A": "A", "B": "B*", "B*": "B"}
        s = self.alg.scalars
        return PodlesElement({tuple(flip[x] for x in reversed(w)): s.conj(c) for w, c in self.terms.items()},
                             self.c, self.alg)

    def image(self) -> CoordElement:
        gens = {name: embed_podles(name, self.c, self.alg) for name in ("A", "B", "B*")}
        out = self.alg.element()
        for w, c in self.terms.items():
            prod = self.alg.one
            for x in w:
                prod = prod * gens[x]
            out = out + prod * c
        return out
