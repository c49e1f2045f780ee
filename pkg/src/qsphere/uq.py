"""The Hopf *-algebra U_q(su(2)) in PBW normal form.

Elements are finite sums of monomials ``f^i k^n e^j`` (i, j >= 0, n in Z) stored as
``{(i, n, j): coefficient}``. Relations used for rewriting::

    ek = q ke,   kf = q fk,   fe - ef = (k^2 - k^-2) / (q - q^-1)
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .scalars import HalfInt, NumericScalars, half_range, make_scalars, sqrt_qint

Monomial = tuple  # (i, n, j)


class UqAlgebra:
    """Structure constants of U_q(su(2)) over a coefficient field."""

    def __init__(self, scalars):
        self.scalars = scalars
        s = scalars
        self._inv_qdiff = s.one / (s.q - s.one / s.q)

    @classmethod
    def numeric(cls, q: float) -> UqAlgebra:
        return cls(NumericScalars(q))

    @classmethod
    def exact(cls, q) -> UqAlgebra:
        return cls(make_scalars(q, exact=True))

    # generators -----------------------------------------------------------
    def element(self, terms=None) -> UqElement:
        return UqElement(self, terms or {})

    def monomial(self, i: int = 0, n: int = 0, j: int = 0, coeff=None) -> UqElement:
        c = self.scalars.one if coeff is None else self.scalars(coeff)
        return UqElement(self, {(i, n, j): c})

    @property
    def one(self) -> UqElement:
        return self.monomial()

    @property
    def e(self) -> UqElement:
        return self.monomial(j=1)

    @property
    def f(self) -> UqElement:
        return self.monomial(i=1)

    @property
    def k(self) -> UqElement:
        return self.monomial(n=1)

    @property
    def kinv(self) -> UqElement:
        return self.monomial(n=-1)

    def k_pow(self, n: int) -> UqElement:
        return self.monomial(n=n)

    # monomial arithmetic --------------------------------------------------
    def _times_f(self, mono, coeff, out):
        s = self.scalars
        i, n, j = mono
        _accumulate(out, (i + 1, n, j), coeff * s.qpow(n), s)
        if j:
            w = coeff * self._inv_qdiff
            for t in range(j):
                _accumulate(out, (i, n + 2, j - 1), -w * s.qpow(2 * t), s)
                _accumulate(out, (i, n - 2, j - 1), w * s.qpow(-2 * t), s)

    def mono_product(self, left: Monomial, right: Monomial) -> dict:
        """Normal form of (f^i k^n e^j)(f^a k^b e^c) as a term dictionary."""
        return dict(_mono_product_cached(self, left, right))

    def _mono_product(self, left, right):
        s = self.scalars
        a, b, c = right
        current = {left: s.one}
        for _ in range(a):
            nxt: dict = {}
            for mono, coeff in current.items():
                self._times_f(mono, coeff, nxt)
            current = nxt
        out: dict = {}
        for (i, n, j), coeff in current.items():
            _accumulate(out, (i, n + b, j + c), coeff * s.qpow(j * b), s)
        return out

    def multiply_terms(self, x: dict, y: dict) -> dict:
        s = self.scalars
        out: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for m, c in self.mono_product(m1, m2).items():
                    _accumulate(out, m, c1 * c2 * c, s)
        return out


@lru_cache(maxsize=200000)
def _mono_product_cached(alg: UqAlgebra, left, right):
    return tuple(alg._mono_product(left, right).items())


def _accumulate(out: dict, key, value, scalars):
    total = out.get(key, scalars.zero) + value
    if scalars.is_zero(total):
        out.pop(key, None)
    else:
        out[key] = total


class UqElement:
    """An element of U_q(su(2)) in canonical PBW form."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: UqAlgebra, terms: dict):
        self.alg = alg
        s = alg.scalars
        self.terms = {m: c for m, c in terms.items() if not s.is_zero(c)}

    def _coerce(self, other) -> UqElement:
        if isinstance(other, UqElement):
            return other
        return self.alg.monomial(coeff=other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(out, m, c, self.alg.scalars)
        return UqElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return UqElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, UqElement):
            return multiply(self, other)
        c = self.alg.scalars(other) if not _is_field_element(other) else other
        return UqElement(self.alg, {m: v * c for m, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        out = self.alg.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UqElement):
            other = self._coerce(other)
        diff = self - other
        return not diff.terms

    def __hash__(self):
        return id(self)

    def is_close(self, other, tol: float = 1e-12) -> bool:
        diff = self - other
        s = self.alg.scalars
        return all(abs(s.to_complex(c)) <= tol for c in diff.terms.values())

    def star(self) -> UqElement:
        return star(self)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, n, j), c in sorted(self.terms.items()):
            word = "".join(p for p in (_pw("f", i), _pw("k", n), _pw("e", j)) if p) or "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def _pw(symbol: str, n: int) -> str:
    if n == 0:
        return ""
    return symbol if n == 1 else f"{symbol}^{n}"


def _is_field_element(value) -> bool:
    return not isinstance(value, (int, float, complex))


class UqTensor:
    """A finite sum of simple tensors in U_q ⊗ U_q, stored as ``{(m1, m2): coefficient}``."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: UqAlgebra, terms: dict):
        self.alg = alg
        s = alg.scalars
        self.terms = {m: c for m, c in terms.items() if not s.is_zero(c)}

    def __mul__(self, other: UqTensor) -> UqTensor:
        s = self.alg.scalars
        out: dict = {}
        for (a1, a2), c1 in self.terms.items():
            for (b1, b2), c2 in other.terms.items():
                left = self.alg.mono_product(a1, b1)
                right = self.alg.mono_product(a2, b2)
                for m1, d1 in left.items():
                    for m2, d2 in right.items():
                        _accumulate(out, (m1, m2), c1 * c2 * d1 * d2, s)
        return UqTensor(self.alg, out)

    def __add__(self, other: UqTensor) -> UqTensor:
        out = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(out, m, c, self.alg.scalars)
        return UqTensor(self.alg, out)

    def legs(self):
        """Yield (coefficient, first leg, second leg) as UqElements."""
        one = self.alg.scalars.one
        for (m1, m2), c in self.terms.items():
            yield c, UqElement(self.alg, {m1: one}), UqElement(self.alg, {m2: one})

    def __eq__(self, other):
        if not isinstance(other, UqTensor):
            return NotImplemented
        s = self.alg.scalars
        keys = set(self.terms) | set(other.terms)
        return all(s.is_zero(self.terms.get(k, s.zero) - other.terms.get(k, s.zero)) for k in keys)

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"UqTensor({self.terms})"


# Hopf structure ------------------------------------------------------------

def multiply(x: UqElement, y: UqElement) -> UqElement:
    return UqElement(x.alg, x.alg.multiply_terms(x.terms, y.terms))


def _tensor_of(alg: UqAlgebra, pairs) -> UqTensor:
    one = alg.scalars.one
    return UqTensor(alg, {p: c if c is not None else one for p, c in pairs})


def _tensor_power(t: UqTensor, n: int, unit: UqTensor) -> UqTensor:
    out = unit
    for _ in range(n):
        out = out * t
    return out


def coproduct(x: UqElement) -> UqTensor:
    """Δk = k⊗k, Δe = e⊗k + k^-1⊗e, Δf = f⊗k + k^-1⊗f, extended multiplicatively."""
    alg = x.alg
    unit = _tensor_of(alg, [(((0, 0, 0), (0, 0, 0)), None)])
    d_e = _tensor_of(alg, [(((0, 0, 1), (0, 1, 0)), None), (((0, -1, 0), (0, 0, 1)), None)])
    d_f = _tensor_of(alg, [(((1, 0, 0), (0, 1, 0)), None), (((0, -1, 0), (1, 0, 0)), None)])
    out = UqTensor(alg, {})
    for (i, n, j), c in x.terms.items():
        d_k = _tensor_of(alg, [(((0, n, 0), (0, n, 0)), None)])
        t = _tensor_power(d_f, i, unit) * d_k * _tensor_power(d_e, j, unit)
        out = out + UqTensor(alg, {key: v * c for key, v in t.terms.items()})
    return out


def counit(x: UqElement):
    s = x.alg.scalars
    total = s.zero
    for (i, _n, j), c in x.terms.items():
        if i == 0 and j == 0:
            total = total + c
    return total


def antipode(x: UqElement) -> UqElement:
    """S(k) = k^-1, S(e) = -q^-1 e, S(f) = -q f, extended as an antihomomorphism."""
    alg = x.alg
    s = alg.scalars
    out = alg.element()
    for (i, n, j), c in x.terms.items():
        coeff = c * _signed_qpow(s, i - j, i + j)
        word = alg.monomial(0, 0, j) * alg.monomial(0, -n, 0) * alg.monomial(i, 0, 0)
        out = out + word * coeff
    return out


def _signed_qpow(s, exponent: int, sign_count: int):
    value = s.qpow(exponent)
    return -value if sign_count % 2 else value


def antipode_inverse(x: UqElement) -> UqElement:
    """S^-1(k) = k^-1, S^-1(e) = -q e, S^-1(f) = -q^-1 f, extended as an antihomomorphism."""
    alg = x.alg
    s = alg.scalars
    out = alg.element()
    for (i, n, j), c in x.terms.items():
        coeff = c * _signed_qpow(s, j - i, i + j)
        word = alg.monomial(0, 0, j) * alg.monomial(0, -n, 0) * alg.monomial(i, 0, 0)
        out = out + word * coeff
    return out


def star(x: UqElement) -> UqElement:
    """(f^i k^n e^j)* = f^j k^n e^i with conjugated coefficient (k* = k, f* = e)."""
    s = x.alg.scalars
    return UqElement(x.alg, {(j, n, i): s.conj(c) for (i, n, j), c in x.terms.items()})


# finite-dimensional representations -----------------------------------------

@lru_cache(maxsize=512)
def spin_generators(l2: int, q: float):
    """Matrices of σ_l(e), σ_l(f), σ_l(k) for l = l2/2 in the basis |l,-l>, ..., |l,l>."""
    l = HalfInt(l2)
    ms = list(half_range(l))
    dim = len(ms)
    E = np.zeros((dim, dim))
    F = np.zeros((dim, dim))
    K = np.zeros((dim, dim))
    for idx, m in enumerate(ms):
        K[idx, idx] = q ** float(m)
        if idx + 1 < dim:
            F[idx + 1, idx] = sqrt_qint(l - m, q) * sqrt_qint(l + m + 1, q)
        if idx > 0:
            E[idx - 1, idx] = sqrt_qint(l - m + 1, q) * sqrt_qint(l + m, q)
    for mat in (E, F, K):
        mat.setflags(write=False)
    return E, F, K


def represent(h: UqElement, E, F, K) -> np.ndarray:
    """Image of h under the algebra map sending e, f, k to the matrices E, F, K (K invertible)."""
    s = h.alg.scalars
    dim = E.shape[0]
    kdiag = np.diag(K)
    is_diag = np.allclose(K, np.diag(kdiag))
    out = np.zeros((dim, dim), dtype=complex)
    fpow: dict = {0: np.eye(dim)}
    epow: dict = {0: np.eye(dim)}
    for (i, n, j), c in h.terms.items():
        for cache, base, p in ((fpow, F, i), (epow, E, j)):
            if p not in cache:
                cache[p] = np.linalg.matrix_power(base, p)
        if is_diag:
            kn = np.diag(kdiag.astype(complex) ** n)
        else:
            kn = np.linalg.matrix_power(K if n >= 0 else np.linalg.inv(K), abs(n))
        out = out + s.to_complex(c) * (fpow[i] @ kn @ epow[j])
    return out


def sigma(h: UqElement, l) -> np.ndarray:
    """σ_l(h) in the basis |l,-l>, ..., |l,l>."""
    l = HalfInt.of(l)
    q = float(h.alg.scalars.to_complex(h.alg.scalars.q).real)
    E, F, K = spin_generators(l.twice, q)
    return represent(h, E, F, K)
