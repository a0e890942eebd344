"""Exact rational arithmetic: multivariate polynomials and normalized rational functions.

Coefficients of everything in this package live in the field of rational
functions over Q in the highest-weight coordinates (``l1..lr``) or in
hyperplane parameters (``t1..tr-1``).  Polynomials are sympy sparse
polynomials over QQ with graded-lexicographic term order; a RatFun is a
reduced fraction of two of them with a monic (leading coefficient +1 in
grlex) denominator, so equality is structural.
"""

from __future__ import annotations

from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as _ring


class ExactError(Exception):
    pass


class IdenticallySingularError(ExactError):
    """An affine substitution made a denominator vanish identically."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"identically singular on subspace: denominator {factor}")


@lru_cache(maxsize=None)
def poly_ring(names: tuple):
    """Polynomial ring over QQ in the given variables, grlex order.

    ``names`` is a tuple of variable names; the empty tuple gives the
    constants-only ring.
    """
    return _ring(list(names), QQ, order=grlex)[0]


def lambda_ring(rank: int):
    return poly_ring(tuple(f"l{i+1}" for i in range(rank)))


def param_ring(nparams: int):
    return poly_ring(tuple(f"t{i+1}" for i in range(nparams)))


def _as_poly(R, x):
    if isinstance(x, RatFun):
        raise TypeError("expected polynomial data, got RatFun")
    try:
        return R.ring_new(x)
    except Exception:
        return R(x)


class RatFun:
    """Normalized rational function num/den over QQ.

    Invariants: gcd(num, den) = 1, den != 0, den monic in grlex.
    """

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring_, num, den=None, _normalized=False):
        self.ring = ring_
        num = _as_poly(ring_, num)
        den = ring_.one if den is None else _as_poly(ring_, den)
        if not den:
            raise ZeroDivisionError("zero denominator in RatFun")
        if not _normalized:
            if not num:
                den = ring_.one
            else:
                g = num.gcd(den)
                if g != ring_.one:
                    num = num.quo(g)
                    den = den.quo(g)
                lc = den.LC
                if lc != QQ(1):
                    num = num.quo_ground(lc)
                    den = den.quo_ground(lc)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, ring_, c):
        return cls(ring_, ring_.ground_new(QQ.convert(c)))

    @classmethod
    def var(cls, ring_, i):
        return cls(ring_, ring_.gens[i])

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self):
        return not self.num

    @property
    def is_constant(self):
        return self.num.is_ground and self.den.is_ground

    def const_value(self):
        if not self.is_constant:
            raise ExactError(f"not a constant: {self}")
        if self.is_zero:
            return QQ(0)
        return self.num.LC / self.den.LC

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFun):
            if other.ring is not self.ring:
                raise ValueError("RatFun ring mismatch")
            return other
        return RatFun(self.ring, self.ring.ground_new(QQ.convert(other)))

    def __add__(self, other):
        o = self._coerce(other)
        return RatFun(self.ring, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(self.ring, -self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFun(self.ring, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RatFun(self.ring, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        try:
            o = self._coerce(other)
        except Exception:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((frozenset(self.num.terms()), frozenset(self.den.terms())))

    # -- evaluation and substitution ----------------------------------

    def evaluate(self, point):
        """Evaluate at a tuple of QQ values (must avoid denominator zeros)."""
        den = _eval_poly(self.den, point)
        if den == QQ(0):
            raise ZeroDivisionError("denominator vanishes at the sample point")
        return _eval_poly(self.num, point) / den

    def __repr__(self):
        if self.den == self.ring.one:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def _eval_poly(p, point):
    R = p.ring
    if R.ngens == 0:
        terms = list(p.terms())
        return terms[0][1] if terms else QQ(0)
    vals = [QQ.convert(v) for v in point]
    if len(vals) != R.ngens:
        raise ValueError("evaluation point has wrong length")
    acc = QQ(0)
    for monom, coeff in p.terms():
        t = coeff
        for v, e in zip(vals, monom):
            if e:
                t = t * v**e
        acc += t
    return acc


def substitute_poly(p, target_ring, images):
    """Image of polynomial p under variable substitution x_i -> images[i].

    ``images`` are polynomials of ``target_ring``; works for any polynomial
    map, used here for affine ones.
    """
    if len(images) != p.ring.ngens:
        raise ValueError("substitution images have wrong length")
    acc = target_ring.zero
    pows = [{0: target_ring.one} for _ in images]
    for monom, coeff in p.terms():
        t = target_ring.ground_new(coeff)
        for i, e in enumerate(monom):
            if e:
                cache = pows[i]
                if e not in cache:
                    cache[e] = images[i] ** e
                t = t * cache[e]
        acc += t
    return acc


def specialize_affine(f: RatFun, target_ring, images) -> RatFun:
    """Compose f with an affine substitution of its variables.

    Raises IdenticallySingularError if the denominator vanishes identically
    under the substitution.
    """
    num = substitute_poly(f.num, target_ring, images)
    den = substitute_poly(f.den, target_ring, images)
    if not den:
        raise IdenticallySingularError(f.den)
    return RatFun(target_ring, num, den)


def affine_poly(ring_, const, lin):
    """The affine polynomial const + sum(lin[i] * x_i)."""
    p = ring_.ground_new(QQ.convert(const))
    for i, c in enumerate(lin):
        c = QQ.convert(c)
        if c:
            p += ring_.gens[i].mul_ground(c)
    return p


# -- rendering ---------------------------------------------------------


def format_rational(q) -> str:
    q = QQ.convert(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_poly(p) -> str:
    if not p:
        return "0"
    R = p.ring
    names = [str(s) for s in R.symbols]
    terms = sorted(p.terms(), key=lambda t: grlex(t[0]), reverse=True)
    parts = []
    for monom, coeff in terms:
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        c = coeff
        neg = c < QQ(0)
        if neg:
            c = -c
        if body and c == QQ(1):
            term = body
        elif body:
            term = f"{format_rational(c)}*{body}"
        else:
            term = format_rational(c)
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts)


def format_ratfun(f: RatFun) -> str:
    if f.den == f.ring.one:
        return format_poly(f.num)
    return f"({format_poly(f.num)})/({format_poly(f.den)})"
