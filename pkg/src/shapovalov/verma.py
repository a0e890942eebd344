"""PBW-ordered computation in U(g_-) and the generic Verma module.

A PBW monomial is an exponent tuple over the fixed positive-root order;
the monomial stands for the ascending product f_{r1}^{e1} f_{r2}^{e2} ...
An UEAElement maps monomials to coefficients, which are RatFun in the
highest-weight coordinates l1..lr (generic context), RatFun in hyperplane
parameters t1..tk, or plain rationals (numeric context).  Interpreted as a
Verma vector, the element is sum coeff(lambda) * monomial * v_lambda.

Raising operators come in two normalizations sharing one engine:
 * act_raise applies the Chevalley-basis e_gamma ([e_gamma, f_gamma] =
   coroot), used by the contravariant form, where it keeps the form
   symmetric;
 * act_e applies (alpha,alpha)/2 * e_alpha for simple alpha, so the Cartan
   term evaluates to (lambda - mu_right, alpha) as in the route summation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy.polys.domains import QQ

from . import exact
from .exact import RatFun, lambda_ring, specialize_affine
from .chevalley import StructureConstants, _add, _neg, _sub
from .rootsys import RootSystem, fundamental_coords, inner


# ---------------------------------------------------------------------------
# coefficient contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """Where coefficients live and what lambda means there.

    kind "lambda": ring l1..lr, lambda_i = l_i.
    kind "params": ring t1..tk, lambda_i given by affine polynomials.
    kind "numeric": no ring, lambda_i exact rationals.
    """

    kind: str
    rs: RootSystem
    ring: object = None
    lam: tuple = None  # per fundamental coordinate: poly or QQ
    label: str = ""

    def one(self):
        return QQ(1) if self.kind == "numeric" else RatFun(self.ring, self.ring.one)

    def const(self, c):
        c = QQ.convert(c)
        return c if self.kind == "numeric" else RatFun.const(self.ring, c)

    def lam_pairing(self, mu):
        """(lambda, mu) for mu in simple-root coordinates."""
        rs = self.rs
        if self.kind == "numeric":
            acc = QQ(0)
            for i, m in enumerate(mu):
                if m:
                    acc += self.lam[i] * QQ(m) * rs.gram[i][i] / QQ(2)
            return acc
        p = self.ring.zero
        for i, m in enumerate(mu):
            if m:
                p = p + self.lam[i].mul_ground(QQ(m) * rs.gram[i][i] / QQ(2))
        return RatFun(self.ring, p)


def lambda_context(rs: RootSystem) -> Context:
    R = lambda_ring(rs.rank)
    return Context(kind="lambda", rs=rs, ring=R, lam=tuple(R.gens), label="l")


def numeric_context(rs: RootSystem, point) -> Context:
    pt = tuple(QQ.convert(x) for x in point)
    if len(pt) != rs.rank:
        raise ValueError("lambda point has wrong length")
    return Context(kind="numeric", rs=rs, lam=pt, label="numeric")


def param_context(rs: RootSystem, ring, lam_polys) -> Context:
    return Context(kind="params", rs=rs, ring=ring, lam=tuple(lam_polys), label="t")


# ---------------------------------------------------------------------------
# PBW monomials
# ---------------------------------------------------------------------------


def monomial_weight(rs: RootSystem, mono):
    """The mu in Gamma_+ with weight(monomial) = -mu, simple-root coords."""
    acc = [0] * rs.rank
    for i, e in enumerate(mono):
        if e:
            r = rs.positive_roots[i]
            for j, c in enumerate(r):
                acc[j] += e * c
    return tuple(acc)


def expand_word(mono):
    word = []
    for i, e in enumerate(mono):
        word.extend([i] * e)
    return tuple(word)


def word_to_mono(nroots, word):
    exps = [0] * nroots
    for i in word:
        exps[i] += 1
    return tuple(exps)


def mono_sort_key(mono):
    return (sum(mono), mono)


def format_monomial(rs: RootSystem, mono) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e:
            root = ",".join(map(str, rs.positive_roots[i]))
            parts.append(f"f[{root}]" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) if parts else "1"


def weight_space_basis(rs: RootSystem, mu):
    """All PBW monomials of weight -mu, in the fixed monomial order."""
    mu = tuple(mu)
    if any(c < 0 for c in mu):
        raise ValueError("mu must lie in the positive root lattice")
    roots = rs.positive_roots
    n = len(roots)
    out = []

    def rec(i, rem, exps):
        if not any(rem):
            out.append(tuple(exps) + (0,) * (n - i))
            return
        if i == n:
            return
        r = roots[i]
        emax = min((rem[j] // r[j]) for j in range(len(rem)) if r[j])
        for e in range(emax + 1):
            nxt = tuple(rem[j] - e * r[j] for j in range(len(rem)))
            if all(c >= 0 for c in nxt):
                rec(i + 1, nxt, exps + [e])

    rec(0, mu, [])
    out.sort(key=mono_sort_key)
    return out


# ---------------------------------------------------------------------------
# straightening and raising engines, cached per structure-constant table
# ---------------------------------------------------------------------------


class _Ops:
    def __init__(self, sc: StructureConstants):
        self.sc = sc
        self.rs = sc.rs
        self.straighten_cache = {}
        self.raise_cache = {}

    def straighten_word(self, word):
        """PBW expansion of the left-to-right product of root indices.

        Returns dict monomial -> integer coefficient.
        """
        word = tuple(word)
        cached = self.straighten_cache.get(word)
        if cached is not None:
            return cached
        pos = -1
        for p in range(len(word) - 1):
            if word[p] > word[p + 1]:
                pos = p
                break
        if pos < 0:
            res = {word_to_mono(len(self.rs.positive_roots), word): 1}
        else:
            swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2:]
            res = dict(self.straighten_word(swapped))
            mu = self.rs.positive_roots[word[pos]]
            nu = self.rs.positive_roots[word[pos + 1]]
            br = self.sc.bracket_ff(mu, nu)
            if br[0] == "sum":
                _, s, c = br
                reduced = word[:pos] + (self.rs.root_index[s],) + word[pos + 2:]
                for m, k in self.straighten_word(reduced).items():
                    v = res.get(m, 0) + c * k
                    if v:
                        res[m] = v
                    else:
                        res.pop(m, None)
        self.straighten_cache[word] = res
        return res

    def raise_word(self, gidx, word):
        """Structural action of Chevalley e_gamma on a sorted word.

        Returns tuple of entries (mono, const, cart) with const in QQ and
        cart None or (w, delta): the term carries an extra Cartan factor
        (lambda - w, delta^vee).
        """
        key = (gidx, word)
        cached = self.raise_cache.get(key)
        if cached is not None:
            return cached
        rs, sc = self.rs, self.sc
        gamma = rs.positive_roots[gidx]
        acc = {}

        def add(mono, const, cart):
            if not const:
                return
            k = (mono, cart)
            v = acc.get(k, QQ(0)) + const
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)

        for p, widx in enumerate(word):
            delta = rs.positive_roots[widx]
            prefix, suffix = word[:p], word[p + 1:]
            if widx == gidx:
                w = monomial_weight(rs, word_to_mono(len(rs.positive_roots), suffix))
                mono = word_to_mono(len(rs.positive_roots), prefix + suffix)
                add(mono, QQ(1), (w, gamma))
                continue
            diff = _sub(delta, gamma)
            if rs.is_positive_root(diff):
                c = QQ(sc.n(gamma, _neg(delta)))
                new_word = prefix + (rs.root_index[diff],) + suffix
                for m, k in self.straighten_word(new_word).items():
                    add(m, c * QQ(k), None)
            elif rs.is_positive_root(_neg(diff)):
                c = QQ(sc.n(gamma, _neg(delta)))
                sub = self.raise_word(rs.root_index[_neg(diff)], suffix)
                for (m, const, cart) in sub:
                    joined = prefix + expand_word(m)
                    for m2, k in self.straighten_word(joined).items():
                        add(m2, c * const * QQ(k), cart)
        res = tuple((m, c, cart) for (m, cart), c in acc.items())
        self.raise_cache[key] = res
        return res


def _ops(sc: StructureConstants) -> _Ops:
    ops = getattr(sc, "_pbw_ops", None)
    if ops is None:
        ops = _Ops(sc)
        sc._pbw_ops = ops
    return ops


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


class UEAElement:
    """Weight-homogeneous element of U(g_-) with context coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms=None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if not _scalar_is_zero(c):
                    self.terms[m] = c

    @classmethod
    def monomial(cls, ctx, mono, coeff=None):
        return cls(ctx, {tuple(mono): ctx.one() if coeff is None else coeff})

    @classmethod
    def vacuum(cls, ctx):
        nroots = len(ctx.rs.positive_roots)
        return cls.monomial(ctx, (0,) * nroots)

    @property
    def is_zero(self):
        return not self.terms

    def weight_mu(self):
        """The mu with weight = -mu; requires homogeneity."""
        mus = {monomial_weight(self.ctx.rs, m) for m in self.terms}
        if len(mus) > 1:
            raise ValueError("element is not weight-homogeneous")
        return mus.pop() if mus else None

    def __add__(self, other):
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ValueError("context mismatch")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m)
            v = c if v is None else v + c
            if _scalar_is_zero(v):
                terms.pop(m, None)
            else:
                terms[m] = v
        return UEAElement(self.ctx, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if _scalar_is_zero_like(c):
            return UEAElement(self.ctx)
        return UEAElement(self.ctx, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, UEAElement) and self.terms == other.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: mono_sort_key(kv[0]))

    def render(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            cs = _format_scalar(c)
            parts.append(f"({cs})*{format_monomial(self.ctx.rs, m)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UEAElement[{self.ctx.label}]({self.render()})"


def _scalar_is_zero(c):
    if isinstance(c, RatFun):
        return c.is_zero
    return c == 0


def _scalar_is_zero_like(c):
    if isinstance(c, RatFun):
        return c.is_zero
    return QQ.convert(c) == QQ(0)


def _format_scalar(c):
    if isinstance(c, RatFun):
        return repr(c)
    return exact.format_rational(c)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def straighten(word, sc: StructureConstants, ctx: Context = None) -> UEAElement:
    """PBW-ordered expansion of a product of (positive root, power) factors.

    ``word`` is a sequence of (root coords, exponent) pairs in product order.
    """
    if ctx is None:
        ctx = lambda_context(sc.rs)
    ops = _ops(sc)
    flat = []
    for root, e in word:
        idx = sc.rs.index_of(tuple(root))
        flat.extend([idx] * e)
    res = ops.straighten_word(tuple(flat))
    one = ctx.one()
    return UEAElement(ctx, {m: one * QQ(k) for m, k in res.items()})


def act_raise(gamma, v: UEAElement, sc: StructureConstants) -> UEAElement:
    """Chevalley e_gamma acting on v * v_lambda, any positive root gamma."""
    ops = _ops(sc)
    rs = sc.rs
    gidx = rs.index_of(tuple(gamma))
    ctx = v.ctx
    out = {}
    for mono, coeff in v.terms.items():
        word = expand_word(mono)
        for (m, const, cart) in ops.raise_word(gidx, word):
            c = coeff * const
            if cart is not None:
                w, delta = cart
                dd = inner(rs, delta, delta)
                cartval = (ctx.lam_pairing(delta) - ctx.const(inner(rs, w, delta))) * (
                    QQ(2) / dd
                )
                c = c * cartval
            v0 = out.get(m)
            v0 = c if v0 is None else v0 + c
            if _scalar_is_zero(v0):
                out.pop(m, None)
            else:
                out[m] = v0
    return UEAElement(ctx, out)


def act_e(alpha: int, v: UEAElement, sc: StructureConstants) -> UEAElement:
    """Raising generator of simple root alpha, normalized so the Cartan term
    is (lambda - mu_right, alpha)."""
    rs = sc.rs
    al = rs.simple_roots[alpha]
    half = inner(rs, al, al) / QQ(2)
    return act_raise(al, v, sc).scale(v.ctx.const(half))


def multiply(x: UEAElement, y: UEAElement, sc: StructureConstants) -> UEAElement:
    """Product in the extended negative Borel, coefficients as functions of
    lambda written to the right: crossing a monomial of weight -w shifts a
    coefficient by lambda -> lambda - w."""
    ctx = x.ctx
    if ctx.kind != "lambda":
        raise ValueError("multiplication requires the generic lambda context")
    ops = _ops(sc)
    rs = sc.rs
    out = {}
    shifted = {}
    for N, d in y.terms.items():
        w = monomial_weight(rs, N)
        if w not in shifted:
            shifted[w] = _shift_images(ctx, w)
        images = shifted[w]
        for M, c in x.terms.items():
            c_sh = (
                c
                if images is None
                else RatFun(
                    ctx.ring,
                    exact.substitute_poly(c.num, ctx.ring, images),
                    exact.substitute_poly(c.den, ctx.ring, images),
                )
            )
            coeff = c_sh * d
            word = expand_word(M) + expand_word(N)
            for m, k in ops.straighten_word(word).items():
                v0 = out.get(m)
                t = coeff * QQ(k)
                v0 = t if v0 is None else v0 + t
                if _scalar_is_zero(v0):
                    out.pop(m, None)
                else:
                    out[m] = v0
    return UEAElement(ctx, out)


def _shift_images(ctx, w):
    if not any(w):
        return None
    fund = fundamental_coords(ctx.rs, w)
    return [
        ctx.ring.gens[i] - ctx.ring.ground_new(QQ(fund[i]))
        for i in range(ctx.rs.rank)
    ]


def specialize_element(v: UEAElement, target_ctx: Context, images=None) -> UEAElement:
    """Move an element to another coefficient context.

    For a numeric target, coefficients are evaluated at the lambda point
    inferred from target_ctx (images ignored).  For a params target,
    ``images`` gives the affine substitution l_i -> poly(t).
    """
    if target_ctx.kind == "numeric":
        pt = target_ctx.lam
        out = {}
        for m, c in v.terms.items():
            val = c.evaluate(pt) if isinstance(c, RatFun) else QQ.convert(c)
            if val != QQ(0):
                out[m] = val
        return UEAElement(target_ctx, out)
    out = {}
    for m, c in v.terms.items():
        cc = specialize_affine(c, target_ctx.ring, images)
        if not cc.is_zero:
            out[m] = cc
    return UEAElement(target_ctx, out)


def contravariant_form(x: UEAElement, y: UEAElement, sc: StructureConstants):
    """Canonical contravariant (Shapovalov) form of x v_lambda and y v_lambda."""
    ctx = x.ctx
    if x.is_zero or y.is_zero:
        return ctx.const(0) if not x.is_zero else y.ctx.const(0)
    mux, muy = x.weight_mu(), y.weight_mu()
    if mux != muy:
        return ctx.const(0)
    memo = {}
    acc = ctx.const(0)
    for N, d in y.terms.items():
        for M, c in x.terms.items():
            acc = acc + c * d * _form_mono(_ops(sc), ctx, M, N, memo)
    return acc


def _form_mono(ops, ctx, M, N, memo):
    if not any(M):
        return ctx.one() if not any(N) else ctx.const(0)
    key = (M, N)
    hit = memo.get(key)
    if hit is not None:
        return hit
    gidx = next(i for i, e in enumerate(M) if e)
    Mp = list(M)
    Mp[gidx] -= 1
    Mp = tuple(Mp)
    raised = act_raise(
        ops.rs.positive_roots[gidx],
        UEAElement.monomial(ctx, N),
        ops.sc,
    )
    acc = ctx.const(0)
    for K, c in raised.terms.items():
        acc = acc + c * _form_mono(ops, ctx, Mp, K, memo)
    memo[key] = acc
    return acc
