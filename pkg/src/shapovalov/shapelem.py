"""Shapovalov elements theta_{beta,m} in PBW form.

Degree 1 is a sum over routes: descending chains beta = gamma_0 > gamma_1 >
... > gamma_k of positive roots staying above the chosen simple root alpha
in the root poset, each step nu_i = gamma_{i-1} - gamma_i itself a positive
root.  Each route contributes a PBW word f_{gamma_k} f_{nu_k} ... f_{nu_1}
weighted by raising-bracket constants and reciprocal eta denominators.
Degree m factors into m shifted copies of degree 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy.polys.domains import QQ

from . import exact
from .exact import RatFun, affine_poly, param_ring, specialize_affine
from .chevalley import StructureConstants, _sub
from .rootsys import (
    RootSystem,
    fundamental_coords,
    inner,
    interval_indices,
    multiplicity,
    support,
)
from .verma import (
    Context,
    UEAElement,
    lambda_context,
    multiply,
    param_context,
)


class DenominatorLocusError(AssertionError):
    """A route denominator violated the expected eta structure."""


@dataclass(frozen=True)
class AdmissibleChoice:
    """A simple root alpha entering beta, with the associated shift weight.

    phi and nu_a are stored in fundamental coordinates (exact rationals);
    phi = (beta,beta)/(l_{alpha,beta}(alpha,alpha)) * omega_alpha satisfies
    (phi, beta_vee) = 1.
    """

    beta: tuple
    alpha: int
    phi: tuple
    nu_a: tuple
    interval_size: int

    @property
    def finite_dimensional(self) -> bool:
        """Whether the auxiliary highest-weight module at phi is
        finite dimensional, i.e. the coefficient of omega_alpha in phi is a
        positive integer.  The shifted-product factorization of theta_{beta,m}
        is only valid for such choices (verified against the brute-force
        oracle); otherwise theta_m solves the extremality equations directly.
        """
        c = QQ(self.phi[self.alpha])
        return c.denominator == 1


def admissible_choices(rs: RootSystem, beta) -> tuple:
    beta = tuple(beta)
    if not rs.is_positive_root(beta):
        raise ValueError(f"{beta} is not a positive root")
    bb = inner(rs, beta, beta)
    beta_fund = tuple(QQ(c) for c in fundamental_coords(rs, beta))
    out = []
    for a in support(rs, beta):
        ell = multiplicity(rs, a, beta)
        aa = inner(rs, rs.simple_roots[a], rs.simple_roots[a])
        c = bb / (QQ(ell) * aa)
        phi = tuple(c if i == a else QQ(0) for i in range(rs.rank))
        nu_a = tuple(phi[i] - beta_fund[i] for i in range(rs.rank))
        size = len(interval_indices(rs, a, beta))
        out.append(AdmissibleChoice(beta, a, phi, nu_a, size))
        # (phi, beta_vee) = 2(phi,beta)/(beta,beta); (omega_a, beta) = ell*aa/2
        assert QQ(2) * c * QQ(ell) * aa / QQ(2) / bb == QQ(1)
    return tuple(out)


def default_choice(rs: RootSystem, beta) -> AdmissibleChoice:
    """Smallest-interval admissible choice, preferring choices whose
    auxiliary module is finite dimensional (those admit the shifted-product
    construction for every degree)."""
    choices = admissible_choices(rs, beta)
    return min(choices,
               key=lambda ch: (not ch.finite_dimensional,
                               ch.interval_size, ch.alpha))


@dataclass(frozen=True)
class ShapovalovElement:
    element: UEAElement
    beta: tuple
    m: int
    choice: AdmissibleChoice
    # multiset of affine polynomials whose product is divisible by every
    # coefficient denominator; lets verifiers clear denominators by exact
    # division instead of gcd computations
    den_factors: tuple = ()


def eta(rs: RootSystem, mu, ctx: Context = None) -> RatFun:
    """The affine function (mu, lambda + rho) - (mu,mu)/2 of lambda."""
    mu = tuple(mu)
    if ctx is None:
        ctx = lambda_context(rs)
    const = inner(rs, mu, rs.rho) - inner(rs, mu, mu) / QQ(2)
    lin = [QQ(mu[i]) * rs.gram[i][i] / QQ(2) for i in range(rs.rank)]
    return RatFun(ctx.ring, affine_poly(ctx.ring, const, lin))


def route_count(rs: RootSystem, alpha: int, beta) -> int:
    """Independent recursive count of routes from beta above alpha."""
    beta = tuple(beta)

    def ok(g):
        return rs.is_positive_root(g) and rs.index_of(
            tuple(rs.simple_roots[alpha])
        ) in rs.below[rs.index_of(g)]

    def count(g):
        total = 1  # terminate here: nu_{k+1} = g
        for nu in rs.positive_roots:
            rem = _sub(g, nu)
            if any(rem) and ok(rem):
                total += count(rem)
        return total

    if not ok(beta):
        raise ValueError("alpha not in support of beta")
    return count(beta)


def theta_one(rs: RootSystem, sc: StructureConstants, choice: AdmissibleChoice,
              ctx: Context = None) -> ShapovalovElement:
    if ctx is None:
        ctx = lambda_context(rs)
    beta = choice.beta
    alpha = choice.alpha
    aidx = rs.index_of(tuple(rs.simple_roots[alpha]))
    ell_beta = multiplicity(rs, alpha, beta)
    bb = inner(rs, beta, beta)
    one = ctx.one()
    ops_terms = {}
    used_mus = set()

    def c_diag(g):
        return bb / QQ(2) * QQ(multiplicity(rs, alpha, g)) / QQ(ell_beta)

    def add_word(word, coeff):
        from .verma import _ops
        for m_, k in _ops(sc).straighten_word(word).items():
            v = ops_terms.get(m_)
            t = coeff * QQ(k)
            v = t if v is None else v + t
            if v.is_zero:
                ops_terms.pop(m_, None)
            else:
                ops_terms[m_] = v

    def descend(gamma, steps_rev, coeff):
        # terminate: last factor f_gamma, diagonal constant
        word = (rs.index_of(gamma),) + steps_rev
        add_word(word, coeff * (one * c_diag(gamma)))
        gi = rs.index_of(gamma)
        for nu in rs.positive_roots:
            rem = _sub(gamma, nu)
            if not any(rem) or not rs.is_positive_root(rem):
                continue
            if aidx not in rs.below[rs.index_of(rem)]:
                continue
            mu = _sub(beta, rem)
            _check_denominator(rs, mu, beta)
            c_off = inner(rs, nu, nu) / QQ(2) * QQ(sc.n(nu, tuple(-x for x in gamma)))
            den = eta(rs, mu, ctx)
            if den.is_zero:
                raise DenominatorLocusError(f"eta identically zero for mu={mu}")
            used_mus.add(mu)
            descend(rem, (rs.index_of(nu),) + steps_rev,
                    coeff * (one * (-c_off)) / den)

    descend(tuple(beta), (), one)

    # normalize so the route term for the empty route (bare f_beta) has
    # coefficient 1; the PBW coefficient of f_beta differs from 1 by
    # straightening feedback from longer routes.
    lead = tuple(1 if i == rs.index_of(tuple(beta)) else 0
                 for i in range(len(rs.positive_roots)))
    norm = one * (QQ(2) / bb)
    elem = UEAElement(ctx, {m_: c * norm for m_, c in ops_terms.items()})
    lc = elem.terms.get(lead)
    assert lc is not None and not lc.is_zero, "f_beta PBW coefficient vanished"
    factors = tuple(eta(rs, mu, ctx).num for mu in sorted(used_mus))
    return ShapovalovElement(elem, tuple(beta), 1, choice, factors)


def _check_denominator(rs, mu, beta):
    if not any(mu) or any(c < 0 for c in mu):
        raise DenominatorLocusError(f"route partial sum {mu} outside Gamma_+")
    if _proportional(mu, beta):
        raise DenominatorLocusError(f"route denominator eta_{mu} proportional to beta")


def _proportional(mu, beta):
    # both integer vectors, mu != 0
    pairs = [(a, b) for a, b in zip(mu, beta)]
    ratio = None
    for a, b in pairs:
        if a == 0 and b == 0:
            continue
        if a == 0 or b == 0:
            return False
        if ratio is None:
            ratio = QQ(a, b)
        elif QQ(a, b) != ratio:
            return False
    return ratio is not None


def shift_tau(x: UEAElement, nu_fund) -> UEAElement:
    """Coefficient shift f(lambda) -> f(lambda + nu), nu in fundamental coords."""
    ctx = x.ctx
    if ctx.kind != "lambda":
        raise ValueError("shift_tau requires the generic lambda context")
    if not any(nu_fund):
        return x
    images = [
        ctx.ring.gens[i] + ctx.ring.ground_new(QQ.convert(nu_fund[i]))
        for i in range(ctx.rs.rank)
    ]
    out = {}
    for m_, c in x.terms.items():
        out[m_] = specialize_affine(c, ctx.ring, images)
    return UEAElement(ctx, out)


def theta_m(rs: RootSystem, sc: StructureConstants, choice: AdmissibleChoice,
            m: int) -> ShapovalovElement:
    if m < 1:
        raise ValueError("degree m must be a positive integer")
    ctx = lambda_context(rs)
    base = theta_one(rs, sc, choice, ctx)
    if m == 1:
        return base
    if not choice.finite_dimensional:
        # The shifted product of degree-1 factors stops being extremal when
        # the auxiliary module is infinite dimensional (checked against the
        # brute-force oracle for every rank <= 4 case).  Fall back to solving
        # the extremality equations on the hyperplane directly.
        return _theta_solved(rs, sc, choice, m)
    # The k-th factor from the left is tau_{nu_b}^k theta; once its
    # coefficients cross the k weight-(-beta) blocks to its right they are
    # evaluated at lambda + k*nu_a, so pre-shift by k*nu_a and multiply the
    # coefficients as plain scalars.  Work with denominator-cleared
    # polynomial coefficients and cancel the affine eta factors at the end;
    # this avoids expensive rational-function normalization.
    from .verma import _ops, expand_word

    ops = _ops(sc)
    ring = ctx.ring
    nu_a = tuple(QQ.convert(x) for x in choice.nu_a)
    den_factors = []
    prod_terms = None
    for k in range(m - 1, -1, -1):
        shift = tuple(QQ(k) * nu_a[i] for i in range(rs.rank))
        factor = shift_tau(base.element, shift) if k else base.element
        fs = []
        for p in base.den_factors:
            if k:
                images = [ring.gens[i] + ring.ground_new(shift[i])
                          for i in range(rs.rank)]
                p = exact.substitute_poly(p, ring, images)
            fs.append(p)
        den_factors.extend(fs)
        dk = ring.ground_new(QQ(1))
        for p in fs:
            dk = dk * p
        cleared = {}
        for mono, c in factor.terms.items():
            q, r = (c.num * dk).div(c.den)
            assert not r, "factor denominator outside the eta factor set"
            cleared[mono] = q
        if prod_terms is None:
            prod_terms = cleared
            continue
        new_terms = {}
        for m_l, p_l in prod_terms.items():
            w_l = expand_word(m_l)
            for m_r, p_r in cleared.items():
                coeff = p_l * p_r
                for mono, count in ops.straighten_word(
                        w_l + expand_word(m_r)).items():
                    t = coeff.mul_ground(QQ(count))
                    cur = new_terms.get(mono)
                    new_terms[mono] = t if cur is None else cur + t
        prod_terms = {mm: p for mm, p in new_terms.items() if p}

    # divide each coefficient by the cleared denominators; every factor is
    # affine (hence irreducible), so repeated exact division is a complete
    # cancellation and the result needs no further gcd
    terms = {}
    for mono, num in prod_terms.items():
        den = ring.ground_new(QQ(1))
        for f in den_factors:
            q, r = num.div(f)
            if not r:
                num = q
            else:
                den = den * f
        lc = den.LC
        if lc != QQ(1):
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        terms[mono] = RatFun(ring, num, den, _normalized=True)
    prod = UEAElement(ctx, terms)
    lead = tuple(
        m if i == rs.index_of(tuple(choice.beta)) else 0
        for i in range(len(rs.positive_roots))
    )
    lc = prod.terms.get(lead)
    if lc is None or lc.is_zero:
        raise AssertionError("product lost its f_beta^m PBW term")
    return ShapovalovElement(prod, tuple(choice.beta), m, choice,
                             tuple(den_factors))


def _theta_solved(rs: RootSystem, sc: StructureConstants,
                  choice: AdmissibleChoice, m: int) -> ShapovalovElement:
    """Degree-m element as the kernel of the raising action on H_{beta,m}.

    The weight-(lambda - m*beta) extremal vector is unique up to scale for
    generic points of the hyperplane, so solving the linear system over the
    field of rational functions in the hyperplane parameters recovers
    theta_{beta,m} without any product formula.  Coefficients are pulled back
    to the lambda-context through the free coordinates.
    """
    import sympy

    from .verma import act_e, weight_space_basis

    beta = tuple(choice.beta)
    hp = hyperplane(rs, beta, m)
    pctx = hp.context(rs)
    mu = tuple(m * c for c in beta)
    basis = weight_space_basis(rs, mu)
    nfree = len(hp.free_indices)
    tsyms = sympy.symbols("t:%d" % nfree) if nfree else ()
    unit_pts = [[QQ(1) if k == j else QQ(0) for k in range(nfree)]
                for j in range(nfree)]

    def to_sym(rf):
        # act_e coefficients are affine in the parameters
        c0 = rf.evaluate([QQ(0)] * nfree)
        expr = sympy.Rational(c0.numerator, c0.denominator)
        for j in range(nfree):
            cj = rf.evaluate(unit_pts[j]) - c0
            expr += sympy.Rational(cj.numerator, cj.denominator) * tsyms[j]
        return expr

    rows = {}
    for a in range(rs.rank):
        for j, mono in enumerate(basis):
            res = act_e(a, UEAElement.monomial(pctx, mono), sc)
            for tmono, coeff in res.terms.items():
                row = rows.setdefault((a, tmono), [sympy.S.Zero] * len(basis))
                row[j] += to_sym(coeff)
    mat = sympy.Matrix([rows[k] for k in sorted(rows)])
    kernel = mat.nullspace()
    if len(kernel) != 1:
        raise AssertionError(
            f"extremal space on H_{beta},{m} has dimension {len(kernel)}")
    vec = kernel[0]
    lead_mono = tuple(
        m if i == rs.index_of(beta) else 0
        for i in range(len(rs.positive_roots)))
    lead = vec[basis.index(lead_mono)]
    if lead == 0:
        raise AssertionError("extremal vector lost its f_beta^m term")

    ctx = lambda_context(rs)
    var_idx = list(hp.free_indices)

    def poly_back(p):
        out = ctx.ring.ground_new(QQ(0))
        for monom, coeff in sympy.Poly(p, *tsyms).terms():
            c = sympy.Rational(coeff)
            term = ctx.ring.ground_new(QQ(int(c.p), int(c.q)))
            for j, e in enumerate(monom):
                for _ in range(e):
                    term = term * ctx.ring.gens[var_idx[j]]
            out = out + term
        return out

    terms = {}
    for j, mono in enumerate(basis):
        entry = sympy.cancel(sympy.together(vec[j] / lead))
        if entry == 0:
            continue
        num, den = sympy.fraction(entry)
        terms[mono] = RatFun(ctx.ring, poly_back(num), poly_back(den))
    elem = UEAElement(ctx, terms)
    factors, seen = [], set()
    for c in terms.values():
        if c.den != ctx.ring.one and c.den not in seen:
            seen.add(c.den)
            factors.append(c.den)
    return ShapovalovElement(elem, beta, m, choice, tuple(factors))


@dataclass(frozen=True)
class Hyperplane:
    """Affine parameterization of H_{beta,m}: lambda's fundamental coordinates
    as affine polynomials in free parameters t1..t(r-1)."""

    beta: tuple
    m: int
    solved_index: int
    ring: object
    images: tuple  # rank polynomials in the t-ring
    free_indices: tuple

    def context(self, rs: RootSystem) -> Context:
        return param_context(rs, self.ring, self.images)

    def point(self, tvals):
        """Numeric lambda point from numeric parameter values."""
        return tuple(exact._eval_poly(p, [QQ.convert(v) for v in tvals])
                     for p in self.images)


def hyperplane(rs: RootSystem, beta, m: int) -> Hyperplane:
    beta = tuple(beta)
    if not rs.is_positive_root(beta):
        raise ValueError(f"{beta} is not a positive root")
    if m < 1:
        raise ValueError("degree m must be a positive integer")
    # pivot: the coordinate of the smallest-interval alpha (ties by index)
    solved = min(admissible_choices(rs, beta),
                 key=lambda ch: (ch.interval_size, ch.alpha)).alpha
    # constraint: sum_i l_i (omega_i, beta) + (rho, beta) = m (beta,beta)/2
    coefs = [QQ(beta[i]) * rs.gram[i][i] / QQ(2) for i in range(rs.rank)]
    rhs = QQ(m) * inner(rs, beta, beta) / QQ(2) - inner(rs, rs.rho, beta)
    free = tuple(i for i in range(rs.rank) if i != solved)
    R = param_ring(len(free))
    sol = R.ground_new(rhs / coefs[solved])
    for j, i in enumerate(free):
        sol = sol - R.gens[j].mul_ground(coefs[i] / coefs[solved])
    images = [
        R.gens[free.index(i)] if i != solved else sol for i in range(rs.rank)
    ]
    return Hyperplane(beta=beta, m=m, solved_index=solved, ring=R,
                      images=tuple(images), free_indices=free)
