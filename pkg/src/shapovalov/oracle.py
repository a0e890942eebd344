"""Independent brute-force verification of Shapovalov elements.

Ground truth comes from two places that share no code with the route
construction: the kernel of the raising action on a weight space of a Verma
module at an exact rational point, and the kernel of the Gram matrix of the
contravariant form on the same weight space.  Candidate elements are checked
against both, symbolically on the whole hyperplane and numerically at sampled
points.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from sympy.polys.domains import QQ

from .chevalley import StructureConstants
from .exact import RatFun, format_ratfun, substitute_poly
from .rootsys import RootSystem, inner
from .shapelem import Hyperplane, ShapovalovElement, eta, hyperplane
from .verma import (
    UEAElement,
    act_e,
    act_raise,
    format_monomial,
    lambda_context,
    numeric_context,
    specialize_element,
    weight_space_basis,
)


class NonGenericConstructionError(RuntimeError):
    """A denominator of the candidate vanishes identically on the hyperplane."""


@dataclass(frozen=True)
class SingularSpace:
    lam_point: tuple
    mu: tuple
    basis: tuple  # UEAElements with numeric rational coefficients


def _ff_echelon(rows):
    """Fraction-free (Bareiss) forward elimination.

    Returns (echelon rows, pivot column indices).  Entries stay exact
    rationals; the division in the Bareiss step is exact by construction.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    prev = QQ(1)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != QQ(0)),
                   None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            for j in range(c + 1, ncols):
                rows[i][j] = (rows[r][c] * rows[i][j]
                              - rows[i][c] * rows[r][j]) / prev
            rows[i][c] = QQ(0)
        prev = rows[r][c]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def kernel_basis(rows, ncols):
    """Exact kernel of the matrix given as a list of rows over QQ."""
    if not rows:
        return [[QQ(1) if j == k else QQ(0) for j in range(ncols)]
                for k in range(ncols)]
    ech, pivots = _ff_echelon(rows)
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        v = [QQ(0)] * ncols
        v[f] = QQ(1)
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            s = sum((ech[i][j] * v[j] for j in range(c + 1, ncols)),
                    start=QQ(0))
            v[c] = -s / ech[i][c]
        out.append(v)
    return out


def bruteforce_singular(rs: RootSystem, sc: StructureConstants, lam_point,
                        mu) -> SingularSpace:
    """Extremal vectors of weight lambda - mu by exact linear algebra."""
    lam_point = tuple(QQ.convert(x) for x in lam_point)
    mu = tuple(mu)
    ctx = numeric_context(rs, lam_point)
    basis = weight_space_basis(rs, mu)
    rows = {}
    for a in range(rs.rank):
        for j, mono in enumerate(basis):
            img = act_e(a, UEAElement.monomial(ctx, mono), sc)
            for tm, c in img.terms.items():
                rows.setdefault((a, tm), [QQ(0)] * len(basis))[j] += c
    kern = kernel_basis([rows[k] for k in sorted(rows)], len(basis))
    vecs = tuple(
        UEAElement(ctx, {mono: v[j] for j, mono in enumerate(basis)
                         if v[j] != QQ(0)})
        for v in kern)
    return SingularSpace(lam_point, mu, vecs)


def gram_matrix(rs: RootSystem, sc: StructureConstants, lam_point, mu):
    """Gram matrix of the contravariant form on the weight space of mu.

    Built bottom-up over the weight lattice: a row for a monomial f_gamma*M'
    is the row of M' in the Gram matrix one weight below, pushed through the
    matrix of e_gamma.  This shares all the work between entries that the
    entry-by-entry recursion would redo.
    """
    lam_point = tuple(QQ.convert(x) for x in lam_point)
    mu = tuple(mu)
    ctx = numeric_context(rs, lam_point)
    levels = {}  # weight (simple-root coords) -> (index map, gram rows)
    zero = (0,) * rs.rank
    levels[zero] = ({(0,) * len(rs.positive_roots): 0}, [[QQ(1)]])
    ranges = [range(c + 1) for c in mu]
    weights = sorted(_cartesian(ranges), key=sum)
    for nu in weights:
        if nu == zero or nu in levels:
            continue
        basis = weight_space_basis(rs, nu)
        if not basis:
            continue
        index = {mono: j for j, mono in enumerate(basis)}
        raised = {}  # leading root index -> per-column sparse e_gamma images
        rows = []
        for mono in basis:
            g = next(i for i, e in enumerate(mono) if e)
            if g not in raised:
                gamma = rs.positive_roots[g]
                below_idx = levels[tuple(a - b for a, b in zip(nu, gamma))][0]
                cols = []
                for src in basis:
                    img = act_raise(gamma, UEAElement.monomial(ctx, src), sc)
                    cols.append([(below_idx[k], c)
                                 for k, c in img.terms.items()])
                raised[g] = cols
            rest = list(mono)
            rest[g] -= 1
            gamma = rs.positive_roots[g]
            prev_idx, prev_rows = levels[
                tuple(a - b for a, b in zip(nu, gamma))]
            prev = prev_rows[prev_idx[tuple(rest)]]
            row = []
            for col in raised[g]:
                row.append(sum((c * prev[k] for k, c in col), start=QQ(0)))
            rows.append(row)
        levels[nu] = (index, rows)
    basis = weight_space_basis(rs, mu)
    return basis, levels[mu][1]


def _cartesian(ranges):
    out = [()]
    for r in ranges:
        out = [t + (v,) for t in out for v in r]
    return out


def gram_kernel(rs: RootSystem, sc: StructureConstants, lam_point, mu):
    """Gram matrix of the contravariant form on the weight space, and its
    exact kernel basis (as UEAElements)."""
    lam_point = tuple(QQ.convert(x) for x in lam_point)
    ctx = numeric_context(rs, tuple(lam_point))
    basis, gram = gram_matrix(rs, sc, lam_point, tuple(mu))
    kern = kernel_basis(gram, len(basis))
    vecs = tuple(
        UEAElement(ctx, {mono: v[j] for j, mono in enumerate(basis)
                         if v[j] != QQ(0)})
        for v in kern)
    return gram, vecs


_CERT_PRIMES = (2147483629, 2147483587, 2147483579, 2147483563)


def _rank_mod_p(rows, p):
    """Rank of a rational matrix reduced mod p, or None if a denominator
    is divisible by p.  Always a lower bound for the rank over QQ."""
    import numpy as np

    n = len(rows)
    a = np.zeros((n, len(rows[0])), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            num, den = int(x.numerator), int(x.denominator)
            if den % p == 0:
                return None
            a[i, j] = num % p * pow(den, -1, p) % p
    r = 0
    for c in range(a.shape[1]):
        if r == n:
            break
        piv = next((i for i in range(r, n) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        block = a[r + 1:]
        block -= np.outer(block[:, c], a[r])
        block %= p
        r += 1
    return r


def gram_kernel_certified(gram, candidate):
    """Confirm that the kernel of the Gram matrix is exactly the span of the
    candidate vector (a list of rationals), without an exact elimination.

    The candidate is checked to lie in the kernel by an exact
    matrix-vector product, so the kernel has dimension >= 1.  A modular
    rank is a lower bound for the exact rank, so rank dim-1 mod some prime
    proves dimension <= 1.  Returns True on a complete certificate; falls
    back to None (caller should eliminate exactly) if every prime degrades.
    """
    n = len(gram)
    for row in gram:
        if sum((a * b for a, b in zip(row, candidate)), start=QQ(0)) != QQ(0):
            return False
    for p in _CERT_PRIMES:
        r = _rank_mod_p(gram, p)
        if r == n - 1:
            return True
        if r is not None and r < n - 1:
            # the modular matrix itself has a bigger kernel; inconclusive,
            # try another prime in case this one divides a minor
            continue
    return None


def compare_up_to_scalar(x: UEAElement, y: UEAElement):
    """The rational c with x = c*y, or (None, mismatch description)."""
    if x.is_zero or y.is_zero:
        raise ValueError("compare_up_to_scalar requires nonzero elements")
    if x.weight_mu() != y.weight_mu():
        raise ValueError("weights differ")
    scalar = None
    for mono in sorted(set(x.terms) | set(y.terms)):
        cx = x.terms.get(mono, QQ(0))
        cy = y.terms.get(mono, QQ(0))
        if cy == QQ(0):
            if cx == QQ(0):
                continue
            return None, f"monomial {format_monomial(x.ctx.rs, mono)} " \
                         "present only in the first element"
        c = cx / cy
        if scalar is None:
            scalar = c
        elif c != scalar:
            return None, f"mismatch at {format_monomial(x.ctx.rs, mono)}: " \
                         f"{cx} vs {scalar}*{cy}"
    if scalar is None or scalar == QQ(0):
        return None, "zero scalar"
    return scalar, None


@dataclass
class ExtremalityReport:
    beta: tuple
    m: int
    alpha: int
    passed: bool
    failures: list = field(default_factory=list)  # (simple idx, residual str)
    elapsed: float = 0.0

    def to_json(self):
        return {
            "beta": list(self.beta), "m": self.m, "alpha": self.alpha,
            "status": "PASS" if self.passed else "FAIL",
            "failures": [{"simple_root": a, "residual": r}
                         for a, r in self.failures],
            "elapsed_sec": round(self.elapsed, 3),
        }


def restrict_to_hyperplane(theta: ShapovalovElement, hp: Hyperplane,
                           rs: RootSystem) -> UEAElement:
    """Substitute the hyperplane parameterization into the coefficients,
    refusing (loudly) if some denominator vanishes identically there."""
    pctx = hp.context(rs)
    for mono, c in theta.element.terms.items():
        if isinstance(c, RatFun):
            den = substitute_poly(c.den, pctx.ring, list(hp.images))
            if not den:
                raise NonGenericConstructionError(
                    "non-generic construction: denominator "
                    f"{format_ratfun(RatFun(c.ring, c.den))} of the "
                    f"{format_monomial(rs, mono)} coefficient vanishes "
                    f"identically on H_{theta.beta},{theta.m}")
    return specialize_element(theta.element, pctx, list(hp.images))


def _cleared_on_hyperplane(theta: ShapovalovElement, hp: Hyperplane,
                           rs: RootSystem):
    """Denominator-cleared restriction of theta to the hyperplane.

    Scales theta by the product of its denominator factors (a nonzero
    function on H_{beta,m}), leaving polynomial coefficients; extremality is
    unaffected by the scaling.  Requires the factor bookkeeping produced by
    the constructors."""
    pctx = hp.context(rs)
    ring = theta.element.ctx.ring
    images = list(hp.images)
    for f in theta.den_factors:
        if not substitute_poly(f, pctx.ring, images):
            raise NonGenericConstructionError(
                "non-generic construction: denominator factor "
                f"{format_ratfun(RatFun(ring, f))} vanishes identically "
                f"on H_{theta.beta},{theta.m}")
    big = ring.ground_new(QQ(1))
    for f in theta.den_factors:
        big = big * f
    out = {}
    for mono, c in theta.element.terms.items():
        scale, rem = big.div(c.den)
        if rem:
            raise AssertionError("denominator outside the recorded factors")
        p = substitute_poly(c.num * scale, pctx.ring, images)
        if p:
            out[mono] = RatFun(pctx.ring, p, None, _normalized=True)
    return UEAElement(pctx, out)


def verify_extremal_symbolic(rs: RootSystem, sc: StructureConstants,
                             theta: ShapovalovElement) -> ExtremalityReport:
    """PASS iff act_e(alpha', theta v_lambda) is identically zero on the
    hyperplane H_{beta,m}, for every simple alpha'."""
    t0 = time.time()
    hp = hyperplane(rs, theta.beta, theta.m)
    if theta.den_factors:
        el = _cleared_on_hyperplane(theta, hp, rs)
    else:
        el = restrict_to_hyperplane(theta, hp, rs)
    rep = ExtremalityReport(theta.beta, theta.m, theta.choice.alpha, True)
    for a in range(rs.rank):
        res = act_e(a, el, sc)
        if not res.is_zero:
            rep.passed = False
            rep.failures.append((a, res.render()))
    rep.elapsed = time.time() - t0
    return rep


# -- rejection sampling on the hyperplane ------------------------------------

SAMPLE_POOL = tuple(
    QQ(p, q)
    for q in range(1, 8)
    for p in range(-9, 10)
    if QQ(p, q).denominator == q
)
DEFAULT_SEED = 20240601


def _denominator_ok(theta: ShapovalovElement, point) -> bool:
    pt = list(point)
    for c in theta.element.terms.values():
        if isinstance(c, RatFun):
            from .exact import _eval_poly
            if _eval_poly(c.den, pt) == QQ(0):
                return False
    return True


def sample_hyperplane_points(rs: RootSystem, theta: ShapovalovElement,
                             hp: Hyperplane, count: int = 3,
                             seed: int = DEFAULT_SEED):
    """Random generic rational points of H_{beta,m}.

    Rejects points where a denominator of theta vanishes, and points lying
    on any other degeneracy hyperplane H_{gamma,l} with l*gamma inside the
    cone below m*beta (there the form at weight lambda - m*beta picks up
    radical from other extremal vectors, so the point is not generic).
    Deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    lam_ctx = lambda_context(rs)
    mb = tuple(theta.m * c for c in theta.beta)
    etas = []
    for gamma in rs.positive_roots:
        l = 1
        while all(l * g <= b for g, b in zip(gamma, mb)):
            if (tuple(gamma), l) != (tuple(theta.beta), theta.m):
                etas.append(eta(rs, tuple(l * c for c in gamma), lam_ctx))
            l += 1
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 4000:
            raise RuntimeError("rejection sampling failed to find "
                               f"{count} generic points")
        tvals = [rng.choice(SAMPLE_POOL) for _ in hp.free_indices]
        point = hp.point(tvals)
        if not _denominator_ok(theta, point):
            continue
        if any(e.evaluate(list(point)) == QQ(0) for e in etas):
            continue
        if point in out:
            continue
        out.append(point)
    return out


@dataclass
class OracleCaseReport:
    point: tuple
    kernel_dim_bruteforce: int
    kernel_dim_gram: int
    spans_match: bool
    scalar: object
    mismatch: str
    elapsed: float

    @property
    def passed(self):
        return (self.kernel_dim_bruteforce == 1
                and self.kernel_dim_gram == 1
                and self.spans_match and self.scalar is not None)

    def to_json(self):
        return {
            "point": [str(x) for x in self.point],
            "kernel_dim_bruteforce": self.kernel_dim_bruteforce,
            "kernel_dim_gram": self.kernel_dim_gram,
            "spans_match": self.spans_match,
            "scalar": None if self.scalar is None else str(self.scalar),
            "mismatch": self.mismatch,
            "status": "PASS" if self.passed else "FAIL",
            "elapsed_sec": round(self.elapsed, 3),
        }


def oracle_compare(rs: RootSystem, sc: StructureConstants,
                   theta: ShapovalovElement, samples: int = 3,
                   seed: int = DEFAULT_SEED):
    """Compare theta against both brute-force oracles at sampled points.

    If a sampled point turns out non-generic (kernel dimension > 1), it is
    reported and replaced by a fresh sample rather than failing the run.
    """
    hp = hyperplane(rs, theta.beta, theta.m)
    mu = tuple(theta.m * c for c in theta.beta)
    reports = []
    offset = 0
    accepted = 0
    while accepted < samples:
        pts = sample_hyperplane_points(rs, theta, hp, samples + offset, seed)
        point = pts[-1]
        offset += 1
        if offset > samples + 20:
            raise RuntimeError("could not find enough generic sample points")
        t0 = time.time()
        sing = bruteforce_singular(rs, sc, point, mu)
        dim_b = len(sing.basis)
        if dim_b != 1:
            reports.append(OracleCaseReport(point, dim_b, -1, False, None,
                                            "non-generic sample, retried",
                                            time.time() - t0))
            continue
        basis, gram = gram_matrix(rs, sc, point, mu)
        cert = None
        if len(basis) > 64:
            cand = [sing.basis[0].terms.get(mono, QQ(0)) for mono in basis]
            cert = gram_kernel_certified(gram, cand)
        if cert is True:
            dim_g, spans_match = 1, True
        else:
            ctx = numeric_context(rs, tuple(point))
            kern = kernel_basis(gram, len(basis))
            gkern = tuple(
                UEAElement(ctx, {mono: v[j] for j, mono in enumerate(basis)
                                 if v[j] != QQ(0)})
                for v in kern)
            dim_g = len(gkern)
            spans_match = (dim_g == 1 and
                           compare_up_to_scalar(sing.basis[0],
                                                gkern[0])[0] is not None)
        nctx = numeric_context(rs, tuple(point))
        spec = specialize_element(theta.element, nctx)
        scalar, mismatch = compare_up_to_scalar(spec, sing.basis[0])
        reports.append(OracleCaseReport(point, dim_b, dim_g, spans_match,
                                        scalar, mismatch or "",
                                        time.time() - t0))
        accepted += 1
    return reports
