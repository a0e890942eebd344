"""End-to-end acceptance gate.

Every check is exact (zero tolerance): symbolic identities over the rational
function field, exact rational linear algebra at sampled points, and frozen
combinatorial values that were derived by independent counters.
"""

import functools
import io

import pytest
from sympy.polys.domains import QQ

from conftest import ALGEBRAS, non_simple_roots, root_id, root_system, \
    structure_constants
from shapovalov.cli import main as cli_main
from shapovalov.oracle import (
    _denominator_ok,
    compare_up_to_scalar,
    oracle_compare,
    sample_hyperplane_points,
    verify_extremal_symbolic,
)
from shapovalov.shapelem import (
    admissible_choices,
    default_choice,
    hyperplane,
    route_count,
    theta_m,
    theta_one,
)
from shapovalov.verma import (
    UEAElement,
    contravariant_form,
    lambda_context,
    multiply,
    numeric_context,
    specialize_element,
    weight_space_basis,
)


@functools.lru_cache(maxsize=None)
def theta_case(name, beta, m):
    rs, sc = root_system(name), structure_constants(name)
    return theta_m(rs, sc, default_choice(rs, beta), m)


def sweep_cases():
    out = []
    for name in ALGEBRAS:
        rs = root_system(name)
        for beta in non_simple_roots(rs):
            for m in (1, 2, 3):
                out.append(pytest.param(
                    name, beta, m, id=f"{name}-{root_id(beta)}-m{m}"))
    return out


CASES = sweep_cases()


# -- 1: extremality of theta_{beta,m} on the whole hyperplane ----------------

@pytest.mark.parametrize("name,beta,m", CASES)
def test_extremality_identity_on_hyperplane(name, beta, m):
    rs, sc = root_system(name), structure_constants(name)
    rep = verify_extremal_symbolic(rs, sc, theta_case(name, beta, m))
    assert rep.passed, rep.to_json()


# -- 2: equivalence with both brute-force oracles at sampled points ----------

@pytest.mark.parametrize("name,beta,m", CASES)
def test_oracle_equivalence(name, beta, m):
    rs, sc = root_system(name), structure_constants(name)
    reports = oracle_compare(rs, sc, theta_case(name, beta, m), samples=3)
    accepted = [r for r in reports
                if r.mismatch != "non-generic sample, retried"]
    assert len(accepted) >= 3
    for r in accepted:
        assert r.kernel_dim_bruteforce == 1, r.to_json()
        assert r.kernel_dim_gram == 1, r.to_json()
        assert r.spans_match, r.to_json()
        assert r.scalar is not None and r.scalar != QQ(0), r.to_json()


# -- 3: simple roots degenerate to plain powers -------------------------------

@pytest.mark.parametrize("name", ALGEBRAS)
def test_simple_root_element_is_power_of_generator(name):
    rs, sc = root_system(name), structure_constants(name)
    nroots = len(rs.positive_roots)
    for alpha in rs.simple_roots:
        idx = rs.index_of(tuple(alpha))
        for m in (1, 2, 3, 4):
            th = theta_case(name, tuple(alpha), m)
            mono = tuple(m if i == idx else 0 for i in range(nroots))
            assert set(th.element.terms) == {mono}
            c = th.element.terms[mono]
            assert c.num == c.den  # coefficient exactly 1


# -- 4: plain-power factorization for multiplicity-one choices ---------------

@pytest.mark.parametrize("beta", [(1, 1, 0), (0, 1, 1), (1, 1, 1)],
                         ids=root_id)
def test_a3_cube_equals_power_of_theta_one(beta):
    rs, sc = root_system("A3"), structure_constants("A3")
    ch = default_choice(rs, beta)
    t1 = theta_one(rs, sc, ch)
    cube = multiply(multiply(t1.element, t1.element, sc), t1.element, sc)
    t3 = theta_m(rs, sc, ch, 3)
    assert set(cube.terms) == set(t3.element.terms)
    for mono, c in cube.terms.items():
        assert c == t3.element.terms[mono], mono


# -- 5: independence of the chosen simple root on the hyperplane -------------

@pytest.mark.parametrize("m", [1, 2])
def test_g2_highest_root_choice_independence(m):
    rs, sc = root_system("G2"), structure_constants("G2")
    beta = (2, 3)
    ch1, ch2 = admissible_choices(rs, beta)
    assert (ch1.alpha, ch2.alpha) == (0, 1)
    th1 = theta_m(rs, sc, ch1, m)
    th2 = theta_m(rs, sc, ch2, m)
    hp = hyperplane(rs, beta, m)
    pts = [pt for pt in sample_hyperplane_points(rs, th1, hp, 8)
           if _denominator_ok(th2, pt)]
    assert len(pts) >= 3
    for pt in pts[:3]:
        ctx = numeric_context(rs, pt)
        s1 = specialize_element(th1.element, ctx)
        s2 = specialize_element(th2.element, ctx)
        scalar, mismatch = compare_up_to_scalar(s1, s2)
        assert mismatch is None and scalar != QQ(0), (pt, mismatch)


# -- 6: the G2 diagram of the negative Borel ---------------------------------

def test_g2_hasse_diagram_rows():
    buf = io.StringIO()
    assert cli_main(["hasse", "G2"], out=buf) == 0
    out = buf.getvalue()
    assert "nodes (8)" in out and "edges (7)" in out
    assert "row 0: h[1]  h[2]" in out
    assert "row 1: f[0,1]  f[1,0]" in out
    assert "row 2: f[1,1]" in out
    assert "row 3: f[1,2]" in out
    assert "row 4: f[1,3]" in out
    assert "row 5: f[2,3]" in out


# -- 7: degeneracy locus of the contravariant form for A2 --------------------

def test_a2_gram_determinant_factors_into_hyperplanes():
    rs, sc = root_system("A2"), structure_constants("A2")
    ctx = lambda_context(rs)
    basis = weight_space_basis(rs, (1, 1))
    assert len(basis) == 2
    els = [UEAElement.monomial(ctx, m) for m in basis]
    g = [[contravariant_form(x, y, sc) for y in els] for x in els]
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    assert det.den.is_ground
    l1, l2 = ctx.ring.gens
    expected = l1 * l2 * (l1 + l2 + ctx.ring.ground_new(QQ(1)))
    quo, rem = det.num.div(expected)
    assert not rem and quo.is_ground and quo.LC != QQ(0)
    # zero set = exactly the three contributing hyperplanes
    on_h = [(QQ(0), QQ(9, 7)), (QQ(9, 7), QQ(0)), (QQ(3, 5), QQ(-8, 5))]
    for pt in on_h:
        assert det.evaluate(list(pt)) == QQ(0)
    assert det.evaluate([QQ(2, 3), QQ(4, 5)]) != QQ(0)


# -- 8: frozen route counts ---------------------------------------------------

def enumerate_routes(rs, alpha, beta):
    """Exhaustive listing of descending chains staying above alpha."""
    ai = rs.index_of(tuple(rs.simple_roots[alpha]))

    def above(g):
        return rs.is_positive_root(g) and ai in rs.below[rs.index_of(g)]

    chains = []

    def descend(chain):
        chains.append(tuple(chain))
        g = chain[-1]
        for nu in rs.positive_roots:
            rem = tuple(a - b for a, b in zip(g, nu))
            if any(rem) and above(rem):
                descend(chain + [rem])

    descend([tuple(beta)])
    assert len(set(chains)) == len(chains)
    return chains


def test_route_counts_match_frozen_values():
    rs = root_system("A2")
    assert len(enumerate_routes(rs, 0, (1, 1))) == 2
    assert route_count(rs, 0, (1, 1)) == 2
    rs3 = root_system("A3")
    assert len(enumerate_routes(rs3, 1, (1, 1, 1))) == 5
    assert route_count(rs3, 1, (1, 1, 1)) == 5
