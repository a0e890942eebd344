import pytest
from sympy.polys.domains import QQ

from conftest import root_system, structure_constants
from shapovalov.oracle import (
    NonGenericConstructionError,
    _ff_echelon,
    _rank_mod_p,
    bruteforce_singular,
    compare_up_to_scalar,
    gram_kernel,
    gram_kernel_certified,
    gram_matrix,
    kernel_basis,
    restrict_to_hyperplane,
    sample_hyperplane_points,
    verify_extremal_symbolic,
)
from shapovalov.shapelem import default_choice, hyperplane, theta_m
from shapovalov.verma import (
    UEAElement,
    contravariant_form,
    numeric_context,
    weight_space_basis,
)


def test_echelon_and_kernel_on_known_matrix():
    rows = [[QQ(1), QQ(2), QQ(3)],
            [QQ(2), QQ(4), QQ(6)],
            [QQ(0), QQ(1), QQ(1)]]
    ech, pivots = _ff_echelon(rows)
    assert pivots == [0, 1]
    kern = kernel_basis(rows, 3)
    assert len(kern) == 1
    v = kern[0]
    for row in rows:
        assert sum((a * b for a, b in zip(row, v)), start=QQ(0)) == QQ(0)


def test_kernel_of_empty_matrix_is_everything():
    assert len(kernel_basis([], 4)) == 4


def test_rank_mod_p_matches_exact_rank():
    rows = [[QQ(1, 2), QQ(2), QQ(3, 5)],
            [QQ(1), QQ(4), QQ(7, 5)],
            [QQ(0), QQ(0), QQ(0)]]
    _, pivots = _ff_echelon(rows)
    assert _rank_mod_p(rows, 2147483629) == len(pivots) == 2


def test_gram_matrix_matches_direct_form_evaluation():
    # the ladder construction against the entrywise recursive definition
    rs, sc = root_system("B2"), structure_constants("B2")
    pt, mu = (QQ(1, 3), QQ(-7, 5)), (2, 2)
    ctx = numeric_context(rs, pt)
    basis, gram = gram_matrix(rs, sc, pt, mu)
    els = [UEAElement.monomial(ctx, m) for m in basis]
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            assert gram[i][j] == contravariant_form(x, y, sc)
            assert gram[i][j] == gram[j][i]


def test_bruteforce_singular_detects_hyperplane():
    rs, sc = root_system("A2"), structure_constants("A2")
    hp = hyperplane(rs, (1, 1), 1)
    on_h = hp.point([QQ(7, 3)])
    off_h = (QQ(7, 3), QQ(1, 2))
    assert len(bruteforce_singular(rs, sc, on_h, (1, 1)).basis) == 1
    assert len(bruteforce_singular(rs, sc, off_h, (1, 1)).basis) == 0


def test_gram_kernel_agrees_with_bruteforce():
    rs, sc = root_system("A2"), structure_constants("A2")
    pt = hyperplane(rs, (1, 1), 1).point([QQ(7, 3)])
    _, kern = gram_kernel(rs, sc, pt, (1, 1))
    sing = bruteforce_singular(rs, sc, pt, (1, 1))
    assert len(kern) == len(sing.basis) == 1
    scalar, mismatch = compare_up_to_scalar(kern[0], sing.basis[0])
    assert mismatch is None and scalar != QQ(0)


def test_gram_kernel_certified():
    rs, sc = root_system("A2"), structure_constants("A2")
    pt = hyperplane(rs, (1, 1), 2).point([QQ(3, 2)])
    basis, gram = gram_matrix(rs, sc, pt, (2, 2))
    sing = bruteforce_singular(rs, sc, pt, (2, 2))
    cand = [sing.basis[0].terms.get(m, QQ(0)) for m in basis]
    assert gram_kernel_certified(gram, cand) is True
    bad = list(cand)
    bad[0] += QQ(1, 7)
    bad[1] += QQ(2)
    assert gram_kernel_certified(gram, bad) is False


def test_compare_up_to_scalar_mismatch():
    rs = root_system("A2")
    ctx = numeric_context(rs, (QQ(0), QQ(0)))
    b = weight_space_basis(rs, (1, 1))
    x = UEAElement(ctx, {b[0]: QQ(1), b[1]: QQ(2)})
    y = UEAElement(ctx, {b[0]: QQ(3), b[1]: QQ(6)})
    z = UEAElement(ctx, {b[0]: QQ(3), b[1]: QQ(5)})
    assert compare_up_to_scalar(x, y) == (QQ(1, 3), None)
    scalar, msg = compare_up_to_scalar(x, z)
    assert scalar is None and msg


def test_sampling_is_deterministic_and_on_hyperplane():
    rs, sc = root_system("B2"), structure_constants("B2")
    th = theta_m(rs, sc, default_choice(rs, (1, 2)), 2)
    hp = hyperplane(rs, (1, 2), 2)
    pts1 = sample_hyperplane_points(rs, th, hp, 4)
    pts2 = sample_hyperplane_points(rs, th, hp, 4)
    assert pts1 == pts2 and len(set(pts1)) == 4
    from shapovalov.shapelem import eta
    for pt in pts1:
        assert eta(rs, (2, 4)).evaluate(list(pt)) == QQ(0)
        assert eta(rs, (1, 2)).evaluate(list(pt)) != QQ(0)


def test_symbolic_verifier_reports_failure_for_wrong_element():
    rs, sc = root_system("A2"), structure_constants("A2")
    th = theta_m(rs, sc, default_choice(rs, (1, 1)), 1)
    broken = UEAElement(th.element.ctx, dict(th.element.terms))
    mono = next(m for m in broken.terms if sum(m) > 1)
    broken.terms[mono] = broken.terms[mono] * QQ(5)
    wrong = type(th)(element=broken, beta=th.beta, m=th.m, choice=th.choice,
                     den_factors=th.den_factors)
    rep = verify_extremal_symbolic(rs, sc, wrong)
    assert not rep.passed and rep.failures


def test_restrict_to_hyperplane_zero_denominator_refused():
    # eta_{beta} itself vanishes on H_{beta,1}; a coefficient with that
    # denominator must be rejected as non-generic
    rs, sc = root_system("A2"), structure_constants("A2")
    th = theta_m(rs, sc, default_choice(rs, (1, 1)), 1)
    hp = hyperplane(rs, (1, 1), 1)
    from shapovalov.exact import RatFun
    from shapovalov.shapelem import eta
    bad_den = eta(rs, (1, 1)).num
    terms = {m: RatFun(c.ring, c.num, c.den * bad_den)
             for m, c in th.element.terms.items()}
    bad = type(th)(element=UEAElement(th.element.ctx, terms), beta=th.beta,
                   m=th.m, choice=th.choice)
    with pytest.raises(NonGenericConstructionError):
        restrict_to_hyperplane(bad, hp, rs)
