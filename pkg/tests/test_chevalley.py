import pytest
from sympy.polys.domains import QQ

from conftest import ALGEBRAS, root_system, structure_constants
from shapovalov.chevalley import BracketDomainError
from shapovalov.rootsys import inner


@pytest.mark.parametrize("name", ALGEBRAS)
def test_table_entries_are_nonzero_integers(name):
    sc = structure_constants(name)
    for val in sc.table.values():
        assert isinstance(val, int) and val != 0


@pytest.mark.parametrize("name", ALGEBRAS)
def test_antisymmetry(name):
    sc = structure_constants(name)
    for (mu, nu), val in sc.table.items():
        assert sc.table[(nu, mu)] == -val


@pytest.mark.parametrize("name", ALGEBRAS)
def test_magnitude_is_string_length(name):
    # |N(mu,nu)| = p+1 with p the length of the mu-string down through nu
    sc = structure_constants(name)
    for (mu, nu), val in sc.table.items():
        assert abs(val) == sc.string_down(mu, nu) + 1


def test_g2_reaches_constant_three():
    sc = structure_constants("G2")
    assert max(abs(v) for v in sc.table.values()) == 3


def test_a2_constants_are_units():
    sc = structure_constants("A2")
    assert {abs(v) for v in sc.table.values()} == {1}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_negative_pair_rule(name):
    sc = structure_constants(name)
    for (mu, nu), val in sc.table.items():
        neg = tuple(-c for c in mu), tuple(-c for c in nu)
        assert sc.n(*neg) == -val


@pytest.mark.parametrize("name", ALGEBRAS)
def test_cyclic_identity(name):
    # N(mu,nu)/(kappa,kappa) = N(nu,kappa)/(mu,mu) when mu+nu+kappa = 0
    rs = root_system(name)
    sc = structure_constants(name)
    for (mu, nu), val in sc.table.items():
        kappa = tuple(-a - b for a, b in zip(mu, nu))
        lhs = QQ(val) / inner(rs, kappa, kappa)
        rhs = QQ(sc.n(nu, kappa)) / inner(rs, mu, mu)
        assert lhs == rhs


def test_bracket_ef_branches():
    rs = root_system("B2")
    sc = structure_constants("B2")
    assert sc.bracket_ef((1, 0), (1, 0)) == ("cartan", (1, 0))
    kind, diff, c = sc.bracket_ef((1, 0), (1, 1))
    assert kind == "lower" and diff == (0, 1) and c != QQ(0)
    assert sc.bracket_ef((0, 1), (1, 0)) == ("zero",)
    with pytest.raises(BracketDomainError):
        sc.bracket_ef((1, 1), (0, 1))


def test_dump_deterministic():
    sc = structure_constants("A2")
    assert sc.dump() == structure_constants("A2").dump()
    assert "->" in sc.dump()
