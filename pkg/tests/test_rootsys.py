import pytest
from sympy.polys.domains import QQ

from conftest import ALGEBRAS, root_system
from shapovalov.rootsys import (
    AlgebraConfigError,
    AlgebraType,
    fundamental_coords,
    hasse_b_minus,
    inner,
    interval_indices,
    multiplicity,
    root_poset_interval,
    support,
)

ROOT_COUNTS = {"A2": 3, "A3": 6, "B2": 4, "B3": 9, "C3": 9, "D4": 12,
               "G2": 6}
HIGHEST = {"A2": (1, 1), "A3": (1, 1, 1), "B2": (1, 2), "B3": (1, 2, 2),
           "C3": (2, 2, 1), "D4": (1, 2, 1, 1), "G2": (2, 3)}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_positive_root_count(name):
    rs = root_system(name)
    assert len(rs.positive_roots) == ROOT_COUNTS[name]
    assert len(set(rs.positive_roots)) == ROOT_COUNTS[name]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_roots_sorted_by_height_then_lex(name):
    rs = root_system(name)
    keys = [(sum(g), g) for g in rs.positive_roots]
    assert keys == sorted(keys)


@pytest.mark.parametrize("name", ALGEBRAS)
def test_highest_root(name):
    rs = root_system(name)
    assert tuple(rs.highest_root) == HIGHEST[name]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_root_closure_reaches_every_root(name):
    # every non-simple positive root is a smaller positive root plus a
    # simple root
    rs = root_system(name)
    for g in rs.positive_roots:
        if sum(g) == 1:
            continue
        assert any(
            rs.is_positive_root(tuple(a - b for a, b in zip(g, s)))
            for s in rs.simple_roots
        )


@pytest.mark.parametrize("name", ALGEBRAS)
def test_long_roots_have_square_length_two(name):
    rs = root_system(name)
    lengths = {inner(rs, g, g) for g in rs.positive_roots}
    assert max(lengths) == QQ(2)
    if name == "G2":
        assert lengths == {QQ(2), QQ(2, 3)}
    if name[0] in ("A", "D"):
        assert lengths == {QQ(2)}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_rho_has_unit_fundamental_coords(name):
    rs = root_system(name)
    assert fundamental_coords(rs, rs.rho) == tuple([QQ(1)] * rs.rank)


def test_invalid_labels_rejected():
    for bad in ("X5", "A0", "B1", "G3", "D3", "", "A", "2A"):
        with pytest.raises(AlgebraConfigError):
            AlgebraType.parse(bad)


def test_interval_a2():
    rs = root_system("A2")
    idxs = interval_indices(rs, 0, (1, 1))
    assert [rs.positive_roots[i] for i in idxs] == [(1, 0), (1, 1)]


def test_interval_g2_contents():
    # intervals above each simple root drive the admissible choices
    rs = root_system("G2")
    top = [rs.positive_roots[i] for i in interval_indices(rs, 0, (2, 3))]
    assert top == [(1, 0), (1, 1), (1, 2), (1, 3), (2, 3)]
    mid = [rs.positive_roots[i] for i in interval_indices(rs, 1, (1, 2))]
    assert mid == [(0, 1), (1, 1), (1, 2)]


def test_poset_interval_alpha_outside_support():
    rs = root_system("A3")
    with pytest.raises(ValueError):
        root_poset_interval(rs, 2, (1, 1, 0))


def test_multiplicity_and_support():
    rs = root_system("B3")
    assert multiplicity(rs, 1, (1, 2, 2)) == 2
    assert tuple(support(rs, (0, 1, 1))) == (1, 2)


@pytest.mark.parametrize("name", ALGEBRAS)
def test_hasse_shape(name):
    rs = root_system(name)
    d = hasse_b_minus(rs)
    assert len(d.nodes) == rs.rank + len(rs.positive_roots)
    # every edge lowers either to a root one simple step down or to a
    # Cartan node from a simple root
    for src, dst, a in d.edges:
        assert src[0] == "f"
        if dst[0] == "h":
            assert sum(src[1]) == 1 and dst[1] == a
        else:
            diff = tuple(x - y for x, y in zip(src[1], dst[1]))
            assert diff == tuple(rs.simple_roots[a])
