"""Shared helpers: cached root systems and the sweep case list.

Everything here is importable at collection time so tests can parametrize
over algebras and roots without rebuilding the (pure, deterministic) data.
"""

import functools

from shapovalov.chevalley import build_structure_constants
from shapovalov.rootsys import AlgebraType, build_root_system

ALGEBRAS = ("A2", "A3", "B2", "B3", "C3", "D4", "G2")


@functools.lru_cache(maxsize=None)
def root_system(name):
    return build_root_system(AlgebraType.parse(name))


@functools.lru_cache(maxsize=None)
def structure_constants(name):
    return build_structure_constants(root_system(name))


def non_simple_roots(rs):
    return [g for g in rs.positive_roots if sum(g) > 1]


def root_id(beta):
    return "".join(map(str, beta))
