"""Root systems of the classical families A, B, C, D and G2.

Roots are stored as integer coordinate tuples in the simple-root basis.
The symmetrized Cartan form normalizes long roots to squared length 2,
so all inner products are exact rationals.  Positive roots carry a fixed
index (sorted by height, then lexicographically) that the PBW machinery
relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from sympy.polys.domains import QQ


class AlgebraConfigError(ValueError):
    """Unsupported family or rank."""


_RANK_BOUNDS = {"A": 1, "B": 2, "C": 2, "D": 4, "G": 2}


@dataclass(frozen=True)
class AlgebraType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_BOUNDS:
            raise AlgebraConfigError(
                f"unsupported family {self.family!r}; expected one of A, B, C, D, G"
            )
        if self.rank < _RANK_BOUNDS[self.family]:
            raise AlgebraConfigError(
                f"{self.family}{self.rank}: family {self.family} requires rank >= "
                f"{_RANK_BOUNDS[self.family]}"
            )
        if self.family == "G" and self.rank != 2:
            raise AlgebraConfigError("family G requires rank = 2")

    @classmethod
    def parse(cls, s: str) -> "AlgebraType":
        s = s.strip()
        if len(s) < 2 or not s[1:].isdigit():
            raise AlgebraConfigError(
                f"bad algebra string {s!r}; expected family letter + rank, e.g. 'B3'"
            )
        return cls(s[0].upper(), int(s[1:]))

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(t: AlgebraType):
    """Cartan matrix A[i][j] = (alpha_i, alpha_j^vee), integer entries."""
    n = t.rank
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        A[i][i + 1] = A[i + 1][i] = -1
    if t.family == "B" and n >= 2:
        A[n - 2][n - 1] = -2
    elif t.family == "C" and n >= 2:
        A[n - 1][n - 2] = -2
    elif t.family == "D":
        A[n - 2][n - 1] = A[n - 1][n - 2] = 0
        A[n - 3][n - 1] = A[n - 1][n - 3] = -1
    elif t.family == "G":
        A = [[2, -3], [-1, 2]]
    return A


def _root_half_lengths(t: AlgebraType):
    """d_i = (alpha_i, alpha_i)/2, long roots normalized to squared length 2."""
    n = t.rank
    if t.family in ("A", "D"):
        return [QQ(1)] * n
    if t.family == "B":
        return [QQ(1)] * (n - 1) + [QQ(1, 2)]
    if t.family == "C":
        return [QQ(1, 2)] * (n - 1) + [QQ(1)]
    return [QQ(1), QQ(1, 3)]  # G2


@dataclass(frozen=True)
class RootSystem:
    type: AlgebraType
    cartan: tuple  # Cartan matrix rows, integers
    gram: tuple  # symmetrized form on simple roots, QQ entries
    simple_roots: tuple  # coordinate tuples (unit vectors)
    positive_roots: tuple  # all positive roots, fixed order
    rho: tuple  # QQ simple-root coordinates of rho
    fundamental_weights: tuple  # QQ simple-root coordinates of each omega_i
    highest_root: tuple
    root_index: dict = field(repr=False, compare=False)
    covers: tuple = field(repr=False, compare=False)  # covers[i] = ((j, alpha), ...)
    below: tuple = field(repr=False, compare=False)  # downward-closure index sets
    above: tuple = field(repr=False, compare=False)

    @property
    def rank(self):
        return self.type.rank

    def is_positive_root(self, coords) -> bool:
        return tuple(coords) in self.root_index

    def index_of(self, coords) -> int:
        try:
            return self.root_index[tuple(coords)]
        except KeyError:
            raise ValueError(f"{tuple(coords)} is not a positive root of {self.type}")

    def is_root(self, coords) -> bool:
        c = tuple(coords)
        return c in self.root_index or tuple(-x for x in c) in self.root_index

    def height(self, coords) -> int:
        return sum(coords)


def _coroot_pairing(cartan, mu, i):
    """(mu, alpha_i^vee) for mu in simple-root coordinates."""
    return sum(c * cartan[j][i] for j, c in enumerate(mu))


@lru_cache(maxsize=None)
def build_root_system(t: AlgebraType) -> RootSystem:
    n = t.rank
    A = cartan_matrix(t)
    d = _root_half_lengths(t)
    gram = tuple(tuple(QQ(A[i][j]) * d[j] for j in range(n)) for i in range(n))

    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    # closure by root strings: gamma + alpha_i is a root iff q - (gamma, alpha_i^vee) > 0
    while frontier:
        new = []
        for g in frontier:
            for i in range(n):
                q = 0
                down = list(g)
                while True:
                    down[i] -= 1
                    tgt = tuple(down)
                    if all(c == 0 for c in tgt):
                        break
                    if tgt in roots or tuple(-c for c in tgt) in roots:
                        q += 1
                    else:
                        break
                if q - _coroot_pairing(A, g, i) > 0:
                    up = list(g)
                    up[i] += 1
                    cand = tuple(up)
                    if cand not in roots:
                        roots.add(cand)
                        new.append(cand)
        frontier = new
    positive = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    root_index = {r: i for i, r in enumerate(positive)}

    # fundamental weights and rho in simple-root coordinates: solve x A = e_k
    fund = tuple(tuple(_solve_transposed(A, k)) for k in range(n))
    rho = tuple(sum(fund[k][j] for k in range(n)) for j in range(n))

    covers = []
    for g in positive:
        cov = []
        for i in range(n):
            down = list(g)
            down[i] -= 1
            tgt = tuple(down)
            if tgt in root_index:
                cov.append((root_index[tgt], i))
        covers.append(tuple(cov))
    covers = tuple(covers)

    below = [set() for _ in positive]
    for gi in range(len(positive)):  # ascending height order
        below[gi].add(gi)
        for (lo, _a) in covers[gi]:
            below[gi] |= below[lo]
    above = [set() for _ in positive]
    for gi in range(len(positive) - 1, -1, -1):
        above[gi].add(gi)
        for hi in range(len(positive)):
            if gi in {lo for (lo, _a) in covers[hi]}:
                above[gi] |= above[hi]
    below = tuple(frozenset(s) for s in below)
    above = tuple(frozenset(s) for s in above)

    return RootSystem(
        type=t,
        cartan=tuple(tuple(row) for row in A),
        gram=gram,
        simple_roots=tuple(simple),
        positive_roots=positive,
        rho=rho,
        fundamental_weights=fund,
        highest_root=positive[-1],
        root_index=root_index,
        covers=covers,
        below=below,
        above=above,
    )


def _solve_transposed(A, k):
    """Solve sum_j x_j A[j][i] = delta_{ki} exactly over QQ."""
    n = len(A)
    M = [[QQ(A[j][i]) for j in range(n)] + [QQ(1 if i == k else 0)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != QQ(0))
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != QQ(0):
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def inner(rs: RootSystem, mu, nu):
    """Symmetrized bilinear form (mu, nu); arguments in simple-root coordinates."""
    if len(mu) != rs.rank or len(nu) != rs.rank:
        raise ValueError("coordinate length does not match rank")
    acc = QQ(0)
    for i, a in enumerate(mu):
        if a == 0:
            continue
        for j, b in enumerate(nu):
            if b != 0:
                acc += QQ(a) * QQ(b) * rs.gram[i][j]
    return acc


def coroot_pairing(rs: RootSystem, mu, i: int):
    """(mu, alpha_i^vee), an integer for mu in the root lattice."""
    return _coroot_pairing(rs.cartan, mu, i)


def fundamental_coords(rs: RootSystem, mu):
    """Coordinates of mu in the fundamental-weight basis: ((mu, alpha_i^vee))_i."""
    return tuple(_coroot_pairing(rs.cartan, mu, i) for i in range(rs.rank))


def multiplicity(rs: RootSystem, alpha: int, beta) -> int:
    """Multiplicity of simple root alpha in the positive root beta."""
    beta = tuple(beta)
    if beta not in rs.root_index:
        raise ValueError(f"{beta} is not a positive root of {rs.type}")
    return beta[alpha]


def support(rs: RootSystem, beta):
    """Indices of simple roots occurring in beta."""
    return [i for i, c in enumerate(beta) if c > 0]


@dataclass(frozen=True)
class PosetInterval:
    alpha: int  # simple-root index
    beta: tuple
    nodes: tuple  # root coordinate tuples, ascending root index
    edges: tuple  # (upper, lower, simple index) covering edges inside the interval


def root_poset_interval(rs: RootSystem, alpha: int, beta) -> PosetInterval:
    """Nodes alpha <= gamma <= beta of the root poset, with covering edges."""
    beta = tuple(beta)
    bi = rs.index_of(beta)
    if beta[alpha] < 1:
        raise ValueError(
            f"alpha_{alpha + 1} not in support of {beta}: multiplicity is 0"
        )
    ai = rs.root_index[rs.simple_roots[alpha]]
    node_idx = sorted(rs.below[bi] & rs.above[ai])
    node_set = set(node_idx)
    nodes = tuple(rs.positive_roots[i] for i in node_idx)
    edges = []
    for gi in node_idx:
        for (lo, a) in rs.covers[gi]:
            if lo in node_set:
                edges.append((rs.positive_roots[gi], rs.positive_roots[lo], a))
    return PosetInterval(alpha=alpha, beta=beta, nodes=nodes, edges=tuple(edges))


def interval_indices(rs: RootSystem, alpha: int, beta):
    """Root indices gamma with alpha <= gamma <= beta, ascending."""
    bi = rs.index_of(tuple(beta))
    ai = rs.root_index[rs.simple_roots[alpha]]
    return sorted(rs.below[bi] & rs.above[ai])


@dataclass(frozen=True)
class HasseDiagram:
    nodes: tuple  # ("h", simple index) then ("f", root coords)
    edges: tuple  # (source node, target node, simple index)


def hasse_b_minus(rs: RootSystem) -> HasseDiagram:
    """Hasse diagram of the negative Borel: f_gamma and Cartan nodes h_alpha.

    Edges f_gamma -> f_{gamma-alpha} for each simple alpha with
    gamma - alpha a positive root, and f_alpha -> h_alpha.
    """
    nodes = [("h", i) for i in range(rs.rank)]
    nodes += [("f", g) for g in rs.positive_roots]
    edges = []
    for g in rs.positive_roots:
        if sum(g) == 1:
            a = g.index(1)
            edges.append((("f", g), ("h", a), a))
    for gi, g in enumerate(rs.positive_roots):
        for (lo, a) in rs.covers[gi]:
            edges.append((("f", g), ("f", rs.positive_roots[lo]), a))
    return HasseDiagram(nodes=tuple(nodes), edges=tuple(edges))
