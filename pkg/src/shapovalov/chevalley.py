"""Chevalley basis structure constants.

The constants N(mu, nu) with [e_mu, e_nu] = N(mu, nu) e_{mu+nu} are fixed
by Carter's extraspecial-pair convention: order positive roots by
(height, lex); for each non-simple gamma the extraspecial pair is
(alpha*, gamma - alpha*) with alpha* the first simple root below gamma,
and N on that pair is +(p+1).  Everything else follows from antisymmetry,
N(-mu,-nu) = -N(mu,nu), the cyclic identity
N(mu,nu)/(kappa,kappa) = N(nu,kappa)/(mu,mu) for mu+nu+kappa = 0,
and the Jacobi identity.

Negative root vectors are f_mu = omega(e_mu) = e_{-mu} (omega the Chevalley
involution); with this choice all lowering brackets are read off the same
N table.
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy.polys.domains import QQ

from .rootsys import RootSystem, inner


class BracketDomainError(ValueError):
    """Raising bracket requested outside the lowering domain."""


def _neg(mu):
    return tuple(-c for c in mu)


def _add(mu, nu):
    return tuple(a + b for a, b in zip(mu, nu))


def _sub(mu, nu):
    return tuple(a - b for a, b in zip(mu, nu))


class StructureConstants:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._n_cache = {}
        self._extraspecial = {}
        for g in rs.positive_roots:
            if sum(g) > 1:
                for i in range(rs.rank):
                    rest = list(g)
                    rest[i] -= 1
                    if tuple(rest) in rs.root_index:
                        self._extraspecial[g] = (i, tuple(rest))
                        break
        # materialize the positive-pair table eagerly; it is small
        self.table = {}
        for mu in rs.positive_roots:
            for nu in rs.positive_roots:
                if mu != nu and rs.is_positive_root(_add(mu, nu)):
                    self.table[(mu, nu)] = self.n(mu, nu)

    # -- root-string data ----------------------------------------------

    def string_down(self, mu, nu) -> int:
        """p = max{k : nu - k*mu is a root}."""
        p = 0
        cur = _sub(nu, mu)
        while any(cur) and self.rs.is_root(cur):
            p += 1
            cur = _sub(cur, mu)
        return p

    # -- the N function over arbitrary root pairs -----------------------

    def n(self, mu, nu) -> int:
        """N(mu, nu) for roots mu, nu with mu + nu a root."""
        mu, nu = tuple(mu), tuple(nu)
        key = (mu, nu)
        if key in self._n_cache:
            return self._n_cache[key]
        val = self._compute_n(mu, nu)
        self._n_cache[key] = val
        return val

    def _compute_n(self, mu, nu):
        rs = self.rs
        gamma = _add(mu, nu)
        if not any(gamma) or not rs.is_root(gamma):
            raise ValueError(f"{mu} + {nu} is not a root")
        mu_pos = rs.is_positive_root(mu)
        nu_pos = rs.is_positive_root(nu)
        if not mu_pos and not nu_pos:
            return -self.n(_neg(mu), _neg(nu))
        if mu_pos and nu_pos:
            return self._n_positive(mu, nu, gamma)
        if mu_pos:  # nu negative
            nup = _neg(nu)
            if rs.is_positive_root(gamma):
                # cyclic identity on (mu, -nu', -gamma): nu' + gamma = mu
                val = -self.n(nup, gamma) * inner(rs, gamma, gamma) / inner(rs, mu, mu)
                if val.denominator != 1:
                    raise ArithmeticError(f"non-integer constant for {mu},{nu}")
                return int(val.numerator)
            return self.n(nup, _neg(mu))
        return -self.n(nu, mu)

    def _n_positive(self, mu, nu, gamma):
        rs = self.rs
        es_i, es_rest = self._extraspecial[gamma]
        eps = rs.simple_roots[es_i]
        if mu == eps:
            return self.string_down(mu, nu) + 1
        if nu == eps:
            return -(self.string_down(nu, mu) + 1)
        # Jacobi with x = e_{-eps}, y = e_mu, z = e_nu; target weight gamma - eps
        acc = QQ(0)
        numue = _sub(nu, eps)
        if any(numue) and rs.is_root(numue):
            acc += QQ(self.n(nu, _neg(eps))) * QQ(self.n(mu, numue))
        mumue = _sub(mu, eps)
        if any(mumue) and rs.is_root(mumue):
            acc += QQ(self.n(_neg(eps), mu)) * QQ(self.n(nu, mumue))
        val = -acc / QQ(self.n(_neg(eps), gamma))
        if val.denominator != 1:
            raise ArithmeticError(f"non-integer structure constant for {mu},{nu}")
        return int(val.numerator)

    # -- bracket operations ---------------------------------------------

    def bracket_ef(self, nu, gamma):
        """[e_nu, f_gamma] for positive roots nu, gamma, in the lowering domain.

        Returns ("cartan", nu) when nu == gamma, ("lower", gamma-nu, C) when
        gamma-nu is a positive root, ("zero",) when the bracket vanishes.
        The scalar C is Casimir-normalized: C = (nu,nu)/2 * N(nu, -gamma),
        matching raising operators e^_nu with [e^_nu, f_nu] = t_nu.
        """
        nu, gamma = tuple(nu), tuple(gamma)
        rs = self.rs
        if nu == gamma:
            return ("cartan", nu)
        diff = _sub(gamma, nu)
        if rs.is_positive_root(diff):
            c = inner(rs, nu, nu) / QQ(2) * QQ(self.n(nu, _neg(gamma)))
            return ("lower", diff, c)
        if rs.is_positive_root(_neg(diff)):
            raise BracketDomainError(
                f"[e_{nu}, f_{gamma}] lies outside the lowering domain"
            )
        return ("zero",)

    def bracket_ff(self, mu, nu):
        """[f_mu, f_nu] for positive mu, nu: ("sum", mu+nu, N(-mu,-nu)) or ("zero",)."""
        mu, nu = tuple(mu), tuple(nu)
        s = _add(mu, nu)
        if self.rs.is_positive_root(s):
            return ("sum", s, self.n(_neg(mu), _neg(nu)))
        return ("zero",)

    def raise_constant(self, nu, gamma) -> int:
        """N(nu, -gamma): the Chevalley-normalized constant of [e_nu, f_gamma].

        Valid whenever nu - gamma is a root or zero is excluded; used both
        for lowering (gamma - nu positive) and raising (nu - gamma positive)
        branches of the adjoint action.
        """
        return self.n(tuple(nu), _neg(gamma))

    def dump(self) -> str:
        """N-table as text lines "mu,nu -> N" over positive pairs."""
        lines = []
        for (mu, nu), val in sorted(self.table.items()):
            lines.append(
                "%s,%s -> %d"
                % (",".join(map(str, mu)), ",".join(map(str, nu)), val)
            )
        return "\n".join(lines)


def build_structure_constants(rs: RootSystem) -> StructureConstants:
    return StructureConstants(rs)
