"""Relations coming from a divisor that moves in a linear system (field mode).

For an effective divisor D = p1 + ... + pk with h^0(D) = r + 1 > 1 the class
of D times L^[r] is realised on C^[k], which forces relations among the
classes ebar_i(D), Gamma_n(C) in CH(C^[.]) and among eps_i(D), cw_n(C) in
CH(J).  The free model cannot know that D moves, so the relations are
*emitted*, not verified; what is verified is the algebra that produces them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq

from .cbul_model import CBulModel
from .pdpoly import Element, PreconditionError, binom, compositions


FLAVORS = ("id1", "id2", "cor1", "cor2", "cor3", "cor4")


@dataclass(frozen=True)
class DivisorSpec:
    points: tuple
    r0: int

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise PreconditionError("divisor needs at least one point")
        if self.r0 < 1 or self.r0 > len(self.points):
            raise PreconditionError("need 1 <= r0 <= deg D")

    @property
    def deg(self) -> int:
        return len(self.points)


@dataclass
class Relation:
    kind: str
    N: int
    s: int
    value: Element


class GKModel:
    def __init__(self, cb: CBulModel, divisor: DivisorSpec):
        if not cb.jac.config.field_mode:
            raise PreconditionError("divisor relations are only modelled over a field (d = 0)")
        missing = set(divisor.points) - set(cb.jac.config.points)
        if missing:
            raise PreconditionError(f"undeclared points {sorted(missing)}")
        self.cb = cb
        self.jac = cb.jac
        self.D = divisor
        self.g = cb.jac.g
        self._cache: dict = {}

    # divisor classes
    def point_class(self, p: str) -> Element:
        cb = self.cb
        return cb.lift_to_degree(cb.cinf.fa_build(self.jac.iota_point(p), self.jac.ring.zero()), 1)

    def divisor_class(self) -> Element:
        if "D" not in self._cache:
            out = self.cb.one()
            for p in self.D.points:
                out = out * self.point_class(p)
            self._cache["D"] = out
        return self._cache["D"]

    def e_class(self, i: int) -> Element:
        if not 0 <= i <= self.D.deg:
            return self.cb.gring.zero("gamma")
        return self.cb.dt_div(self.divisor_class(), self.D.deg - i)

    def ebar_class(self, i: int) -> Element:
        if not 0 <= i <= self.D.deg:
            return self.cb.gring.zero("gamma")
        key = ("ebar", i)
        if key not in self._cache:
            self._cache[key] = self.cb.Pi_t(self.e_class(i))
        return self._cache[key]

    def eps_class(self, i: int) -> Element:
        """Coweight-i part of the pushforward of ebar_i to J."""
        y = self.cb.sigma_tilde_push(self.ebar_class(i))
        cw = self.jac.ring.mcoweight
        return y.filter(lambda k: cw[k[0]] == i)

    # the U and Upsilon sums
    def U(self, nu: int, s: int) -> Element:
        """sum over n_1 + ... + n_s = nu, n_i >= 2 of prod Gamma_(n_i)(C)/n_i."""
        key = ("U", nu, s)
        if key not in self._cache:
            cb = self.cb
            out = cb.gring.zero("gamma")
            if s == 0:
                out = cb.one() if nu == 0 else out
            else:
                C = self.jac.spec_curve()
                for parts in compositions(nu, s, 2):
                    if max(parts) > 2 * self.g:
                        continue
                    term = cb.one()
                    for n in parts:
                        term = (term * cb.Gamma_n(n, C)).scale(mpq(1, n))
                    out = out + term
            self._cache[key] = out
        return self._cache[key]

    def U_class(self, nu: int, s: int) -> Element:
        return self.U(nu, s)

    def Upsilon_class(self, nu: int, s: int) -> Element:
        return self.Upsilon(nu, s)

    def Upsilon(self, nu: int, s: int) -> Element:
        """sum over n_1 + ... + n_s = nu, n_i >= 2 of prod (n_i - 1)! c_(n_i)."""
        R = self.jac.ring
        if s == 0:
            return R.one() if nu == 0 else R.zero()
        out = R.zero()
        for parts in compositions(nu, s, 2):
            if max(parts) > 2 * self.g:
                continue
            term = R.one()
            for n in parts:
                term = (term * self.jac.c(n)).scale(math.factorial(n - 1))
            out = out + term
        return out

    # relations
    def valid(self, N: int, s: int) -> bool:
        return 0 <= s <= self.D.r0 and N > self.D.deg - self.D.r0 + s

    def valid_pairs(self):
        """Every (N, s) with a possibly nonzero relation."""
        for s in range(0, self.D.r0 + 1):
            top = self.D.deg if s == 0 else self.D.deg + 2 * self.g * s
            for N in range(self.D.deg - self.D.r0 + s + 1, top + 1):
                yield N, s

    def gk_relation_1(self, N: int, s: int) -> Element:
        if not self.valid(N, s):
            raise PreconditionError("need s <= r0 and N > deg D - r0 + s")
        out = self.cb.gring.zero("gamma")
        for i in range(0, min(N - 2 * s, self.D.deg) + 1):
            out = out + (self.ebar_class(i) * self.U(N - i, s)).scale((-1) ** i)
        return out

    def gk_relation_2(self, N: int, s: int) -> Element:
        if not self.valid(N, s):
            raise PreconditionError("need s <= r0 and N > deg D - r0 + s")
        out = self.jac.ring.zero()
        for i in range(0, min(N - 2 * s, self.D.deg) + 1):
            out = out + (self.eps_class(i) * self.Upsilon(N - i, s)).scale((-1) ** i)
        return out

    def gk_consistency(self, N: int, s: int) -> dict:
        """Check the expansion that produces the first family of relations.

        W = sum_i ebar_i (u - s~c)^r0.  Its CH(C^[N + r0 - s]) component must equal
        sum_(j, i) (-1)^(N-s-i) C(r0, j) ebar_i u^(r0-j) U(N + j - s - i, j),
        and its u^(r0-s) coefficient must be the (signed) relation.
        """
        if not self.valid(N, s):
            raise PreconditionError("need s <= r0 and N > deg D - r0 + s")
        cb = self.cb
        m = self.D.r0
        u = cb.u("gamma")
        sc = cb.to_gamma(cb.s_tilde(self.jac.curve_class()))
        base = u - sc
        W = cb.gring.zero("gamma")
        for i in range(self.D.deg + 1):
            W = W + self.ebar_class(i)
        W = W * (base ** m)
        comp = cb.degree_component(W, N + m - s)
        expected = cb.gring.zero("gamma")
        per_j = {}
        for j in range(0, m + 1):
            acc = cb.gring.zero("gamma")
            for i in range(0, self.D.deg + 1):
                nu = N + j - s - i
                if nu < 0:
                    continue
                acc = acc + (self.ebar_class(i) * self.U(nu, j)).scale((-1) ** (N - s - i) * binom(m, j))
            per_j[j] = acc
            expected = expected + acc * (u ** (m - j))
        # u-power separation: the coefficient of u^(m-j) over K[t] is per_j[j]
        separation = all(comp.slice(2, m - j) == per_j[j].scale(math.factorial(m - j))
                         for j in range(m + 1)) and comp.max_var(2) <= m
        relation = self.gk_relation_1(N, s).scale((-1) ** (N - s) * binom(m, s))
        return {
            "expansion": comp == expected,
            "separation": separation,
            "relation": per_j[s] == relation,
            "component": comp,
        }

    # corollaries
    def cor2_relations(self) -> list:
        return [Relation("cor2", N, 0, self.ebar_class(N))
                for N in range(self.D.deg - self.D.r0 + 1, self.D.deg + 1)]

    def cor3_relation(self) -> Element:
        out = self.cb.one()
        t = self.cb.t("gamma")
        for p in self.D.points:
            out = out * (self.point_class(p) - t)
        return out

    def cor4_relation(self) -> Element:
        """sum_(j=1)^(d+1) (-1)^j e_(d+1-j) Delta_j(C) / j."""
        cb, d = self.cb, self.D.deg
        C = self.jac.spec_curve()
        out = cb.gring.zero("gamma")
        for j in range(1, d + 2):
            out = out + (self.e_class(d + 1 - j) * cb.Delta_push(j, C)).scale(mpq((-1) ** j, j))
        return out

    def cor4_from_id1(self) -> Element:
        """The same class assembled from the first family at s = 1, N = d + 1,
        with the i = d term (ebar_d u) restored."""
        d = self.D.deg
        body = self.gk_relation_1(d + 1, 1) + (self.ebar_class(d) * self.cb.u("gamma")).scale((-1) ** d)
        return body.scale((-1) ** (d + 1))

    def binomial_bridge(self, M: int) -> bool:
        """sum_i C(d-i, M-i) ebar_i t^(M-i) == e_M."""
        d = self.D.deg
        t = self.cb.t
        lhs = self.cb.gring.zero("gamma")
        for i in range(0, M + 1):
            lhs = lhs + (self.ebar_class(i) * t("gamma", M - i)).scale(binom(d - i, M - i))
        return lhs == self.e_class(M)

    def cor1_relations(self) -> list:
        """Upsilon(N, r0) for N > deg D; these vanish modulo algebraic equivalence."""
        return [Relation("cor1", N, self.D.r0, self.Upsilon(N, self.D.r0))
                for N in range(self.D.deg + 1, 2 * self.g * self.D.r0 + 1)]

    def gk_emit(self, flavor: str) -> list:
        """Relations of one flavor: id1, id2, cor1, cor2, cor3 or cor4."""
        if flavor not in FLAVORS:
            raise PreconditionError(f"unknown relation flavor {flavor!r}")
        return [r for r in self.emit() if r.kind == flavor]

    def emit(self) -> list:
        out = []
        for N, s in self.valid_pairs():
            out.append(Relation("id1", N, s, self.gk_relation_1(N, s)))
            out.append(Relation("id2", N, s, self.gk_relation_2(N, s)))
        out += self.cor1_relations()
        out += self.cor2_relations()
        out.append(Relation("cor3", self.D.deg, 0, self.cor3_relation()))
        out.append(Relation("cor4", self.D.deg + 1, 1, self.cor4_relation()))
        return out
