"""CH(C^[oo]) modelled as A<x>, with x the class L of the Poincare line bundle.

A coefficient ``y`` in this chart stands for ``s_*(y)``, the pushforward along
the zero section.  ``sigma_push`` evaluates at ``x = 0`` and ``xi_cap`` is the
PD derivative ``x^[m] -> x^[m-1]``.
"""
from __future__ import annotations

from gmpy2 import mpq

from .jac_model import JacobianRing
from .pdpoly import (CoordinateMismatch, Element, PreconditionError, divided_power,
                     substitute)


def log_psi(F: Element) -> Element:
    """log(1 + psi F) / psi, expanded as sum_k (-psi)^(k-1) F^k / k."""
    ring = F.ring
    npsi = -ring.gen("psi")
    out = ring.zero(F.coords)
    term = F
    k = 1
    while term:
        out = out + term.scale(mpq(1, k))
        term = term * F * npsi
        k += 1
    return out


class CInfModel:
    def __init__(self, jac: JacobianRing):
        self.jac = jac
        self.ring = jac.ring
        self._cache: dict = {}

    def _x_elem(self, F: Element):
        if F.ring is not self.ring or F.coords not in (None, "x"):
            raise CoordinateMismatch("expected an element of A<x>")

    def x(self, m: int = 1) -> Element:
        return self.ring.var("x", "x", m)

    def s_embed(self, y: Element) -> Element:
        if y.ring is not self.ring or any(k[1] or k[2] or k[3] for k in y.terms):
            raise PreconditionError("s_embed takes a coefficient in the coweight basis")
        return y.with_coords("x")

    def sigma_push(self, F: Element) -> Element:
        self._x_elem(F)
        return F.slice(3, 0).with_coords(None)

    def xi_cap(self, F: Element) -> Element:
        self._x_elem(F)
        return F.map_keys(lambda k, v: ((k[0], 0, 0, k[3] - 1), v) if k[3] else None, "x")

    def push_N_inf(self, F: Element, N: int) -> Element:
        """[N]_*: coefficient coweight w and x^[m] together scale by N^(w+m)."""
        self._x_elem(F)
        if not isinstance(N, int) or N < 0:
            raise PreconditionError("push_N_inf needs an integer N >= 0")
        cw = self.ring.mcoweight
        return F.map_keys(lambda k, v: (k, v * N ** (cw[k[0]] + k[3])), "x")

    # exp(psi x) and (exp(psi x) - 1)/psi
    def exp_psi_x(self, scale: int = 1) -> Element:
        key = ("exp", scale)
        if key not in self._cache:
            R = self.ring
            out = R.one("x")
            p = R.one()
            psi = R.gen("psi")
            for k in range(1, R.window.psi_order + 1):
                p = p * psi
                if not p:
                    break
                out = out + (p * self.x(k)).scale(scale ** k)
            self._cache[key] = out
        return self._cache[key]

    def exp_minus_one_over_psi(self, scale: int = 1) -> Element:
        """(exp(scale psi x) - 1)/psi = sum_(k>=1) psi^(k-1) scale^k x^[k]."""
        key = ("em1", scale)
        if key not in self._cache:
            R = self.ring
            out = self.x(1).scale(scale)
            p = R.one()
            psi = R.gen("psi")
            for k in range(2, R.window.psi_order + 2):
                p = p * psi
                if not p:
                    break
                out = out + (p * self.x(k)).scale(scale ** k)
            self._cache[key] = out
        return self._cache[key]

    def fa_build(self, iota: Element, p0star: Element) -> Element:
        """Image in C^[oo] of a class with AJ image ``iota`` and p0-pullback ``p0star``."""
        return (self.s_embed(iota) * self.exp_psi_x()
                + self.s_embed(p0star) * self.exp_minus_one_over_psi())

    # named classes
    def class_C(self) -> Element:
        if "C" not in self._cache:
            self._cache["C"] = self.fa_build(self.jac.curve_class(), self.ring.one())
        return self._cache["C"]

    def class_Cn(self, n: int) -> Element:
        """[C^[n]] = sum_m w_(n-m) exp(psi x)^(n-m) gamma_m((exp(psi x)-1)/psi)."""
        if n < 0:
            raise PreconditionError("class_Cn needs n >= 0")
        key = ("Cn", n)
        if key not in self._cache:
            q = self.exp_minus_one_over_psi()
            out = self.ring.zero("x")
            for m in range(0, n + 1):
                out = out + (self.s_embed(self.jac.w_class(n - m)) * self.exp_psi_x(n - m)
                             * divided_power(q, m))
            self._cache[key] = out
        return self._cache[key]

    def class_L(self) -> Element:
        return self.x(1)

    def class_Gamma(self) -> Element:
        """The zero section of J pushed into C^[oo]."""
        return self.s_embed(self.jac.jac_fundamental())

    def class_named(self, name: str) -> Element:
        if name == "C":
            return self.class_C()
        if name == "L":
            return self.class_L()
        if name == "Gamma":
            return self.class_Gamma()
        raise PreconditionError(f"unknown class {name!r}")

    # change of chart
    def ell(self) -> Element:
        """(log(1 + psi u) - log(1 + psi c)) / psi, in the u-chart."""
        if "ell" not in self._cache:
            u = self.ring.var("u", "beta")
            c = self.jac.curve_class().with_coords("beta")
            self._cache["ell"] = log_psi(u) - log_psi(c)
        return self._cache["ell"]

    def x_to_u(self, F: Element) -> Element:
        """Rewrite F through x -> ell(u); the result is t-free in the u-chart."""
        self._x_elem(F)
        return substitute(F.with_coords("x"), "x", self.ell(), coords="beta")

    def u_to_x(self, G: Element) -> Element:
        """Inverse of x_to_u: u -> [C]."""
        if G.ring is not self.ring or G.coords not in (None, "beta"):
            raise CoordinateMismatch("u_to_x takes a u-chart element")
        if any(k[1] for k in G.terms):
            raise PreconditionError("u_to_x takes t-free elements")
        return substitute(G.with_coords("beta"), "u", self.class_C(), coords="x")

    def beauville_component_inf(self, F: Element, i: int, j: int) -> Element:
        """Part of dimension i and coweight 2i + j (x counts as (1, 1))."""
        self._x_elem(F)
        R = self.ring
        return F.filter(lambda k: R.mdim[k[0]] + k[3] == i and R.mcoweight[k[0]] + k[3] == 2 * i + j)
