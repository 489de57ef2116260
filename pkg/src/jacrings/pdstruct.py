"""Integral divided-power structure on formal cycle algebras.

A :class:`FormalCycleAlgebra` is the free PD algebra over Z on a finite set of
symbols ``[Z_j]`` (thought of as positive-dimensional cycles), truncated above
a total PD degree ``d_max``.  Elements are dicts from exponent vectors
``(d_1, ..., d_r)`` (standing for ``prod_j gamma_{d_j}([Z_j])``) to integers.
Everything here stays in exact integer arithmetic.
"""
from __future__ import annotations

import itertools
import math
import random
from typing import Mapping

from gmpy2 import mpq

from .pdpoly import Element, PreconditionError, compositions


class FormalCycleAlgebra:
    def __init__(self, symbols, d_max: int):
        self.symbols = tuple(symbols)
        if len(set(self.symbols)) != len(self.symbols):
            raise PreconditionError("symbols must be distinct")
        if d_max < 1:
            raise PreconditionError("d_max must be >= 1")
        self.d_max = d_max
        self.r = len(self.symbols)
        self.zero_vec = (0,) * self.r

    # element helpers
    def one(self) -> dict:
        return {self.zero_vec: 1}

    def cycle(self, name: str, n: int = 1) -> dict:
        vec = [0] * self.r
        vec[self.symbols.index(name)] = 1
        return {tuple(vec): n} if n else {}

    def linear(self, coeffs: Mapping[str, int]) -> dict:
        out: dict = {}
        for name, n in coeffs.items():
            out = self.add(out, self.cycle(name, n))
        return out

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, v in b.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def scale(self, a: dict, n: int) -> dict:
        return {k: v * n for k, v in a.items()} if n else {}

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for k1, v1 in a.items():
            for k2, v2 in b.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                if sum(k) > self.d_max:
                    continue
                c = v1 * v2
                for x, y in zip(k1, k2):
                    if x and y:
                        c *= math.comb(x + y, x)
                out[k] = out.get(k, 0) + c
        return {k: v for k, v in out.items() if v}

    def power(self, a: dict, n: int) -> dict:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    # divided powers
    def gamma_multinomial(self, zeta: Mapping[str, int] | dict, d: int) -> dict:
        """gamma_d(sum_j n_j [Z_j]) = sum over compositions of prod_j n_j^(d_j) gamma_(d_j)(Z_j)."""
        if d < 0:
            raise PreconditionError("gamma index must be >= 0")
        if d > self.d_max:
            raise PreconditionError("gamma index exceeds d_max")
        coeffs = self._as_linear(zeta)
        out: dict = {}
        for comp in compositions(d, self.r):
            c = 1
            for n, e in zip(coeffs, comp):
                c *= n ** e
            if c:
                out[comp] = out.get(comp, 0) + c
        return out

    def _as_linear(self, zeta) -> list:
        if isinstance(zeta, Mapping) and all(isinstance(k, str) for k in zeta):
            return [int(zeta.get(s, 0)) for s in self.symbols]
        coeffs = [0] * self.r
        for k, v in zeta.items():
            if sum(k) != 1:
                raise PreconditionError("gamma_multinomial takes a linear combination of cycles")
            coeffs[k.index(1)] += v
        return coeffs

    def gamma_monomial(self, key: tuple, j: int) -> dict:
        """gamma_j of a single monomial prod_i gamma_(e_i)(Z_i), via
        gamma_j(x y) = x^j gamma_j(y) and gamma_j(gamma_e(Z)) = (je)!/(j! e!^j) gamma_(je)(Z)."""
        if sum(key) == 0:
            raise PreconditionError("gamma of a unit is not defined")
        if j == 0:
            return self.one()
        i0 = max(i for i, e in enumerate(key) if e)
        e = key[i0]
        coeff = math.factorial(j * e) // (math.factorial(j) * math.factorial(e) ** j)
        vec = [0] * self.r
        vec[i0] = j * e
        out = {tuple(vec): coeff} if sum(vec) <= self.d_max else {}
        rest = list(key)
        rest[i0] = 0
        if any(rest):
            out = self.mul(out, self.power({tuple(rest): 1}, j))
        return out

    def gamma(self, a: dict, m: int) -> dict:
        """gamma_m of an element of the augmentation ideal (addition formula over terms)."""
        if a.get(self.zero_vec):
            raise PreconditionError("gamma needs an element without unit component")
        table = [self.one()] + [{} for _ in range(m)]
        for key, v in a.items():
            pieces = [self.one()] + [self.scale(self.gamma_monomial(key, j), v ** j)
                                     for j in range(1, m + 1)]
            new = []
            for k in range(m + 1):
                acc: dict = {}
                for i in range(k + 1):
                    if table[k - i] and pieces[i]:
                        acc = self.add(acc, self.mul(table[k - i], pieces[i]))
                new.append(acc)
            table = new
        return table[m]

    def check_pd_axioms(self, max_degree: int, coeff_range: int = 2, limit: int | None = None) -> dict:
        """Exhaustively test the PD axioms on integer combinations of the symbols.

        Returns ``{"checked": n, "failures": [...]}``.
        """
        checked = 0
        failures = []
        D = min(max_degree, self.d_max)
        rng = range(-coeff_range, coeff_range + 1)
        zetas = [dict(zip(self.symbols, c)) for c in itertools.product(rng, repeat=self.r)]
        zetas = [z for z in zetas if any(z.values())]
        if limit is not None:
            zetas = zetas[:limit]

        def fail(name, **kw):
            failures.append({"axiom": name, **{k: str(v) for k, v in kw.items()}})

        for z in zetas:
            zl = self.linear(z)
            g = [self.gamma_multinomial(z, m) for m in range(D + 1)]
            checked += 1
            if g[0] != self.one():
                fail("gamma0", zeta=z)
            if g[1] != zl:
                fail("gamma1", zeta=z)
            for m in range(D + 1):
                if self.gamma(zl, m) != g[m]:
                    fail("general-gamma", zeta=z, m=m)
                if self.scale(g[m], math.factorial(m)) != self.power(zl, m):
                    fail("power", zeta=z, m=m)
                for n in range(D + 1 - m):
                    if self.mul(g[m], g[n]) != self.scale(g[m + n], math.comb(m + n, n)):
                        fail("product", zeta=z, m=m, n=n)
            for lam in (-2, -1, 2, 3):
                zz = {k: lam * v for k, v in z.items()}
                for m in range(D + 1):
                    if self.gamma_multinomial(zz, m) != self.scale(g[m], lam ** m):
                        fail("homogeneity", zeta=z, lam=lam, m=m)
            for m in range(1, D + 1):
                for n in range(1, D // m + 1):
                    lhs = self.gamma(g[n], m)
                    c = math.factorial(m * n) // (math.factorial(m) * math.factorial(n) ** m)
                    if lhs != self.scale(g[m * n], c):
                        fail("composition", zeta=z, m=m, n=n)
        # addition formula on pairs
        pairs = zetas[: min(len(zetas), 40)]
        for z in pairs:
            for w in pairs[::3]:
                s = {k: z[k] + w[k] for k in self.symbols}
                if not any(s.values()):
                    continue
                for m in range(D + 1):
                    rhs: dict = {}
                    for i in range(m + 1):
                        rhs = self.add(rhs, self.mul(self.gamma_multinomial(z, i),
                                                     self.gamma_multinomial(w, m - i)))
                    if self.gamma_multinomial(s, m) != rhs:
                        fail("addition", zeta=z, eta=w, m=m)
                checked += 1
        return {"checked": checked, "failures": failures}


def _qgamma(a: Element, d: int) -> Element:
    """a^d / d! over Q (no unit-freeness needed)."""
    out = a.ring.one(a.coords)
    for k in range(1, d + 1):
        out = (out * a).scale(mpq(1, k))
    return out


def gamma_operator_rhs(cb, zeta: Element, d: int, m: int) -> Element:
    """sum over (d_0, d_1, ...) with sum d_i = d and sum i d_i = m of
    gamma_(d_0)(zeta) prod_i gamma_(d_i)(dt_div(zeta, i))."""
    derivs = [zeta] + [cb.dt_div(zeta, i) for i in range(1, m + 1)]
    out = zeta.ring.zero(zeta.coords)
    for parts in compositions(d, m + 1):
        if sum(i * p for i, p in enumerate(parts)) != m:
            continue
        term = zeta.ring.one(zeta.coords)
        for i, p in enumerate(parts):
            if p:
                term = term * _qgamma(derivs[i], p)
            if not term:
                break
        out = out + term
    return out


def random_unit_free(cb, rng: random.Random, terms: int = 3, max_t: int = 2, max_u: int = 2) -> Element:
    """Small random element of A[t]<u> (gamma chart) without unit component."""
    G = cb.gring
    gens = [gd.name for gd in G.gens]
    out = G.zero("gamma")
    while not out:
        for _ in range(terms):
            t, u = rng.randint(0, max_t), rng.randint(0, max_u)
            g = {}
            if rng.random() < 0.5:
                g[rng.choice(gens)] = 1
            if not (t or u or g):
                t = 1
            out = out + G.monomial(g, t=t, u=u, coeff=rng.randint(-3, 3), coords="gamma")
    return out


def check_gamma_operator_interaction(cb, seed: int = 0, samples: int = 6, max_d: int = 3,
                                     max_m: int = 3) -> dict:
    """dt_div(gamma_d(zeta), m) against the expansion in gamma(dt_div(zeta, i))."""
    rng = random.Random(seed)
    failures = []
    checked = 0
    zetas = [cb.t("gamma") * cb.u("gamma")]
    zetas += [random_unit_free(cb, rng) for _ in range(samples)]
    for z in zetas:
        for d in range(0, max_d + 1):
            gd = _qgamma(z, d)
            for m in range(0, max_m + 1):
                checked += 1
                if cb.dt_div(gd, m) != gamma_operator_rhs(cb, z, d, m):
                    failures.append({"zeta": str(z), "d": d, "m": m})
    return {"checked": checked, "failures": failures}
