"""CH(C^[.]) modelled as R = A[t]<u>.

``t`` is the class of the base point p0 (in C^[1]) and ``u`` the class of C
(so ``u^[m]`` is C^[m]).  A coefficient ``y`` means one of two sections of the
Abel-Jacobi pushforward, recorded by the ``coords`` tag:

* ``"beta"``: y stands for s~(y), coefficients in the coweight basis;
* ``"gamma"``: y stands for s~'(y), coefficients in the grade basis.

In the gamma chart the grading by n of CH(C^[n]) is diagonal: a term has
degree ``grade(y) + i + j`` for ``y t^i u^[j]``.  The two charts are related by
s~(y) = sum_n (1 + psi u)^(-n) s~'(x_n), where x solves
sum_n (1 + psi c)^(-n) x_n = y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq

from .cinf_model import CInfModel
from .jac_model import ClassSpec, JacobianRing
from .pdpoly import (CoordinateMismatch, Element, PDError, PreconditionError, binom,
                     divided_power, substitute)


class LiftError(PDError):
    """No lift of the requested degree exists; ``residual`` holds the offending terms."""

    def __init__(self, msg: str, residual: Element | None = None):
        super().__init__(msg)
        self.residual = residual


class CBulModel:
    def __init__(self, cinf: CInfModel):
        self.cinf = cinf
        self.jac: JacobianRing = cinf.jac
        self.ring = self.jac.ring
        self.gring = self.jac.gring
        self._cache: dict = {}
        self._delta: dict = {}
        self._prepare_twists()

    # ------------------------------------------------------------ basics
    def t(self, coords: str = "gamma", power: int = 1) -> Element:
        return self._ring_for(coords).var("t", coords, power)

    def u(self, coords: str = "gamma", index: int = 1) -> Element:
        return self._ring_for(coords).var("u", coords, index)

    def psi(self, coords: str = "gamma") -> Element:
        return self._ring_for(coords).gen("psi", coords)

    def one(self, coords: str = "gamma") -> Element:
        return self._ring_for(coords).one(coords)

    def _ring_for(self, coords: str):
        if coords == "beta":
            return self.ring
        if coords == "gamma":
            return self.gring
        raise CoordinateMismatch(f"unknown chart {coords!r}")

    def _check(self, X: Element, coords: str | None = None):
        if X.coords not in ("beta", "gamma", None):
            raise CoordinateMismatch("expected an element of A[t]<u>")
        tag = X.coords or ("gamma" if X.ring is self.gring else "beta")
        if X.ring is not self._ring_for(tag):
            raise CoordinateMismatch("coefficients are in the wrong basis for the chart")
        if coords is not None and tag != coords:
            raise CoordinateMismatch(f"operator needs the {coords} chart, got {tag}")
        return tag

    def s_tilde(self, y: Element) -> Element:
        if y.ring is not self.ring or any(k[1] or k[2] or k[3] for k in y.terms):
            raise PreconditionError("s_tilde takes a coefficient in the coweight basis")
        return y.with_coords("beta")

    def s_tilde_prime(self, y: Element) -> Element:
        if any(k[1] or k[2] or k[3] for k in y.terms):
            raise PreconditionError("s_tilde_prime takes a coefficient")
        return self.jac.to_grade_basis(y).with_coords("gamma")

    # ------------------------------------------------------------ charts
    def _prepare_twists(self):
        G, R = self.gring, self.ring
        P = R.window.psi_order
        top = 2 * self.jac.g + 1
        psi_g = G.gen("psi")
        c_g = self.jac.to_grade_basis(self.jac.curve_class())
        inv = G.one() + psi_g * c_g
        inv_n = [G.one()]
        base = _geometric_inverse(inv)
        for n in range(1, top + 1):
            inv_n.append(inv_n[-1] * base)
        self._coef_twist = inv_n                       # (1 + psi c)^(-n) in A
        self._u_twist = {}
        for tag, ring in (("gamma", G), ("beta", R)):
            for n in range(-top, top + 1):
                e = ring.zero(tag)
                psik = ring.one()
                for k in range(0, P):
                    term = (psik * ring.var("u", tag, k)).scale(binom(-n, k) * math.factorial(k))
                    e = e + term
                    psik = psik * ring.gen("psi")
                self._u_twist[(tag, n)] = e            # (1 + psi u)^(-n)

    def u_twist(self, n: int, coords: str = "gamma") -> Element:
        """(1 + psi u)^(-n)."""
        return self._u_twist[(coords, n)]

    def _phi(self, x: Element) -> Element:
        out = self.gring.zero()
        G = self.gring
        for n in sorted({G.mgrade[k[0]] for k in x.terms}):
            xn = x.filter(lambda k, n=n: G.mgrade[k[0]] == n)
            out = out + xn * self._coef_twist[n]
        return out

    def _phi_inverse(self, y: Element) -> Element:
        x = y
        for _ in range(self.ring.window.psi_order + 2):
            err = y - self._phi(x)
            if not err:
                return x
            x = x + err
        raise ArithmeticError("chart conversion did not converge")

    @staticmethod
    def _group(X: Element) -> dict:
        groups: dict = {}
        for (gid, t, u, x), v in X.terms.items():
            groups.setdefault((t, u), {})[(gid, 0, 0, 0)] = v
        return groups

    def to_gamma(self, X: Element) -> Element:
        tag = self._check(X)
        if tag == "gamma":
            return X.with_coords("gamma")
        G = self.gring
        out = G.zero("gamma")
        for (t, u), terms in self._group(X).items():
            y = self.jac.to_grade_basis(Element(self.ring, terms, None, _trusted=True))
            x = self._phi_inverse(y)
            body = G.zero("gamma")
            for n in sorted({G.mgrade[k[0]] for k in x.terms}):
                xn = x.filter(lambda k, n=n: G.mgrade[k[0]] == n).with_coords("gamma")
                body = body + xn * self.u_twist(n, "gamma")
            out = out + body * G.monomial(t=t, u=u, coords="gamma")
        return out

    def to_beta(self, X: Element) -> Element:
        tag = self._check(X)
        if tag == "beta":
            return X.with_coords("beta")
        R, G = self.ring, self.gring
        out = R.zero("beta")
        for (t, u), terms in self._group(X).items():
            z = Element(G, terms, None, _trusted=True)
            body = R.zero("beta")
            for n in sorted({G.mgrade[k[0]] for k in z.terms}):
                zn = z.filter(lambda k, n=n: G.mgrade[k[0]] == n)
                y = self.jac.to_coweight_basis(zn * self._coef_twist[n]).with_coords("beta")
                body = body + y * self.u_twist(-n, "beta")
            out = out + body * R.monomial(t=t, u=u, coords="beta")
        return out

    def coords_convert(self, X: Element, to: str) -> Element:
        if to == "gamma":
            return self.to_gamma(X)
        if to == "beta":
            return self.to_beta(X)
        raise CoordinateMismatch(f"unknown chart {to!r}")

    # ------------------------------------------------------------ gradings
    def E_grading(self, X: Element) -> Element:
        """Multiply the CH(C^[n]) component by n."""
        tag = self._check(X)
        Xg = self.to_gamma(X)
        gr = self.gring.mgrade
        out = Xg.map_keys(lambda k, v: (k, v * (gr[k[0]] + k[1] + k[2])), "gamma")
        return out if tag == "gamma" else self.to_beta(out)

    def degrees(self, X: Element) -> set:
        Xg = self.to_gamma(X)
        gr = self.gring.mgrade
        return {gr[k[0]] + k[1] + k[2] for k in Xg.terms}

    def degree_component(self, X: Element, n: int) -> Element:
        tag = self._check(X)
        Xg = self.to_gamma(X)
        gr = self.gring.mgrade
        out = Xg.filter(lambda k: gr[k[0]] + k[1] + k[2] == n)
        return out if tag == "gamma" else self.to_beta(out)

    def fil_component(self, y: Element, m: int) -> Element:
        """Part of y in Fil^m, i.e. in grades >= m (returned in the basis of y)."""
        z = self.jac.to_grade_basis(y)
        gr = self.gring.mgrade
        z = z.filter(lambda k: gr[k[0]] >= m)
        return z if y.ring is self.gring else self.jac.to_coweight_basis(z)

    # ------------------------------------------------------------ operators
    def dt_div(self, X: Element, m: int) -> Element:
        """Divided t-derivative: t^r -> C(r, m) t^(r-m)."""
        self._check(X)
        if m < 0:
            raise PreconditionError("dt_div needs m >= 0")
        return X.map_keys(lambda k, v: ((k[0], k[1] - m, k[2], 0), v * math.comb(k[1], m))
                          if k[1] >= m else None)

    def _du(self, X: Element) -> Element:
        return X.map_keys(lambda k, v: ((k[0], k[1], k[2] - 1, 0), v) if k[2] else None)

    def du_gamma(self, X: Element) -> Element:
        """u-derivative in the gamma chart (P_{0,1}([p0] + psi))."""
        self._check(X, "gamma")
        return self._du(X)

    def du_beta(self, X: Element) -> Element:
        """u-derivative in the beta chart (D_u)."""
        self._check(X, "beta")
        return self._du(X)

    def t_dt(self, X: Element) -> Element:
        self._check(X)
        return X.map_keys(lambda k, v: (k, v * k[1]))

    def P01_p0(self, X: Element) -> Element:
        """Pullback along C^[n-1] -> C^[n], D -> D + p0."""
        self._check(X, "gamma")
        return self.du_gamma(X) - self.psi("gamma") * self.dt_div(X, 1)

    def D_tilde_u(self, X: Element) -> Element:
        self._check(X, "gamma")
        psi = self.psi("gamma")
        return self.du_gamma(X) - psi * self.t_dt(X) + psi * self.E_grading(X)

    def D_u(self, X: Element) -> Element:
        return self.u_twist(1, "gamma") * self.D_tilde_u(X)

    def Pi_t(self, X: Element) -> Element:
        """sum_n (-1)^n t^n dt_div(X, n)."""
        tag = self._check(X)
        R = X.ring
        out = R.zero(tag)
        for n in range(0, X.max_var(1) + 1):
            out = out + (R.var("t", tag, n) * self.dt_div(X, n)).scale((-1) ** n)
        return out

    def Pi_u(self, X: Element) -> Element:
        """sum_n (-1)^n u^[n] du^n(X), gamma chart."""
        self._check(X, "gamma")
        G = self.gring
        out = G.zero("gamma")
        D = X
        for n in range(0, X.max_var(2) + 1):
            out = out + (G.var("u", "gamma", n) * D).scale((-1) ** n)
            D = self._du(D)
        return out

    def K_project(self, X: Element) -> Element:
        return self.Pi_u(self.Pi_t(self.to_gamma(X)))

    # ------------------------------------------------------------ maps to C^[oo] and J
    def q_push(self, X: Element) -> Element:
        """Pushforward to C^[oo]: t -> 1, u -> [C], coefficients through s."""
        Xb = self.to_beta(X)
        Xb = Xb.map_keys(lambda k, v: ((k[0], 0, k[2], 0), v))
        return substitute(Xb, "u", self.cinf.class_C(), coords="x")

    def r_section(self, F: Element) -> Element:
        """Inverse of q_push on the t-free part (beta chart)."""
        return self.cinf.x_to_u(F)

    def sigma_tilde_push(self, X: Element) -> Element:
        """Pushforward to J: t -> [0], u^[m] -> w_m."""
        self._check(X)
        jac = self.jac
        out = self.ring.zero()
        for (t, u), terms in self._group(X).items():
            y = jac.to_coweight_basis(Element(X.ring, terms, None, _trusted=True))
            out = out + y * jac.w_class(u)
        return out

    # ------------------------------------------------------------ lifting
    def lift_to_degree(self, F: Element, n: int) -> Element:
        """The unique class on C^[n] whose image in C^[oo] is F (gamma chart)."""
        if n < 0:
            raise PreconditionError("lift_to_degree needs n >= 0")
        Y = self.to_gamma(self.r_section(F))
        gr = self.gring.mgrade
        bad = Y.filter(lambda k: gr[k[0]] + k[2] > n)
        if bad:
            hint = ""
            if all(gr[k[0]] > n for k in bad.terms):
                hint = " (residual is pure coefficient of grade > n)"
            raise LiftError(f"no lift to degree {n}{hint}", bad)
        return Y.map_keys(lambda k, v: ((k[0], n - gr[k[0]] - k[2], k[2], 0), v), "gamma")

    def degree_basis(self, n: int) -> list:
        """Monomial basis of CH(C^[n]) in the gamma chart."""
        G = self.gring
        out = []
        _enumerate_monos(G, n)
        for gid in range(len(G.monos)):
            w = G.mgrade[gid]
            if w > n:
                continue
            for u in range(0, n - w + 1):
                out.append((gid, n - w - u, u, 0))
        return out

    def lift_to_degree_solve(self, F: Element, n: int) -> Element:
        """Same as lift_to_degree, by an exact linear solve over the degree-n basis."""
        basis = self.degree_basis(n)
        images = [self.q_push(Element(self.gring, {b: mpq(1)}, "gamma", _trusted=True))
                  for b in basis]
        rows: dict = {}
        for j, im in enumerate(images):
            for k, v in im.terms.items():
                rows.setdefault(k, {})[j] = v
        rhs = dict(F.terms)
        keys = list(set(rows) | set(rhs))
        eqs = [(dict(rows.get(k, {})), mpq(rhs.get(k, 0))) for k in keys]
        sol = _solve_sparse(eqs, len(basis))
        if sol is None:
            raise LiftError(f"no lift to degree {n}")
        return Element(self.gring, {basis[j]: v for j, v in sol.items() if v}, "gamma")

    # ------------------------------------------------------------ modified diagonals
    def Delta_push(self, n: int, spec: ClassSpec) -> Element:
        """Pushforward of a along the n-fold diagonal C -> C^[n] (gamma chart)."""
        key = (n, spec.name)
        if key not in self._delta:
            F = self.cinf.push_N_inf(self.cinf.fa_build(spec.iota, spec.p0star), n)
            self._delta[key] = self.lift_to_degree(F, n)
        return self._delta[key]

    def t_plus_psi_u(self) -> Element:
        return self.t("gamma") + self.psi("gamma") * self.u("gamma")

    def Gamma_n(self, n: int, spec: ClassSpec) -> Element:
        """sum_k (-1)^k C(n,k) (t + psi u)^k Delta_{n-k}(a)."""
        key = ("Gamma", n, spec.name)
        if key not in self._cache:
            s = self.t_plus_psi_u()
            out = self.gring.zero("gamma")
            p = self.one()
            for k in range(0, n + 1):
                out = out + (p * self.Delta_push(n - k, spec)).scale((-1) ** k * binom(n, k))
                p = p * s
            self._cache[key] = out
        return self._cache[key]

    def Gamma_nat(self, n: int, spec: ClassSpec) -> Element:
        """Gamma_n(a) + (-u)^n psi^(n-1) p0^*(a); Gamma_0 for n = 0."""
        if n == 0:
            return self.Gamma_n(0, spec)
        G = self.gring
        corr = G.var("u", "gamma", n).scale((-1) ** n * math.factorial(n))
        for _ in range(n - 1):
            corr = corr * G.gen("psi")
        return self.Gamma_n(n, spec) + corr * self.s_tilde_prime(spec.p0star)

    # ------------------------------------------------------------ reconstruction
    def fa_of(self, X: Element, n: int | None = None) -> Element:
        """Image in C^[oo] of a degree-n class, rebuilt from pullbacks along D -> D + p0.

        sum_m sigma~(P01^m X) exp(psi x)^(n-m) gamma_m((exp(psi x) - 1)/psi)
        """
        Xg = self.to_gamma(X)
        degs = self.degrees(Xg)
        if n is None:
            if len(degs) > 1:
                raise PreconditionError("fa_of needs a homogeneous class")
            n = degs.pop() if degs else 0
        elif degs - {n}:
            raise PreconditionError(f"class is not of degree {n}")
        ci = self.cinf
        q = ci.exp_minus_one_over_psi()
        out = self.ring.zero("x")
        Y = Xg
        for m in range(0, n + 1):
            if Y:
                out = out + ci.s_embed(self.sigma_tilde_push(Y)) * ci.exp_psi_x(n - m) \
                    * divided_power(q, m)
            Y = self.P01_p0(Y)
        return out


def _geometric_inverse(a: Element) -> Element:
    """1/a for a = 1 + nilpotent."""
    one = a.ring.one(a.coords)
    n = a - one
    out = one
    p = one
    while True:
        p = p * (-n)
        if not p:
            return out
        out = out + p


def _enumerate_monos(G, n: int):
    """Intern every admissible grade-basis monomial of weight <= n."""
    gens = G.gens

    def rec(i, vec):
        if i == len(gens):
            G.intern(tuple(vec))
            return
        e = 0
        while True:
            vec[i] = e
            trial = tuple(vec[:i + 1]) + (0,) * (len(gens) - i - 1)
            w = sum(a * gd.grade for a, gd in zip(trial, gens))
            if w > n or e > 2 * G.window.g + G.window.d + 2:
                break
            rec(i + 1, vec)
            e += 1
        vec[i] = 0

    rec(0, [0] * len(gens))


def _solve_sparse(eqs, nvars: int):
    """Exact Gaussian elimination; returns {var: value} or None if inconsistent."""
    pivots: list = []
    for row, rhs in eqs:
        row = dict(row)
        for pv, prow, prhs in pivots:
            f = row.get(pv)
            if f:
                for j, v in prow.items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                rhs = rhs - f * prhs
        if not row:
            if rhs:
                return None
            continue
        pv = min(row)
        inv = 1 / row[pv]
        row = {j: v * inv for j, v in row.items()}
        rhs = rhs * inv
        new = []
        for qv, qrow, qrhs in pivots:
            f = qrow.get(pv)
            if f:
                for j, v in row.items():
                    nv = qrow.get(j, 0) - f * v
                    if nv:
                        qrow[j] = nv
                    else:
                        qrow.pop(j, None)
                qrhs = qrhs - f * rhs
            new.append((qv, qrow, qrhs))
        new.append((pv, row, rhs))
        pivots = new
    sol = {}
    for pv, row, rhs in pivots:
        if len(row) > 1:
            raise LiftError("lift is not unique")
        sol[pv] = rhs
    return sol


class TautPresentation:
    """Polynomial in the symbols t, psi and Delta_k(a), with rational coefficients.

    ``u^[m]`` is stored as Delta_1(C)^m / m!.  A term key is
    ``(t_exp, psi_exp, ((k, name), exp), ...)`` with the Delta factors sorted.
    """
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: mpq(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, q) -> "TautPresentation":
        return cls({(0, 0): q})

    @classmethod
    def t(cls, e: int = 1) -> "TautPresentation":
        return cls({(e, 0): 1})

    @classmethod
    def psi(cls, e: int = 1) -> "TautPresentation":
        return cls({(0, e): 1})

    @classmethod
    def Delta(cls, k: int, name: str) -> "TautPresentation":
        return cls({(0, 0, ((k, name), 1)): 1})

    @classmethod
    def u(cls, m: int = 1) -> "TautPresentation":
        return cls({(0, 0, ((1, "C"), m)) if m else (0, 0): mpq(1, math.factorial(m))})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TautPresentation(out)

    def __neg__(self):
        return TautPresentation({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        return TautPresentation({k: v * q for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TautPresentation):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                f: dict = {}
                for sym, e in k1[2:] + k2[2:]:
                    f[sym] = f.get(sym, 0) + e
                key = (k1[0] + k2[0], k1[1] + k2[1]) + tuple(sorted(f.items()))
                out[key] = out.get(key, 0) + v1 * v2
        return TautPresentation(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TautPresentation.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, TautPresentation) and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        parts = []
        for k, v in sorted(self.terms.items()):
            syms = [f"t^{k[0]}"] if k[0] else []
            syms += [f"psi^{k[1]}"] if k[1] else []
            syms += [f"Delta_{s[0]}({s[1]})" + (f"^{e}" if e > 1 else "") for s, e in k[2:]]
            parts.append(f"{v}*" + "*".join(syms) if syms else str(v))
        return " + ".join(parts) or "0"


def taut_push_N(x: TautPresentation, N: int) -> TautPresentation:
    """[N]_*: Delta_k(a) -> Delta_(Nk)(a), t -> t^N, psi fixed."""
    if N < 0:
        raise PreconditionError("taut_push_N needs N >= 0")
    out = {}
    for k, v in x.terms.items():
        key = (k[0] * N, k[1]) + tuple(sorted(((s[0] * N, s[1]), e) for s, e in k[2:]))
        out[key] = out.get(key, 0) + v
    return TautPresentation(out)


def taut_evaluate(x: TautPresentation, cb: CBulModel) -> Element:
    """Evaluate a presentation in the gamma chart."""
    G = cb.gring
    out = G.zero("gamma")
    powers: dict = {}

    def pw(sym, e):
        key = (sym, e)
        if key not in powers:
            base = cb.Delta_push(sym[0], cb.jac.spec(sym[1]))
            powers[key] = base if e == 1 else pw(sym, e - 1) * base
        return powers[key]

    for k, v in x.terms.items():
        term = G.monomial({"psi": k[1]} if k[1] else None, t=k[0], coeff=v, coords="gamma")
        for sym, e in k[2:]:
            if not term:
                break
            term = term * pw(sym, e)
        out = out + term
    return out


def gamma_presentation(n: int, spec: ClassSpec, nat: bool = True) -> TautPresentation:
    """Gamma_n(a) (or Gamma_n^nat(a)) as a presentation."""
    TP = TautPresentation
    s = TP.t() + TP.psi() * TP.u()
    out = TP()
    for k in range(0, n + 1):
        out = out + (s ** k * TP.Delta(n - k, spec.name)).scale((-1) ** k * binom(n, k))
    if nat and n >= 1:
        p0 = TP()
        ring = spec.p0star.ring
        for (gid, _, _, _), v in spec.p0star.terms.items():
            exps = ring.gen_exponents(gid)
            if set(exps) - {"psi"}:
                raise PreconditionError("p0-pullback must be a polynomial in psi")
            p0 = p0 + TP.psi(exps.get("psi", 0)).scale(v)
        out = out + (TP.u(1) ** n * TP.psi(n - 1) * p0).scale((-1) ** n)
    return out
