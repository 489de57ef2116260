"""Identity suites behind ``jacrings verify``.

Each suite is a list of checks.  A check returns pairs ``(lhs, rhs)`` of
elements (or plain booleans); the record status is

* ``exact`` when every pair agrees,
* ``holds-mod-psi^k`` when d > 0 and every difference has psi-order >= k >= 1,
* ``failed`` otherwise (with the first offending difference as witness),
* ``skipped`` when the check does not apply to the parameters.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from gmpy2 import mpq

from .cbul_model import CBulModel, LiftError, gamma_presentation, taut_evaluate, taut_push_N
from .cinf_model import CInfModel, log_psi
from .jac_model import JacobianRing, ModelConfig
from .pdpoly import (CapOverflowError, Element, PDError, divided_power, psi_order, to_text)
from .pdstruct import (FormalCycleAlgebra, _qgamma, check_gamma_operator_interaction,
                       random_unit_free)

SUITES = ("cinf", "cbullet", "pd", "filtration", "gk")


class Skip(Exception):
    pass


@dataclass
class Context:
    g: int
    d: int
    seed: int = 0
    u_cap: int | None = None

    def __post_init__(self):
        self.config = ModelConfig(self.g, self.d, ("p1",), u_cap=self.u_cap)
        self.jac = JacobianRing(self.config)
        self.ci = CInfModel(self.jac)
        self.cb = CBulModel(self.ci)

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    @property
    def specs(self):
        return [self.jac.spec_curve(), self.jac.spec_point("p1"), self.jac.spec_base_point()]


def _witness(diff: Element, limit: int = 240) -> str:
    text = to_text(diff)
    return text if len(text) <= limit else text[:limit] + " ..."


def _judge(results, d: int):
    """Fold check results into (status, witness)."""
    worst = None
    for r in results:
        if isinstance(r, bool):
            if not r:
                return "failed", "boolean check failed"
            continue
        if isinstance(r, str):
            return "failed", r
        lhs, rhs = r
        diff = lhs - rhs
        if not diff:
            continue
        k = psi_order(diff)
        if d == 0 or k == 0:
            return "failed", _witness(diff)
        worst = k if worst is None else min(worst, k)
    if worst is None:
        return "exact", None
    return f"holds-mod-psi^{worst}", None


def run_check(ctx: Context, name: str, ref: str, params: dict, fn) -> dict:
    t0 = time.perf_counter()
    cap_hit = False
    try:
        status, witness = _judge(list(fn()), ctx.d)
    except Skip as exc:
        status, witness = "skipped", str(exc)
    except CapOverflowError as exc:
        status, witness, cap_hit = "failed", f"u-cap exceeded: {exc}", True
    except LiftError as exc:
        res = f"; residual {_witness(exc.residual)}" if exc.residual is not None else ""
        status, witness = "failed", f"{exc}{res}"
    except PDError as exc:
        status, witness = "failed", f"{type(exc).__name__}: {exc}"
    rec = {"name": name, "formula": ref, "params": params, "status": status,
           "elapsed": round(time.perf_counter() - t0, 4), "witness": witness}
    if cap_hit:
        rec["u_cap_hit"] = True
    return rec


# ---------------------------------------------------------------- random inputs

def random_x_element(jac: JacobianRing, rng: random.Random, terms: int = 4) -> Element:
    R = jac.ring
    names = [gd.name for gd in R.gens]
    out = R.zero("x")
    for _ in range(terms):
        g = {rng.choice(names): 1} if rng.random() < 0.6 else {}
        out = out + R.monomial(g, x=rng.randint(0, 3), coeff=rng.randint(-4, 4), coords="x")
    return out


def random_bullet(cb: CBulModel, rng: random.Random, coords: str = "gamma", terms: int = 4) -> Element:
    G = cb._ring_for(coords)
    names = [gd.name for gd in G.gens]
    out = G.zero(coords)
    for _ in range(terms):
        g = {rng.choice(names): 1} if rng.random() < 0.6 else {}
        out = out + G.monomial(g, t=rng.randint(0, 2), u=rng.randint(0, 2),
                               coeff=rng.randint(-4, 4), coords=coords)
    return out


# ---------------------------------------------------------------- C^[oo]

def cinf_checks(ctx: Context):
    g, d = ctx.g, ctx.d
    jac, ci, cb = ctx.jac, ctx.ci, ctx.cb
    top = 2 * g + d
    P = {"g": g, "d": d}

    def kv():
        named = [cb.u("gamma", n) for n in range(0, top + 1)]
        for sp in ctx.specs[:2]:
            named += [cb.Delta_push(n, sp) for n in range(0, top + 1)]
        C, p = ctx.specs[0], ctx.specs[1]
        for i in range(1, top):
            for j in range(1, top + 1 - i):
                if i <= j:
                    named.append(cb.Delta_push(i, C) * cb.Delta_push(j, C))
                named.append(cb.Delta_push(i, C) * cb.Delta_push(j, p))
        for X in named:
            yield cb.q_push(X), cb.fa_of(X)

    def cn_pd():
        for n in range(0, top + 1):
            yield ci.class_Cn(n), divided_power(ci.class_C(), n)
            yield cb.q_push(cb.u("gamma", n)), ci.class_Cn(n)

    def l_formula():
        yield ci.x(), log_psi(ci.class_C()) - log_psi(ci.s_embed(jac.curve_class()))
        yield ci.x_to_u(ci.class_C()), cb.u("beta")
        rng = ctx.rng("chart")
        for F in [ci.x(), ci.class_C(), ci.class_Gamma()] + [random_x_element(jac, rng) for _ in range(4)]:
            yield ci.u_to_x(ci.x_to_u(F)), F

    def gamma_l():
        e = ci.exp_psi_x(-1)
        inner = ci.exp_minus_one_over_psi(-1) + ci.class_C() * e
        yield ci.class_Gamma(), divided_power(inner, g)

    def gamma_taut():
        C = ci.class_C()
        base = log_psi(C)
        for n in (2, 3, 4):
            inner = (log_psi(ci.push_N_inf(C, n)) - base.scale(n)).scale(mpq(1, n))
            yield ci.class_Gamma().scale((n - 1) ** g), divided_power(inner, g)

    def gamma_basic():
        yield ci.sigma_push(ci.class_Gamma()), jac.jac_fundamental()
        yield ci.xi_cap(ci.class_Gamma()), ci.ring.zero("x")
        yield ci.sigma_push(ci.class_C()), jac.curve_class()
        yield ci.xi_cap(ci.class_C()), ci.exp_psi_x() * ci.s_embed(jac.ring.one() + jac.psi() * jac.curve_class())

    def derivation():
        rng = ctx.rng("xi")
        for _ in range(6):
            F, G = random_x_element(jac, rng), random_x_element(jac, rng)
            yield ci.xi_cap(F * G), ci.xi_cap(F) * G + F * ci.xi_cap(G)

    def push_compat():
        rng = ctx.rng("push")
        for N in (0, 1, 2, 3):
            y = jac.curve_class() * jac.curve_class() + jac.iota_point("p1")
            yield ci.push_N_inf(ci.s_embed(y), N), ci.s_embed(jac.push_N(y, N))
            F, G = random_x_element(jac, rng), random_x_element(jac, rng)
            yield ci.push_N_inf(F * G, N), ci.push_N_inf(F, N) * ci.push_N_inf(G, N)

    def beauville():
        C = ci.class_C()
        yield ci.beauville_component_inf(C, 1, -1), ci.x()
        total = ci.ring.zero("x")
        for j in range(-1, 2 * g + 1):
            comp = ci.beauville_component_inf(C, 1, j)
            total = total + comp
            if j >= 0:
                rhs = ci.ring.monomial({"psi": 1 + j}, x=2 + j, coords="x")
                for n in range(0, j + 1):
                    k = j - n + 2
                    if 2 <= k <= 2 * g:
                        rhs = rhs + ci.ring.monomial({"psi": n, f"c{k}": 1}, x=n, coords="x")
                yield comp, rhs
        yield total, C

    return [
        ("kv_inversion", "q_*(X) = sum_m sigma~(P01^m X) e^((n-m)psi x) gamma_m((e^(psi x)-1)/psi)", P, kv),
        ("divided_powers_of_C", "[C^[n]] = gamma_n([C])", P, cn_pd),
        ("L_formula", "L = (log(1+psi[C]) - log(1+psi s c))/psi; x<->u charts invert", P, l_formula),
        ("Gamma_in_L", "s[J] = ((e^(-psi L)-1)/psi + [C] e^(-psi L))^[g]", P, gamma_l),
        ("Gamma_from_taut", "(n-1)^g s[J] = ((log(1+psi[n][C]) - n log(1+psi[C]))/(n psi))^[g]", P, gamma_taut),
        ("sigma_xi_basics", "sigma_* s[J] = [J], xi s[J] = 0, xi [C] = e^(psi x) s(1+psi c)", P, gamma_basic),
        ("xi_derivation", "xi(FG) = xi(F)G + F xi(G)", P, derivation),
        ("push_compatibility", "[N]_* s = s [N]_*, [N]_* multiplicative", P, push_compat),
        ("beauville_components_of_C", "[C]_(j) = psi^(1+j) x^[2+j] + sum_n psi^n s(c_(j-n+2)) x^[n]", P, beauville),
    ]


# ---------------------------------------------------------------- C^[.]

def cbullet_checks(ctx: Context):
    g, d = ctx.g, ctx.d
    jac, ci, cb = ctx.jac, ctx.ci, ctx.cb
    P = {"g": g, "d": d}
    nmax = 2 * g + 2

    def project():
        for sp in ctx.specs:
            for n in range(0, nmax + 1):
                yield cb.K_project(cb.Delta_push(n, sp)), cb.Gamma_nat(n, sp)

    def in_K():
        for sp in ctx.specs:
            for n in range(0, nmax + 1):
                X = cb.Gamma_nat(n, sp)
                yield not any(k[1] or k[2] for k in X.terms)
                yield cb.degrees(X) <= {n}
                yield cb.sigma_tilde_push(X), (jac.delta_image(n, sp) if n else jac.pi_push(sp))

    def inversion():
        s = cb.t_plus_psi_u()
        for sp in ctx.specs[:2]:
            for m in range(0, nmax + 1):
                rhs = cb.gring.zero("gamma")
                for n in range(0, m + 1):
                    rhs = rhs + (s ** (m - n) * cb.Gamma_n(n, sp)).scale(math.comb(m, n))
                yield cb.Delta_push(m, sp), rhs

    def ladder():
        for sp in ctx.specs:
            for n in range(0, nmax + 1):
                D = cb.Delta_push(n, sp)
                for m in range(0, n + 2):
                    rhs = cb.Delta_push(n - m, sp).scale(math.comb(n, m)) if m <= n else cb.gring.zero("gamma")
                    yield cb.dt_div(D, m), rhs

    def p01():
        for sp in ctx.specs:
            p0 = cb.s_tilde_prime(sp.p0star)
            for n in range(0, nmax + 1):
                rhs = (p0 * cb.t("gamma", n - 1)).scale(n) if n else cb.gring.zero("gamma")
                yield cb.P01_p0(cb.Delta_push(n, sp)), rhs

    def degrees():
        for sp in ctx.specs:
            for n in range(0, nmax + 1):
                D = cb.Delta_push(n, sp)
                yield cb.E_grading(D), D.scale(n)
                yield cb.q_push(D), ci.push_N_inf(ci.fa_build(sp.iota, sp.p0star), n)

    def lift_oracle():
        for sp in ctx.specs[:2]:
            for n in range(0, 3):
                F = ci.push_N_inf(ci.fa_build(sp.iota, sp.p0star), n)
                yield cb.lift_to_degree_solve(F, n), cb.lift_to_degree(F, n)

    def gamma_comp():
        C = jac.spec_curve()
        lhs = cb.to_gamma(cb.s_tilde(log_psi(jac.curve_class())))
        rhs = cb.gring.zero("gamma")
        for n in range(2, 2 * g + 1):
            rhs = rhs + (cb.u_twist(n) * cb.Gamma_nat(n, C)).scale(mpq((-1) ** n, n))
        yield lhs, rhs

    def leibniz():
        rng = ctx.rng("leibniz")
        for _ in range(5):
            X, Y = random_bullet(cb, rng), random_bullet(cb, rng)
            for m in range(0, 4):
                rhs = cb.gring.zero("gamma")
                for i in range(m + 1):
                    rhs = rhs + cb.dt_div(X, i) * cb.dt_div(Y, m - i)
                yield cb.dt_div(X * Y, m), rhs
            yield cb.du_gamma(X * Y), cb.du_gamma(X) * Y + X * cb.du_gamma(Y)
            yield cb.P01_p0(X * Y), cb.P01_p0(X) * Y + X * cb.P01_p0(Y)
            Xb, Yb = cb.to_beta(X), cb.to_beta(Y)
            yield cb.du_beta(Xb * Yb), cb.du_beta(Xb) * Yb + Xb * cb.du_beta(Yb)

    def operators():
        G = cb.gring
        psi, t, u = cb.psi(), cb.t(), cb.u()
        yield cb.D_tilde_u(t), G.zero("gamma")
        yield cb.D_tilde_u(u), cb.one() + psi * u
        rng = ctx.rng("ops")
        for _ in range(5):
            X = random_bullet(cb, rng)
            for m in range(0, 7):
                yield cb.D_tilde_u(cb.dt_div(X, m)), cb.dt_div(cb.D_tilde_u(X), m)
            Xb = cb.to_beta(X)
            lhs = cb.to_beta(cb.du_gamma(X))
            rhs = cb.u_twist(-1, "beta") * cb.du_beta(Xb) + cb.psi("beta") * cb.t_dt(Xb) \
                - cb.psi("beta") * cb.E_grading(Xb)
            yield lhs, rhs
        gens = [gd.name for gd in G.gens if not gd.is_psi]
        samples = [G.gen(n, "gamma") for n in gens]
        samples += [G.gen(a, "gamma") * G.gen(b, "gamma") for a in gens for b in gens if a <= b]
        for k in samples:
            if not k:
                continue
            n = cb.degrees(k).pop()
            yield cb.D_u(cb.u_twist(n) * k), G.zero("gamma")

    def projectors():
        rng = ctx.rng("proj")
        for _ in range(6):
            X = random_bullet(cb, rng)
            yield cb.Pi_t(X), X.filter(lambda k: k[1] == 0)
            yield cb.Pi_u(X), X.filter(lambda k: k[2] == 0)
            Y = random_bullet(cb, rng)
            F = cb.q_push(Y)
            rhs = cb.gring.zero("gamma")
            one_minus_t = cb.one() - cb.t()
            for n in range(0, Y.max_var(1) + 1):
                rhs = rhs + one_minus_t ** n * cb.dt_div(Y, n)
            yield cb.to_gamma(cb.r_section(F)), rhs

    def charts():
        rng = ctx.rng("charts")
        for _ in range(5):
            X = random_bullet(cb, rng, "beta")
            yield cb.to_beta(cb.to_gamma(X)), X
            Y = random_bullet(cb, rng, "gamma")
            yield cb.to_gamma(cb.to_beta(Y)), Y
            yield cb.q_push(Y), cb.q_push(cb.to_beta(Y))
            yield cb.sigma_tilde_push(Y), cb.sigma_tilde_push(cb.to_beta(Y))
        for y in (jac.curve_class(), jac.jac_fundamental(), jac.iota_point("p1") * jac.curve_class()):
            yield cb.sigma_tilde_push(cb.s_tilde(y)), y
            yield cb.sigma_tilde_push(cb.s_tilde_prime(y)), y
            yield cb.q_push(cb.s_tilde(y)), ci.s_embed(y)

    def top_dim():
        Jc = jac.jac_fundamental()
        sJ = cb.to_gamma(cb.s_tilde(Jc))
        yield sJ, cb.u_twist(2 * g) * cb.s_tilde_prime(Jc)
        yield cb.fil_component(Jc, 2 * g), Jc
        for m in range(0, jac.window.psi_order + 1):
            rhs = (cb.u("gamma", m) * cb.psi() ** m * cb.s_tilde_prime(Jc)).scale(
                (-1) ** m * math.prod(range(2 * g, 2 * g + m)))
            yield cb.degree_component(sJ, 2 * g + m), rhs

    def splitting():
        C = jac.spec_curve()
        for n in range(2, 2 * g + 1):
            yield jac.delta_image(n, C), jac.delta_image(n, C, "stirling")

    return [
        ("Delta_projection", "Pi_u Pi_t Delta_n(a) = Gamma^nat_n(a)", dict(P, n_max=nmax), project),
        ("Gamma_nat_in_K", "Gamma^nat_n(a) is t,u-free of degree n with sigma~ = delta_n(a)", dict(P, n_max=nmax), in_K),
        ("binomial_inversion", "Delta_m = sum_n C(m,n)(t+psi u)^(m-n) Gamma_n", dict(P, n_max=nmax), inversion),
        ("dt_ladder", "dt^[m] Delta_n = C(n,m) Delta_(n-m)", dict(P, n_max=nmax), ladder),
        ("P01_on_Delta", "P01([p0]) Delta_n(a) = n p0^*(a) t^(n-1)", dict(P, n_max=nmax), p01),
        ("Delta_degree_and_image", "E Delta_n = n Delta_n, q_* Delta_n = [n]_* f_a", dict(P, n_max=nmax), degrees),
        ("lift_linear_solve", "closed-form lift equals the exact linear solve", dict(P, n_max=2), lift_oracle),
        ("s_of_log_curve", "s~(log(1+psi c)/psi) = sum_n (-1)^n (1+psi u)^(-n) Gamma^nat_n(C)/n", P, gamma_comp),
        ("leibniz_rules", "dt^[m], du, P01 obey the Leibniz rules", P, leibniz),
        ("operator_algebra", "D~u t = 0, D~u u = 1+psi u, [D~u, dt^[m]] = 0, D_u kills (1+psi u)^(-n) K^[n]", P, operators),
        ("projectors_and_r", "Pi_t, Pi_u evaluate at 0; r q_* Y = sum (1-t)^n dt^[n] Y", P, projectors),
        ("chart_round_trips", "beta <-> gamma, sigma~ s~ = sigma~ s~' = id", P, charts),
        ("top_degree", "s~[J] = (1+psi u)^(-2g) s~'[J]; [J] in Fil^(2g)", P, top_dim),
        ("stirling_splitting_agreement", "exact delta_n(C) vs psi-free Stirling part", P, splitting),
    ]


# ---------------------------------------------------------------- filtration

def filtration_checks(ctx: Context):
    g, d = ctx.g, ctx.d
    jac, cb = ctx.jac, ctx.cb
    P = {"g": g, "d": d}
    C = jac.spec_curve()

    def main_lemma():
        for n in range(2, min(3, 2 * g) + 1):
            pres = gamma_presentation(n, C)
            x = taut_evaluate(pres, cb)
            yield x, cb.Gamma_nat(n, C)
            for N in (2, 3):
                y = taut_evaluate(taut_push_N(pres, N), cb)
                top = (N - 1) * n
                yield cb.dt_div(y, top), x.scale(N ** n)
                for j in range(top + 1, y.max_var(1) + 2):
                    yield cb.dt_div(y, j), cb.gring.zero("gamma")
                rq = cb.to_gamma(cb.r_section(cb.q_push(y)))
                yield cb.degree_component(rq, n), x.scale(N ** n)
                yield min(cb.degrees(rq)) >= n

    def push_symbols():
        from .cbul_model import TautPresentation as TP
        for N in (2, 3):
            yield taut_evaluate(taut_push_N(TP.u(), N), cb), cb.Delta_push(N, C)
            yield taut_evaluate(taut_push_N(TP.t(), N), cb), cb.t("gamma", N)

    def compatibility():
        G = jac.gring
        for gid in range(len(jac.ring.monos)):
            y = jac.ring.element({(gid, 0, 0, 0): 1})
            cw = jac.ring.mcoweight[gid]
            z = jac.to_grade_basis(y)
            yield all(G.mgrade[k[0]] >= cw for k in z.terms)
            yield jac.to_coweight_basis(z), y
        for gid in range(len(G.monos)):
            z = G.element({(gid, 0, 0, 0): 1})
            y = jac.to_coweight_basis(z)
            yield all(jac.ring.mcoweight[k[0]] >= G.mgrade[gid] for k in y.terms)

    def eigen():
        G = jac.gring
        for N in (2, 3):
            for gid in range(len(G.monos)):
                n = G.mgrade[gid]
                z = G.element({(gid, 0, 0, 0): 1})
                diff = jac.to_grade_basis(jac.push_N(jac.to_coweight_basis(z), N)) - z.scale(N ** n)
                yield all(G.mgrade[k[0]] > n for k in diff.terms)

    return [
        ("pushforward_on_Gamma", "dt^[(N-1)n]([N]_* x) = N^n x and higher dt^[j] vanish, x = Gamma^nat_n(C)", P, main_lemma),
        ("push_symbol_map", "[N]_* u = Delta_N(C), [N]_* t = t^N", P, push_symbols),
        ("coweight_vs_grade", "Fil^m = coweight >= m = grade >= m", P, compatibility),
        ("grade_unipotence", "([N]_* - N^n) maps grade n into grade > n", P, eigen),
    ]


# ---------------------------------------------------------------- PD structure

def pd_checks(ctx: Context):
    P = {"g": ctx.g, "d": ctx.d}
    cb = ctx.cb

    def integral():
        A = FormalCycleAlgebra(("Z1", "Z2"), 8)
        res = A.check_pd_axioms(4)
        yield res["checked"] > 0 and not res["failures"]
        A3 = FormalCycleAlgebra(("Z1", "Z2", "Z3"), 6)
        res = A3.check_pd_axioms(3, 1)
        yield not res["failures"] or str(res["failures"][:2])

    def rational():
        rng = ctx.rng("pd")
        for _ in range(4):
            a, b = random_unit_free(cb, rng), random_unit_free(cb, rng)
            yield divided_power(a, 0), cb.one()
            yield divided_power(a, 1), a
            for m in range(0, 4):
                for n in range(0, 4 - m):
                    yield divided_power(a, m) * divided_power(a, n), divided_power(a, m + n).scale(math.comb(m + n, n))
                rhs = cb.gring.zero("gamma")
                for i in range(m + 1):
                    rhs = rhs + divided_power(a, i) * divided_power(b, m - i)
                yield divided_power(a + b, m), rhs
                yield divided_power(a.scale(3), m), divided_power(a, m).scale(3 ** m)
                yield divided_power(a, m).scale(math.factorial(m)), a ** m
            for m in range(1, 3):
                for n in range(1, 3):
                    c = math.factorial(m * n) // (math.factorial(m) * math.factorial(n) ** m)
                    yield divided_power(divided_power(a, n), m), divided_power(a, m * n).scale(c)

    def interaction():
        res = check_gamma_operator_interaction(cb, seed=ctx.seed)
        yield not res["failures"] or str(res["failures"][:1])

    return [
        ("pd_axioms_integral", "gamma_0 = 1, gamma_1 = id, products, addition, homogeneity, composition over Z", P, integral),
        ("pd_axioms_rational", "the same axioms for divided powers in A[t]<u>", P, rational),
        ("pd_vs_dt", "dt^[m] gamma_d(z) = sum prod gamma_(d_i)(dt^[i] z)", P, interaction),
    ]


# ---------------------------------------------------------------- divisors

def gk_checks(ctx: Context):
    from .gk import DivisorSpec, GKModel
    g, d = ctx.g, ctx.d
    cases = sorted({(2, 1)} | ({(2 * g - 2, 1)} if 2 * g - 2 >= 1 else set()))
    out = []
    for deg, r in cases:
        P = {"g": g, "d": d, "deg": deg, "r": r}

        def build(deg=deg, r=r):
            if d != 0:
                raise Skip("divisor relations are modelled over a field only (d = 0)")
            pts = tuple(f"p{i}" for i in range(1, deg + 1))
            jac = JacobianRing(ModelConfig(g, 0, pts, u_cap=ctx.u_cap))
            cb = CBulModel(CInfModel(jac))
            return GKModel(cb, DivisorSpec(pts, r))

        def consistency(build=build):
            gk = build()
            for N, s in gk.valid_pairs():
                res = gk.gk_consistency(N, s)
                yield res["expansion"]
                yield res["separation"]
                yield res["relation"]

        def pushed(build=build):
            gk = build()
            cw = gk.jac.ring.mcoweight
            for N, s in gk.valid_pairs():
                y = gk.cb.sigma_tilde_push(gk.gk_relation_1(N, s))
                yield y.filter(lambda k: cw[k[0]] == N), gk.gk_relation_2(N, s)

        def classes(build=build):
            gk = build()
            cb, k = gk.cb, gk.D.deg
            t = cb.t
            D = cb.gring.zero("gamma")
            for i in range(k + 1):
                D = D + gk.ebar_class(i) * t("gamma", k - i)
                alt = cb.gring.zero("gamma")
                for j in range(i + 1):
                    alt = alt + (gk.e_class(i - j) * t("gamma", j)).scale((-1) ** j * math.comb(k - i + j, j))
                yield gk.ebar_class(i), alt
            yield D, gk.divisor_class()
            for M in range(k + 1):
                yield gk.binomial_bridge(M)
            yield gk.cor4_relation(), gk.cor4_from_id1()
            sc = cb.to_gamma(cb.s_tilde(gk.jac.curve_class()))
            for b in range(2, 2 * g + 1):
                yield cb.degree_component(sc, b), gk.U(b, 1).scale((-1) ** b)

        out += [
            (f"gk_expansion[deg={deg},r={r}]", "degree N+r-s part of sum_i ebar_i (u - s~c)^r, u-power separation", P, consistency),
            (f"gk_pushforward[deg={deg},r={r}]", "coweight-N part of sigma~(relation 1) = relation 2", P, pushed),
            (f"gk_divisor_classes[deg={deg},r={r}]", "[D] = sum ebar_i t^(d-i), bridge to e_M, Delta form of the s=1 relation", P, classes),
        ]
    return out


SUITE_BUILDERS = {
    "cinf": cinf_checks,
    "cbullet": cbullet_checks,
    "pd": pd_checks,
    "filtration": filtration_checks,
    "gk": gk_checks,
}


def run_suite(suite: str, g: int, d: int, seed: int = 0, u_cap: int | None = None) -> list:
    ctx = Context(g, d, seed, u_cap)
    return [run_check(ctx, *item) for item in SUITE_BUILDERS[suite](ctx)]
