import math
import random

import pytest
from gmpy2 import mpq

from jacrings import LiftError
from jacrings.cbul_model import TautPresentation, gamma_presentation, taut_evaluate, taut_push_N
from jacrings.pdpoly import divided_power
from jacrings.suites import random_bullet

from conftest import build

GD = [(1, 0), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2)]


def test_dt_div_basics():
    _, _, cb = build(2, 1)
    t = cb.t
    assert cb.dt_div(t("gamma", 2), 1) == t().scale(2)
    for j in range(4):
        for m in range(1, 3):
            assert not cb.dt_div(cb.u("gamma", j), m)
    rng = random.Random(1)
    for _ in range(5):
        X = random_bullet(cb, rng)
        for m in range(3):
            for n in range(3):
                assert cb.dt_div(cb.dt_div(X, m), n) == cb.dt_div(X, m + n).scale(math.comb(m + n, m))


def test_du_and_degrees():
    _, _, cb = build(2, 1)
    for j in range(1, 5):
        assert cb.du_gamma(cb.u("gamma", j)) == cb.u("gamma", j - 1)
        assert cb.degrees(cb.u("gamma", j)) == {j}
    assert not cb.du_gamma(cb.t())
    assert cb.degrees(cb.t()) == {1}
    jac = cb.jac
    for n in range(2, 5):
        assert cb.degrees(cb.s_tilde_prime(jac.gring.gen(f"d{n}"))) == {n}
    rng = random.Random(2)
    X = random_bullet(cb, rng)
    parts = [cb.degree_component(X, n) for n in range(0, 12)]
    assert sum(parts[1:], parts[0]) == X


@pytest.mark.parametrize("g,d", GD)
def test_du_transport(g, d):
    _, _, cb = build(g, d)
    rng = random.Random(g + 7 * d)
    for _ in range(4):
        X = random_bullet(cb, rng)
        Xb = cb.to_beta(X)
        lhs = cb.to_beta(cb.du_gamma(X))
        rhs = (cb.one("beta") + cb.psi("beta") * cb.u("beta")) * cb.du_beta(Xb) \
            + cb.psi("beta") * cb.t_dt(Xb) - cb.psi("beta") * cb.E_grading(Xb)
        assert lhs == rhs


@pytest.mark.parametrize("g,d", GD)
def test_chart_conversion(g, d):
    jac, _, cb = build(g, d)
    rng = random.Random(5)
    for _ in range(4):
        X = random_bullet(cb, rng, "beta")
        assert cb.coords_convert(cb.coords_convert(X, "gamma"), "beta") == X
    J = jac.jac_fundamental()
    assert cb.to_gamma(cb.s_tilde(J)) == cb.u_twist(2 * g) * cb.s_tilde_prime(J)
    sJ = cb.to_gamma(cb.s_tilde(J))
    for m in range(jac.window.psi_order + 1):
        rhs = (cb.u("gamma", m) * cb.psi() ** m * cb.s_tilde_prime(J)).scale(
            (-1) ** m * math.prod(range(2 * g, 2 * g + m)))
        assert cb.degree_component(sJ, 2 * g + m) == rhs


def test_field_mode_charts_agree():
    jac, _, cb = build(3, 0)
    for n in range(2, 7):
        d = jac.gring.gen(f"d{n}")
        y = jac.to_coweight_basis(d)
        assert cb.to_beta(cb.s_tilde_prime(d) * cb.u("gamma", 2)) == cb.s_tilde(y) * cb.u("beta", 2)


def test_P01():
    jac, _, cb = build(2, 1)
    assert cb.P01_p0(cb.t()) == -cb.psi()
    for m in range(1, 4):
        assert cb.P01_p0(cb.u("gamma", m)) == cb.u("gamma", m - 1)
    for sp in (jac.spec_curve(), jac.spec_point("p1"), jac.spec_base_point()):
        for n in range(1, 6):
            rhs = (cb.s_tilde_prime(sp.p0star) * cb.t("gamma", n - 1)).scale(n)
            assert cb.P01_p0(cb.Delta_push(n, sp)) == rhs


def test_projectors():
    _, _, cb = build(2, 1)
    rng = random.Random(4)
    for _ in range(5):
        X = random_bullet(cb, rng)
        assert not cb.Pi_t(cb.t() * X)
        K = cb.K_project(X)
        assert cb.K_project(K) == K
    for j in range(1, 5):
        assert not cb.Pi_u(cb.u("gamma", j))


@pytest.mark.parametrize("g,d", GD)
def test_sections(g, d):
    jac, ci, cb = build(g, d)
    rng = random.Random(11)
    for _ in range(4):
        Y = random_bullet(cb, rng)
        F = cb.q_push(Y)
        assert cb.q_push(cb.r_section(F)) == F
        rhs = cb.gring.zero("gamma")
        for n in range(Y.max_var(1) + 1):
            rhs = rhs + (cb.one() - cb.t()) ** n * cb.dt_div(Y, n)
        assert cb.to_gamma(cb.r_section(F)) == rhs
    for y in (jac.curve_class(), jac.iota_point("p1"), jac.jac_fundamental()):
        assert cb.sigma_tilde_push(cb.s_tilde(y)) == y
        assert cb.sigma_tilde_push(cb.s_tilde_prime(y)) == y


@pytest.mark.parametrize("g,d", GD)
def test_lifts(g, d):
    jac, ci, cb = build(g, d)
    assert cb.lift_to_degree(ci.ring.one("x"), 0) == cb.one()
    Y = cb.t("gamma", 2) * cb.u()
    assert cb.lift_to_degree(cb.q_push(Y), 3) == Y
    assert cb.lift_to_degree(ci.class_C(), 1) == cb.u()
    for sp in (jac.spec_curve(), jac.spec_point("p1")):
        for n in range(0, 3):
            F = ci.push_N_inf(ci.fa_build(sp.iota, sp.p0star), n)
            assert cb.lift_to_degree_solve(F, n) == cb.lift_to_degree(F, n)


def test_lift_failure_reports_residual():
    _, ci, cb = build(2, 0)
    with pytest.raises(LiftError) as info:
        cb.lift_to_degree(ci.x(3), 1)
    assert info.value.residual is not None


@pytest.mark.parametrize("g,d", GD)
def test_modified_diagonals(g, d):
    jac, ci, cb = build(g, d)
    for sp in (jac.spec_curve(), jac.spec_point("p1"), jac.spec_base_point()):
        assert cb.Gamma_n(0, sp) == cb.s_tilde_prime(jac.pi_push(sp))
        for n in range(0, 2 * g + 3):
            D = cb.Delta_push(n, sp)
            assert cb.E_grading(D) == D.scale(n)
            assert cb.K_project(D) == cb.Gamma_nat(n, sp)
            for m in range(0, n + 2):
                rhs = cb.Delta_push(n - m, sp).scale(math.comb(n, m)) if m <= n else cb.gring.zero("gamma")
                assert cb.dt_div(D, m) == rhs
    C = jac.spec_curve()
    assert cb.Gamma_n(1, C) == cb.u()
    if d == 0:
        assert cb.Gamma_n(2, C) == cb.Delta_push(2, C) - (cb.t() * cb.u()).scale(2)


@pytest.mark.parametrize("g,d", GD)
def test_operator_algebra(g, d):
    _, _, cb = build(g, d)
    assert not cb.D_tilde_u(cb.t())
    assert cb.D_tilde_u(cb.u()) == cb.one() + cb.psi() * cb.u()
    rng = random.Random(9)
    X = random_bullet(cb, rng)
    for m in range(7):
        assert cb.D_tilde_u(cb.dt_div(X, m)) == cb.dt_div(cb.D_tilde_u(X), m)
    G = cb.gring
    for gd in G.gens:
        if gd.is_psi:
            continue
        k = G.gen(gd.name, "gamma")
        assert not cb.D_u(cb.u_twist(gd.grade) * k)


def test_taut_presentations():
    jac, _, cb = build(2, 0)
    for N in (2, 3):
        assert taut_push_N(TautPresentation.t(), N) == TautPresentation.t(N)
        assert taut_evaluate(taut_push_N(TautPresentation.u(), N), cb) == cb.Delta_push(N, jac.spec_curve())
    assert taut_push_N(TautPresentation.Delta(2, "C"), 3) == TautPresentation.Delta(6, "C")
    for n in (2, 3):
        pres = gamma_presentation(n, jac.spec_curve())
        assert taut_evaluate(pres, cb) == cb.Gamma_nat(n, jac.spec_curve())


def test_filtration_components():
    jac, _, cb = build(2, 0)
    assert not cb.fil_component(jac.ring.one(), 1)
    J = jac.jac_fundamental()
    assert cb.fil_component(J, 4) == J
