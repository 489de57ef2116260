import random

import pytest
from gmpy2 import mpq

from jacrings import CoordinateMismatch, PreconditionError, log_psi
from jacrings.pdpoly import divided_power, series_fn
from jacrings.suites import random_x_element

from conftest import build

GD = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]


@pytest.mark.parametrize("g,d", GD)
def test_s_embed_and_sigma(g, d):
    jac, ci, _ = build(g, d)
    assert ci.s_embed(jac.ring.one()) == ci.ring.one("x")
    y1, y2 = jac.curve_class(), jac.iota_point("p1")
    assert ci.s_embed(y1 * y2) == ci.s_embed(y1) * ci.s_embed(y2)
    assert ci.sigma_push(ci.s_embed(y1)) == y1
    for m in range(1, 4):
        assert not ci.sigma_push(ci.x(m))
        assert ci.xi_cap(ci.x(m)) == ci.x(m - 1)
    assert ci.sigma_push(ci.class_Gamma()) == jac.jac_fundamental()
    assert ci.sigma_push(ci.class_C()) == jac.curve_class()
    assert not ci.xi_cap(ci.class_Gamma())
    assert not ci.xi_cap(ci.s_embed(y1))


def test_s_embed_rejects_chart_variables():
    jac, ci, _ = build(2, 0)
    with pytest.raises(PreconditionError):
        ci.s_embed(ci.x())
    with pytest.raises(CoordinateMismatch):
        ci.sigma_push(jac.ring.var("u", "beta"))


@pytest.mark.parametrize("g,d", GD)
def test_push_N_inf(g, d):
    jac, ci, _ = build(g, d)
    rng = random.Random(g * 10 + d)
    for N in (0, 1, 2, 3):
        assert ci.push_N_inf(ci.x(), N) == ci.x().scale(N)
        y = jac.curve_class() ** 2 + jac.iota_point("p1")
        assert ci.push_N_inf(ci.s_embed(y), N) == ci.s_embed(jac.push_N(y, N))
    F = random_x_element(jac, rng)
    assert ci.push_N_inf(F.with_coords("x"), 1) == F


def geometric_series_x(ci, jac):
    # x + psi x^[2] + psi^2 x^[3] + ...
    out = ci.ring.zero("x")
    p = jac.ring.one()
    for k in range(1, jac.window.psi_order + 2):
        out = out + ci.s_embed(p) * ci.x(k)
        p = p * jac.psi()
    return out


@pytest.mark.parametrize("g,d", GD)
def test_class_C_formula(g, d):
    jac, ci, _ = build(g, d)
    c = jac.curve_class()
    one = jac.ring.one()
    expect = ci.s_embed(c) + ci.s_embed(one + jac.psi() * c) * geometric_series_x(ci, jac)
    assert ci.class_C() == expect
    assert ci.class_Cn(1) == ci.class_C()
    if d == 0:
        assert ci.class_C() == ci.s_embed(c) + ci.x()


@pytest.mark.parametrize("g,d", GD)
def test_fa_build(g, d):
    jac, ci, _ = build(g, d)
    assert ci.fa_build(jac.ring.one(), -jac.psi()) == ci.ring.one("x")
    assert ci.fa_build(jac.curve_class(), jac.ring.one()) == ci.class_C()
    y = jac.iota_point("p1")
    psix = ci.s_embed(jac.psi()) * ci.x()
    expo = series_fn("exp", psix) if psix else ci.ring.one("x")
    assert ci.fa_build(y, jac.ring.zero()) == ci.s_embed(y) * expo


@pytest.mark.parametrize("g,d", GD)
def test_charts(g, d):
    jac, ci, _ = build(g, d)
    u = jac.ring.var("u", "beta")
    if d == 0:
        assert ci.x_to_u(ci.x()) == u - jac.curve_class().with_coords("beta")
    assert ci.x_to_u(ci.class_C()) == u
    rng = random.Random(3)
    for _ in range(5):
        F = random_x_element(jac, rng)
        assert ci.u_to_x(ci.x_to_u(F)) == F


@pytest.mark.parametrize("g,d", GD)
def test_gamma_closed_forms(g, d):
    jac, ci, _ = build(g, d)
    inner = ci.exp_minus_one_over_psi(-1) + ci.class_C() * ci.exp_psi_x(-1)
    assert ci.class_Gamma() == divided_power(inner, g)
    C = ci.class_C()
    for n in (2, 3, 4):
        inner = (log_psi(ci.push_N_inf(C, n)) - log_psi(C).scale(n)).scale(mpq(1, n))
        assert ci.class_Gamma().scale((n - 1) ** g) == divided_power(inner, g)


@pytest.mark.parametrize("g,d", [(2, 0), (2, 1), (3, 0), (3, 1)])
def test_beauville_components(g, d):
    jac, ci, _ = build(g, d)
    C = ci.class_C()
    assert ci.beauville_component_inf(C, 1, -1) == ci.x()
    total = ci.ring.zero("x")
    for j in range(-1, 2 * g + 1):
        total = total + ci.beauville_component_inf(C, 1, j)
    assert total == C


def test_class_names():
    _, ci, _ = build(2, 0)
    assert ci.class_named("L") == ci.x()
    with pytest.raises(PreconditionError):
        ci.class_named("nope")
    with pytest.raises(PreconditionError):
        ci.class_Cn(-1)
