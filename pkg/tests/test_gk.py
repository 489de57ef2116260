import math

import pytest
from gmpy2 import mpq

from jacrings import DivisorSpec, GKModel, PreconditionError

from conftest import build


def make(g, deg, r):
    pts = tuple(f"p{i}" for i in range(1, deg + 1))
    jac, ci, cb = build(g, 0, pts)
    return GKModel(cb, DivisorSpec(pts, r))


def test_field_mode_required():
    _, _, cb = build(2, 1)
    with pytest.raises(PreconditionError):
        GKModel(cb, DivisorSpec(("p1",), 1))
    with pytest.raises(PreconditionError):
        DivisorSpec(("p1", "p2"), 3)


def test_divisor_classes():
    gk = make(2, 2, 1)
    cb, jac = gk.cb, gk.jac
    ci = cb.cinf
    # the base point lifts to t
    assert cb.lift_to_degree(ci.fa_build(jac.ring.one(), -jac.psi()), 1) == cb.t()
    D = gk.divisor_class()
    assert cb.degrees(D) == {2}
    assert gk.e_class(0) == cb.one()
    assert gk.e_class(2) == D
    assert D == sum((gk.ebar_class(i) * cb.t("gamma", 2 - i) for i in range(3)), cb.gring.zero("gamma"))
    p1, p2 = gk.point_class("p1"), gk.point_class("p2")
    assert gk.ebar_class(1) == (p1 - cb.t()) + (p2 - cb.t())
    assert gk.ebar_class(2) == (p1 - cb.t()) * (p2 - cb.t())


@pytest.mark.parametrize("g,deg,r", [(2, 2, 1), (3, 4, 1), (3, 4, 2)])
def test_ebar_in_kernel_of_dt(g, deg, r):
    gk = make(g, deg, r)
    for i in range(deg + 1):
        for m in range(1, 4):
            assert not gk.cb.dt_div(gk.ebar_class(i), m)


def test_U_sums():
    gk = make(2, 2, 1)
    cb = gk.cb
    assert gk.U(0, 0) == cb.one()
    for s in range(1, 3):
        for nu in range(0, 2 * s):
            assert not gk.U(nu, s)
    G2 = cb.Gamma_n(2, gk.jac.spec_curve())
    assert gk.U(4, 2) == (G2 * G2).scale(mpq(1, 4))


@pytest.mark.parametrize("g,deg,r", [(2, 2, 1), (3, 4, 1), (3, 4, 2), (3, 3, 1)])
def test_relation_machinery(g, deg, r):
    gk = make(g, deg, r)
    cb, jac = gk.cb, gk.jac
    pairs = list(gk.valid_pairs())
    assert pairs
    cw = jac.ring.mcoweight
    for N, s in pairs:
        res = gk.gk_consistency(N, s)
        assert res["expansion"] and res["separation"] and res["relation"], (N, s)
        pushed = cb.sigma_tilde_push(gk.gk_relation_1(N, s)).filter(lambda k: cw[k[0]] == N)
        assert pushed == gk.gk_relation_2(N, s)
    for M in range(deg + 1):
        assert gk.binomial_bridge(M)
    assert gk.cor4_relation() == gk.cor4_from_id1()
    sc = cb.to_gamma(cb.s_tilde(jac.curve_class()))
    for b in range(2, 2 * g + 1):
        assert cb.degree_component(sc, b) == gk.U(b, 1).scale((-1) ** b)


def test_documented_pairs():
    gk = make(2, 2, 1)
    assert (3, 1) in set(gk.valid_pairs())
    with pytest.raises(PreconditionError):
        gk.gk_relation_1(1, 0)
    for N, s in ((3, 1), (3, 0)):
        res = gk.gk_consistency(N, s)
        assert res["expansion"] and res["relation"]
    gk3 = make(3, 3, 2)
    res = gk3.gk_consistency(4, 0)
    assert res["expansion"] and res["relation"]


def test_emitted_relations():
    gk = make(2, 2, 1)
    rels = gk.emit()
    cor3 = [r for r in rels if r.kind == "cor3"]
    p1, p2, t = gk.point_class("p1"), gk.point_class("p2"), gk.cb.t()
    assert cor3[0].value == (p1 - t) * (p2 - t)
    for rel in gk.cor1_relations():
        assert rel.value == gk.Upsilon(rel.N, gk.D.r0)
    ups = gk.Upsilon(4, 2)
    assert ups == (gk.jac.c(2) ** 2)
    gk34 = make(3, 4, 1)
    id2 = sorted({r.N for r in gk34.emit() if r.kind == "id2"})
    assert id2[0] == 4


def test_flavors():
    gk = make(2, 2, 1)
    assert [r.kind for r in gk.gk_emit("cor3")] == ["cor3"]
    assert all(r.kind == "cor2" for r in gk.gk_emit("cor2"))
    assert gk.gk_emit("cor2")[0].N == 2
    with pytest.raises(PreconditionError):
        gk.gk_emit("other")
