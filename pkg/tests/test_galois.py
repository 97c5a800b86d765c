import numpy as np
import pytest

from coringkit.algebra import free_module, regular_bimodule
from coringkit.coring import comodule_from_grouplike, extension_tensor, regular_comodule, validate_coring
from coringkit.errors import PreconditionError
from coringkit.galois import (
    adjunction_check,
    bimodule_comodule_A,
    can_coherence,
    coinvariant_ring,
    comodule_algebra_of,
    equivalence_check,
    galois_check,
    hom_tensor_check,
    schneider_coring,
    weak_image_check,
)


def unit_grouplike(c):
    A = c.algebra
    return extension_tensor(c.extension).element(A.unit, A.unit)


def test_c2_entwining_coring_is_galois(load):
    inst = load("fx_c2")
    c, g = inst.get("corings", "C"), inst.get("elements", "g")
    d = galois_check(c, g)
    assert d.B.dim == 1
    assert d.is_galois and not d.warnings
    F = c.field
    assert np.array_equal(F.dot(d.chi, d.chi_inv), F.eye(c.dim))


def test_chi_equals_can(load):
    inst = load("fx_c2")
    r = can_coherence(inst.get("entwinings", "psi"), inst.get("elements", "g"))
    assert r == {"galois": True, "can_bijective": True, "same_coinvariants": True, "chi_equals_can": True}


def test_kc2_fails_by_dimension(load):
    inst = load("fx_c2")
    d = galois_check(inst.get("corings", "kC2"), inst.get("elements", "h0"))
    assert not d.is_galois
    assert d.failures[0].startswith("dimension")


@pytest.mark.parametrize("fx,name", [("fx_x2", "C"), ("fx_mat2", "C1"), ("fx_mat2", "C2")])
def test_canonical_corings_are_galois(load, fx, name):
    c = load(fx).get("corings", name)
    d = galois_check(c, unit_grouplike(c))
    assert d.is_galois
    # coinvariants recover the subring, nothing more
    assert d.B.dim == c.extension.source.dim and not d.warnings


def test_coinvariant_ring_of_canonical_x2(load):
    c = load("fx_x2").get("corings", "C")
    B, inc, basis = coinvariant_ring(c, unit_grouplike(c))
    assert B.dim == 1 and np.array_equal(inc.matrix, c.extension.matrix)


def test_non_grouplike_rejected(load):
    c = load("fx_c2").get("corings", "C")
    with pytest.raises(PreconditionError):
        adjunction_check(c, c.field.zeros(c.dim))


def _hom_tensor_case(c, g):
    gd = galois_check(c, g)
    V = bimodule_comodule_A(c, g, gd.inclusion)
    N = free_module(regular_bimodule(gd.B).only_right(), 2)
    return V, N


@pytest.mark.parametrize("fx,name,el", [("fx_c2", "C", "g"), ("fx_x2", "C", None), ("fx_mat2", "C1", None)])
def test_hom_tensor(load, fx, name, el):
    inst = load(fx)
    c = inst.get("corings", name)
    g = inst.get("elements", el) if el else unit_grouplike(c)
    V, N = _hom_tensor_case(c, g)
    for M in (regular_comodule(c), comodule_from_grouplike(c, g)):
        r = hom_tensor_check(V, N, M)
        assert r.dim_left == r.dim_right
        assert r.mutually_inverse


def test_adjunction_triangles(load):
    inst = load("fx_c2")
    c, g = inst.get("corings", "C"), inst.get("elements", "g")
    gd = galois_check(c, g)
    RB = regular_bimodule(gd.B).only_right()
    adj = adjunction_check(c, g, N=RB, M=regular_comodule(c))
    assert adj.report.ok
    assert adj.psi_bijective and adj.phi_bijective


def test_equivalence_on_galois_and_not(load):
    inst = load("fx_c2")
    rep = equivalence_check(inst.get("corings", "C"), inst.get("elements", "g"))
    assert rep.galois and rep.family_equivalence and rep.flatness_sufficient
    bad = equivalence_check(inst.get("corings", "kC2"), inst.get("elements", "h0"))
    assert not bad.galois and not bad.family_equivalence


def test_equivalence_is_seed_stable(load):
    inst = load("fx_x2")
    c = inst.get("corings", "C")
    a = equivalence_check(c, unit_grouplike(c), seed=5).to_json()
    b = equivalence_check(c, unit_grouplike(c), seed=5).to_json()
    assert a == b


def test_schneider_coring(load):
    inst = load("fx_c2")
    ca = comodule_algebra_of(inst.get("entwinings", "psi"), inst.get("elements", "g"))
    s = schneider_coring(ca)
    assert s.coring.dim == 2 and s.B.dim == 1
    assert validate_coring(s.coring).ok


def test_weak_image_equals_can_image(load):
    inst = load("fx_weak2")
    r = weak_image_check(inst.get("comodule_algebras", "Arho"), inst.splittings["Arho"])
    assert r["equal"] and r["rank_can"] == r["rank_p"] == 2
