"""Single-constant perturbations of valid structures.

Each case adds 1 to one entry of a valid object and checks that the
validator names the expected axioms, and only those.
"""
import dataclasses

import pytest

from coringkit.algebra import validate_algebra, validate_bimodule
from coringkit.coalgebra import validate_coalgebra, validate_comodule as validate_bicomodule
from coringkit.coring import validate_comodule, validate_coring
from coringkit.cring import validate_character, validate_cring
from coringkit.entwining import validate_entwining, validate_weak_entwining
from coringkit.separability import check_forgetful_separable, check_induction_separable, cosep_idempotent


def _verify(o):
    return o.verify()


def _validate(o):
    return o.validate()


def _obj(load, kind):
    c2 = load("fx_c2")
    return {
        "algebra": lambda: c2.get("algebras", "A"),
        "coalgebra": lambda: c2.get("coalgebras", "C"),
        "bimodule": lambda: c2.get("corings", "C").bimodule,
        "coring": lambda: c2.get("corings", "C"),
        "comodule": lambda: c2.get("comodules", "Creg"),
        "entwining": lambda: c2.get("entwinings", "psi"),
        "weak": lambda: load("fx_weak2").get("entwinings", "psi"),
        "cring": lambda: c2.get("crings", "R"),
        "bicomodule": lambda: c2.get("crings", "R").bicomodule,
        "character": lambda: c2.get("characters", "kappa"),
        "cointegral": lambda: check_forgetful_separable(load("fx_mat2").get("corings", "C2")).certificate,
        "pi": lambda: cosep_idempotent(check_forgetful_separable(load("fx_mat2").get("corings", "C2")).certificate),
        "e": lambda: check_induction_separable(load("fx_mat2").get("corings", "C1")).certificate,
        "morphism": lambda: load("fx_mat2").get("algebra_morphisms", "D_to_A"),
    }[kind]()


VALIDATORS = {
    "algebra": validate_algebra,
    "coalgebra": validate_coalgebra,
    "bimodule": validate_bimodule,
    "coring": validate_coring,
    "comodule": validate_comodule,
    "entwining": validate_entwining,
    "weak": validate_weak_entwining,
    "cring": validate_cring,
    "bicomodule": validate_bicomodule,
    "character": validate_character,
    "cointegral": _verify,
    "pi": _verify,
    "e": _verify,
    "morphism": _validate,
}

CASES = [
    ("algebra", "mult", (0, 1, 0), {"associativity", "left_unit"}),
    ("algebra", "mult", (1, 0, 0), {"associativity", "right_unit"}),
    ("algebra", "unit", (0,), {"left_unit", "right_unit"}),
    ("coalgebra", "comult", (0, 0, 1), {"coassociativity", "left_counit", "right_counit"}),
    ("coalgebra", "counit", (0,), {"left_counit", "right_counit"}),
    ("bimodule", "left", (1, 0, 0), {"actions_commute", "left_associative"}),
    ("bimodule", "left", (0, 0, 0), {"actions_commute", "left_associative", "left_unital"}),
    ("bimodule", "right", (1, 0, 0), {"actions_commute", "right_associative"}),
    ("coring", "coproduct_lift", (0, 0),
     {"coassociativity", "coproduct_left_linear", "coproduct_right_linear", "left_counit", "right_counit"}),
    ("coring", "counit", (0, 0), {"counit_left_linear", "counit_right_linear", "right_counit"}),
    ("comodule", "coaction_lift", (0, 0), {"coaction_right_linear", "counit"}),
    ("comodule", "coaction_lift", (0, 2), {"coaction_right_linear", "coassociativity", "counit"}),
    ("entwining", "psi", (0, 0), {"entwining_coproduct", "entwining_counit", "entwining_product", "entwining_unit"}),
    ("entwining", "psi", (0, 1), {"entwining_coproduct", "entwining_counit", "entwining_product"}),
    ("weak", "psi", (0, 2), {"weak_unit"}),
    ("weak", "psi", (1, 3), {"entwining_coproduct", "weak_counit"}),
    ("cring", "product", (0, 3), {"associativity"}),
    ("cring", "product", (1, 7), {"associativity", "product_left_colinear"}),
    ("cring", "product", (1, 3), {"associativity", "product_right_colinear"}),
    ("cring", "unit", (1, 0), {"left_unit", "right_unit", "unit_right_colinear"}),
    ("cring", "unit", (1, 1), {"left_unit", "right_unit", "unit_left_colinear"}),
    ("bicomodule", "right", (0, 0), {"right_coassociativity", "right_counit"}),
    ("bicomodule", "left", (0, 1), {"bicomodule_compatibility", "left_coassociativity", "left_counit"}),
    ("character", "kappa", (0,), {"nontrivial"}),
    ("character", "kappa", (1,), {"module.associativity"}),
    ("cointegral", "gamma", (0, 2), {"left_linear", "right_linear"}),
    ("cointegral", "gamma", (1, 1), {"compatibility", "left_linear", "normalised", "right_linear"}),
    ("pi", "pi", (0, 0), {"left_colinear", "left_linear", "right_colinear", "right_linear", "splits_coproduct"}),
    ("e", "e", (2,), {"central"}),
    ("e", "e", (0,), {"central", "normalised"}),
    ("morphism", "matrix", (0, 0), {"multiplicative", "unital"}),
]


@pytest.mark.parametrize("kind,field,index,expected", CASES, ids=lambda v: str(v) if not isinstance(v, set) else "")
def test_single_perturbation_names_axiom(load, kind, field, index, expected):
    obj = _obj(load, kind)
    arr = getattr(obj, field).copy()
    F = _field_of(obj)
    arr[index] = F.reduce(arr[index] + 1) if F.is_finite else arr[index] + 1
    assert VALIDATORS[kind](obj).ok
    bad = VALIDATORS[kind](dataclasses.replace(obj, **{field: arr}))
    assert set(bad.axioms_violated) == expected
    assert all(v.axiom in expected for v in bad.violations)


def _field_of(obj):
    for attr in ("field", "coring", "cring", "algebra", "target"):
        x = getattr(obj, attr, None)
        if x is None:
            continue
        return x if attr == "field" else _field_of(x)
    raise AssertionError(f"no field on {obj!r}")


def test_dual_numbers_relation_shift_stays_valid(load):
    # x.x = 0 -> x.x = 1 is still associative (Q[x]/(x^2 - 1))
    A = load("fx_x2").get("algebras", "A")
    arr = A.mult.copy()
    arr[1, 1, 0] += 1
    assert validate_algebra(dataclasses.replace(A, mult=arr)).ok


def test_enough_cases():
    assert len(CASES) >= 20
    assert len({(k, a) for k, *_, e in CASES for a in e}) >= 20
