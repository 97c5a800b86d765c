import copy
import json

import numpy as np
import pytest

from coringkit import fixtures
from coringkit.coring import same_coring_structure
from coringkit.errors import MalformedInputError, PreconditionError
from coringkit.instance import (
    ParseError,
    UnresolvedReference,
    digest_of,
    load_json_text,
    parse_document,
    parse_field_override,
    serialize,
)
from coringkit.linalg import GF, QQ


def raw(name):
    return json.loads(fixtures.path(name).read_text())


@pytest.mark.parametrize("name", fixtures.NAMES)
def test_serialize_roundtrip(name):
    inst = fixtures.load(name)
    back = parse_document(json.loads(json.dumps(serialize(inst))))
    for cat, names in inst.names().items():
        assert set(names) <= set(back.objects[cat]), cat
    for n, c in inst.objects["corings"].items():
        assert same_coring_structure(c, back.objects["corings"][n])
    for n, A in inst.objects["algebras"].items():
        assert np.array_equal(A.mult, back.objects["algebras"][n].mult)


def test_digest_ignores_key_order():
    doc = raw("fx_x2")
    shuffled = dict(reversed(list(doc.items())))
    assert digest_of(doc) == digest_of(shuffled)
    assert fixtures.load("fx_x2").digest == digest_of(doc)


def test_zero_denominator_location():
    doc = raw("fx_x2")
    doc["elements"]["g"]["coords"][2] = "2/0"
    with pytest.raises(ParseError) as exc:
        parse_document(doc)
    assert exc.value.location == "elements.g.coords[2]"


def test_unresolved_reference_location():
    doc = raw("fx_x2")
    doc["comodules"]["A"]["grouplike"] = "nope"
    with pytest.raises(UnresolvedReference) as exc:
        parse_document(doc)
    assert exc.value.location == "comodules.A.grouplike"


def test_invalid_grouplike_is_a_precondition():
    doc = raw("fx_x2")
    doc["elements"]["g"]["coords"] = [1, 1, 0, 0]
    with pytest.raises(PreconditionError):
        parse_document(doc)


def test_syntax_error_has_line_and_column():
    with pytest.raises(ParseError) as exc:
        load_json_text('{\n "field": {"kind": "Q"},\n oops}')
    assert exc.value.location == "line 3 column 2"


def test_top_level_must_be_object():
    with pytest.raises(ParseError):
        load_json_text("[1, 2]")


def test_field_override():
    assert parse_field_override("Q") is QQ
    assert [parse_field_override(t).p for t in ("GF(5)", "F5", "Fp:5")] == [5, 5, 5]
    with pytest.raises(MalformedInputError):
        parse_field_override("R")
    inst = fixtures.load("fx_t2dual", QQ)
    assert not inst.field.is_finite


def test_unknown_field_kind():
    doc = copy.deepcopy(raw("fx_triv"))
    doc["field"] = {"kind": "R"}
    with pytest.raises(ParseError) as exc:
        parse_document(doc)
    assert exc.value.location == "field"


def test_gf_field_from_json():
    inst = fixtures.load("fx_c2")
    assert inst.field.p == GF(3).p
