"""Round-trip and error-location tests for the ideal document format."""

from fractions import Fraction

import pytest

from bettilab.corpus import builtin_corpus, veronese_presentation
from bettilab.fields import GF, QQ
from bettilab.ideal_io import (
    IdealDocument,
    IdealFormatError,
    document_of_entry,
    parse_ideal,
    serialize_ideal,
)
from bettilab.rings import Polynomial


def _sample_doc():
    return IdealDocument(
        field=QQ,
        variables=("x", "y"),
        generators=(
            Polynomial.from_dict({(2, 0): 1, (0, 2): Fraction(-1, 2)}),
            Polynomial.from_dict({(1, 1): -3}),
        ),
        declared={"koszul": True},
        name="sample",
    )


def test_serialize_then_parse_is_identity():
    doc = _sample_doc()
    text = serialize_ideal(doc)
    back = parse_ideal(text)
    assert back.field is QQ
    assert back.variables == doc.variables
    assert back.generators == doc.generators
    assert back.declared == doc.declared
    assert back.name == doc.name


def test_parse_then_serialize_is_bit_exact():
    text = serialize_ideal(_sample_doc())
    assert serialize_ideal(parse_ideal(text)) == text


def test_fraction_coefficients_survive():
    text = serialize_ideal(_sample_doc())
    assert '"-1/2"' in text
    back = parse_ideal(text)
    assert back.generators[0].terms[0][1] == Fraction(-1, 2)


def test_finite_field_and_tags_round_trip():
    ent = veronese_presentation(2, 1, field=GF(5))
    doc = document_of_entry(ent)
    text = serialize_ideal(doc)
    back = parse_ideal(text)
    assert back.field.characteristic == 5
    assert back.variable_tags == ent.variable_tags
    assert serialize_ideal(back) == text
    a = back.algebra()
    assert a.piece_dim(2) == 5


def test_every_builtin_entry_round_trips():
    for ent in builtin_corpus():
        text = serialize_ideal(document_of_entry(ent))
        assert serialize_ideal(parse_ideal(text)) == text, ent.name


def test_syntax_error_reports_line_and_column():
    with pytest.raises(IdealFormatError) as err:
        parse_ideal('{"field": {"characteristic": 0},\n  broken\n}')
    assert "line 2" in str(err.value)


@pytest.mark.parametrize(
    "mutate,location",
    [
        (lambda p: p.pop("variables"), "variables"),
        (lambda p: p.__setitem__("variables", ["x", "x"]), "variables"),
        (lambda p: p["field"].pop("characteristic"), "field.characteristic"),
        (lambda p: p["field"].__setitem__("characteristic", 4), "field.characteristic"),
        (lambda p: p.__setitem__("extra", 1), "extra"),
        (
            lambda p: p["generators"][0][0].__setitem__("coefficient", 1.5),
            "generators[0][0].coefficient",
        ),
        (
            lambda p: p["generators"][0][0].__setitem__("coefficient", 0),
            "generators[0][0].coefficient",
        ),
        (
            lambda p: p["generators"][0][1].__setitem__("exponents", [1]),
            "generators[0][1].exponents",
        ),
    ],
)
def test_semantic_errors_carry_paths(mutate, location):
    import json

    payload = json.loads(serialize_ideal(_sample_doc()))
    mutate(payload)
    with pytest.raises(IdealFormatError) as err:
        parse_ideal(json.dumps(payload))
    assert err.value.location == location


def test_repeated_exponent_vector_rejected():
    text = """
    {"field": {"characteristic": 0}, "variables": ["x"],
     "generators": [[{"coefficient": 1, "exponents": [2]},
                     {"coefficient": 2, "exponents": [2]}]]}
    """
    with pytest.raises(IdealFormatError) as err:
        parse_ideal(text)
    assert "repeated" in str(err.value)


def test_bad_fraction_strings_rejected():
    for bad in ("1/0", "1.5", "a/b", "1/-2", ""):
        with pytest.raises(IdealFormatError):
            parse_ideal(
                '{"field": {"characteristic": 0}, "variables": ["x"],'
                f' "generators": [[{{"coefficient": "{bad}", "exponents": [2]}}]]}}'
            )
