"""Reading and writing ideal presentations as structured text.

The document is JSON with a fixed layout:

    {
      "field": {"characteristic": 0},
      "variables": ["x", "y"],
      "generators": [
        [{"coefficient": 1, "exponents": [2, 0]},
         {"coefficient": "-1/2", "exponents": [0, 2]}]
      ],
      "variable_tags": [[1, 0], [0, 1]],       # optional
      "declared": {"koszul": true},            # optional
      "name": "example"                        # optional
    }

Coefficients are integers or exact fraction strings "a/b".  Serialization
is canonical (fixed key order, sorted terms, two-space indent), so
serialize(parse(serialize(doc))) round-trips bit for bit.  Parse failures
carry a location: JSON syntax errors report line and column, semantic
errors report the offending path like generators[1][0].coefficient.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .fields import GF, QQ, FieldSpec
from .rings import Polynomial, QuotientAlgebra

_FRACTION_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


class IdealFormatError(ValueError):
    """Malformed ideal document; str(err) includes the location."""

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")


@dataclass
class IdealDocument:
    field: FieldSpec
    variables: tuple
    generators: tuple  # of Polynomial
    variable_tags: Optional[tuple] = None
    declared: dict = dc_field(default_factory=dict)
    name: Optional[str] = None

    def algebra(self) -> QuotientAlgebra:
        return QuotientAlgebra(
            self.field,
            self.variables,
            self.generators,
            variable_tags=self.variable_tags,
            declared=self.declared,
        )


def _coefficient_out(c):
    f = Fraction(c)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def _coefficient_in(raw, where: str):
    if isinstance(raw, bool):
        raise IdealFormatError(where, "expected integer or 'a/b' string")
    if isinstance(raw, int):
        if raw == 0:
            raise IdealFormatError(where, "zero coefficients must be omitted")
        return raw
    if isinstance(raw, str) and _FRACTION_RE.match(raw):
        f = Fraction(raw)
        if f == 0:
            raise IdealFormatError(where, "zero coefficients must be omitted")
        return int(f) if f.denominator == 1 else f
    raise IdealFormatError(where, f"expected integer or 'a/b' string, got {raw!r}")


def serialize_ideal(doc: IdealDocument) -> str:
    payload = {"field": {"characteristic": doc.field.characteristic}}
    payload["variables"] = list(doc.variables)
    gens = []
    for g in doc.generators:
        gens.append(
            [
                {"coefficient": _coefficient_out(c), "exponents": list(e)}
                for e, c in g.terms
            ]
        )
    payload["generators"] = gens
    if doc.variable_tags is not None:
        payload["variable_tags"] = [list(t) for t in doc.variable_tags]
    if doc.declared:
        payload["declared"] = doc.declared
    if doc.name is not None:
        payload["name"] = doc.name
    return json.dumps(payload, indent=2) + "\n"


def _expect(cond: bool, where: str, message: str):
    if not cond:
        raise IdealFormatError(where, message)


def parse_ideal(text: str) -> IdealDocument:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise IdealFormatError(f"line {err.lineno} column {err.colno}", err.msg) from err
    _expect(isinstance(payload, dict), "document", "top level must be an object")
    known = {"field", "variables", "generators", "variable_tags", "declared", "name"}
    for key in payload:
        _expect(key in known, key, "unknown field")
    for key in ("field", "variables", "generators"):
        _expect(key in payload, key, "required field missing")

    fielddesc = payload["field"]
    _expect(isinstance(fielddesc, dict), "field", "must be an object")
    _expect("characteristic" in fielddesc, "field.characteristic", "required field missing")
    char = fielddesc["characteristic"]
    _expect(
        isinstance(char, int) and not isinstance(char, bool) and char >= 0,
        "field.characteristic",
        "must be a non-negative integer",
    )
    if char == 0:
        fld = QQ
    else:
        try:
            fld = GF(char)
        except ValueError as err:
            raise IdealFormatError("field.characteristic", str(err)) from err

    variables = payload["variables"]
    _expect(
        isinstance(variables, list)
        and variables
        and all(isinstance(v, str) and v for v in variables),
        "variables",
        "must be a non-empty list of names",
    )
    _expect(len(set(variables)) == len(variables), "variables", "names must be distinct")
    e = len(variables)

    raw_gens = payload["generators"]
    _expect(isinstance(raw_gens, list), "generators", "must be a list")
    gens = []
    for gi, raw in enumerate(raw_gens):
        where = f"generators[{gi}]"
        _expect(isinstance(raw, list) and raw, where, "must be a non-empty list of terms")
        terms = {}
        for ti, term in enumerate(raw):
            twhere = f"{where}[{ti}]"
            _expect(isinstance(term, dict), twhere, "must be an object")
            _expect(
                set(term) == {"coefficient", "exponents"},
                twhere,
                "needs exactly the keys coefficient and exponents",
            )
            coeff = _coefficient_in(term["coefficient"], f"{twhere}.coefficient")
            exps = term["exponents"]
            _expect(
                isinstance(exps, list)
                and len(exps) == e
                and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in exps),
                f"{twhere}.exponents",
                f"must be a list of {e} non-negative integers",
            )
            key = tuple(exps)
            _expect(key not in terms, f"{twhere}.exponents", "repeated exponent vector")
            terms[key] = coeff
        gens.append(Polynomial.from_dict(terms))

    tags = None
    if "variable_tags" in payload:
        raw_tags = payload["variable_tags"]
        _expect(
            isinstance(raw_tags, list) and len(raw_tags) == e,
            "variable_tags",
            f"must be a list of {e} integer vectors",
        )
        width = None
        tags = []
        for vi, t in enumerate(raw_tags):
            twhere = f"variable_tags[{vi}]"
            _expect(
                isinstance(t, list) and all(isinstance(x, int) and x >= 0 for x in t),
                twhere,
                "must be a list of non-negative integers",
            )
            _expect(width is None or len(t) == width, twhere, "inconsistent tag width")
            width = len(t)
            tags.append(tuple(t))
        tags = tuple(tags)

    declared = {}
    if "declared" in payload:
        _expect(isinstance(payload["declared"], dict), "declared", "must be an object")
        declared = dict(payload["declared"])

    name = payload.get("name")
    if name is not None:
        _expect(isinstance(name, str), "name", "must be a string")

    return IdealDocument(
        field=fld,
        variables=tuple(variables),
        generators=tuple(gens),
        variable_tags=tags,
        declared=declared,
        name=name,
    )


def load_ideal(path) -> IdealDocument:
    with open(path, "r", encoding="ascii") as fh:
        return parse_ideal(fh.read())


def save_ideal(path, doc: IdealDocument):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_ideal(doc))


def document_of_entry(entry) -> IdealDocument:
    """IdealDocument for a corpus entry, carrying its declared facts."""
    return IdealDocument(
        field=entry.field,
        variables=tuple(entry.variables),
        generators=tuple(entry.generators),
        variable_tags=entry.variable_tags,
        declared=dict(entry.declared),
        name=entry.name,
    )
