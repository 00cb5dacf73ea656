"""
Embedding documents and saved traces: JSON parsing and validation.

An embedding document looks like::

    {"field": {"symbols": ["T2", "T3"], "radical_bound": {"T3": {"base": 2}}},
     "variables": ["X1", "X2"],
     "series": {"X1": {"terms": [{"c": "1", "e": 2}]},
                "X2": {"terms": [{"c": "T2", "e": 4}],
                       "tails": [{"coeff": "T3^(j/2)", "exp": "j+4", "from": 1}]}}}
"""

import json
import logging
from typing import Dict, List, Sequence, Tuple, Union

import jsonschema
from sympy import Symbol

from config.config import DEFAULT_DEPTH, DEFAULT_PRECISION, RESERVED_PARAMETER
from src.models.embedding import Embedding
from src.models.errors import InputError
from src.models.field import FieldElem, FieldPresentation, parse_text
from src.models.series import LazySeries, Tail
from .transform import Trace

logger = logging.getLogger(__name__)

_COEFFICIENT = {"type": ["string", "integer"]}

TERM_SCHEMA = {
    "type": "object",
    "required": ["c", "e"],
    "additionalProperties": False,
    "properties": {
        "c": _COEFFICIENT,
        "e": {"type": "integer", "minimum": 1},
    },
}

TAIL_SCHEMA = {
    "type": "object",
    "required": ["coeff", "exp"],
    "additionalProperties": False,
    "properties": {
        "coeff": _COEFFICIENT,
        "exp": {"type": ["string", "integer"]},
        "from": {"type": "integer", "minimum": 0},
    },
}

SERIES_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "terms": {"type": "array", "items": TERM_SCHEMA},
        "tails": {"type": "array", "items": TAIL_SCHEMA},
        "certified_infinite": {"type": "boolean"},
    },
    "anyOf": [
        {"required": ["terms"], "properties": {"terms": {"minItems": 1}}},
        {"required": ["tails"], "properties": {"tails": {"minItems": 1}}},
    ],
}

DOCUMENT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["field", "variables", "series"],
    "additionalProperties": False,
    "properties": {
        "field": {
            "type": "object",
            "required": ["symbols"],
            "additionalProperties": False,
            "properties": {
                "symbols": {
                    "type": "array",
                    "items": {"type": "string", "minLength": 1},
                    "uniqueItems": True,
                },
                "radical_bound": {
                    "type": "object",
                    "additionalProperties": {
                        "oneOf": [
                            {"type": "integer", "minimum": 1},
                            {
                                "type": "object",
                                "required": ["base"],
                                "additionalProperties": False,
                                "properties": {"base": {"type": "integer", "minimum": 2}},
                            },
                        ]
                    },
                },
            },
        },
        "variables": {
            "type": "array",
            "items": {"type": "string", "minLength": 1},
            "minItems": 2,
            "uniqueItems": True,
        },
        "series": {"type": "object", "additionalProperties": SERIES_SCHEMA},
    },
}

STEP_SCHEMA = {
    "type": "object",
    "required": ["kind", "i"],
    "properties": {
        "kind": {"enum": ["monoidal", "swap", "coord"]},
        "i": {"type": "integer", "minimum": 1},
        "j": {"type": "integer", "minimum": 1},
        "b": _COEFFICIENT,
        "m": {"type": "integer", "minimum": 1},
        "values_after": {"type": "array", "items": {"type": "integer"}},
    },
}

TRACE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "array",
    "items": STEP_SCHEMA,
}


def json_path(path: Sequence[Union[str, int]]) -> str:
    """Render a jsonschema error path as ``$.series.X1.terms[0].e``."""
    text = "$"
    for part in path:
        text += f"[{part}]" if isinstance(part, int) else f".{part}"
    return text


def _load(text: Union[str, bytes], schema: dict, what: str):
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputError(f"{what} is not valid JSON: {e}") from e

    validator = jsonschema.Draft7Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if error is not None:
        raise InputError(f"{what} {json_path(error.absolute_path)}: {error.message}")
    return data


def resolve_radical_bounds(declared: Dict[str, Union[int, dict]], depth: int) -> Dict[str, int]:
    """Integer bounds; ``{"base": p}`` means p ** depth."""
    return {
        name: (bound["base"] ** depth if isinstance(bound, dict) else bound)
        for name, bound in declared.items()
    }


def parse_exponent_rule(text: Union[str, int]) -> Tuple[int, int]:
    """
    Parse an exponent rule ``a*j + b`` into (a, b).

    Raises:
        InputError: Unless a and b are integers with a >= 1
    """
    j = Symbol(RESERVED_PARAMETER, integer=True)
    expr = parse_text(str(text), {RESERVED_PARAMETER: j})
    if expr.free_symbols - {j}:
        raise InputError(f"exponent rule '{text}' may only use {RESERVED_PARAMETER}")
    a = expr.diff(j)
    b = expr.subs(j, 0)
    if not (a.is_Integer and b.is_Integer) or expr.diff(j, 2) != 0:
        raise InputError(f"exponent rule '{text}' is not a*{RESERVED_PARAMETER}+b with integers a, b")
    if a < 1:
        raise InputError(f"exponent rule '{text}' needs a >= 1")
    return int(a), int(b)


def _parse_series(presentation: FieldPresentation, name: str, data: dict) -> LazySeries:
    terms: Dict[int, FieldElem] = {}
    for position, term in enumerate(data.get("terms", [])):
        try:
            c = presentation.parse(str(term["c"]))
        except InputError as e:
            raise InputError(f"$.series.{name}.terms[{position}].c: {e}") from e
        terms[term["e"]] = terms.get(term["e"], presentation.zero) + c

    tails = []
    for position, tail in enumerate(data.get("tails", [])):
        where = f"$.series.{name}.tails[{position}]"
        start = tail.get("from", 1)
        try:
            rule = presentation.parse_rule(str(tail["coeff"]), start)
            a, b = parse_exponent_rule(tail["exp"])
            parsed = Tail(rule, a, b, start)
        except InputError as e:
            raise InputError(f"{where}: {e}") from e
        if parsed.first_exponent < 1:
            raise InputError(f"{where}: first exponent {parsed.first_exponent} must be at least 1")
        tails.append(parsed)

    return LazySeries.from_terms(presentation, terms, tails)


def parse_document(text: Union[str, bytes], cap: int = DEFAULT_PRECISION,
                   depth: int = DEFAULT_DEPTH) -> Embedding:
    """
    Parse and validate an embedding document.

    Args:
        text (Union[str, bytes]): UTF-8 JSON document
        cap (int): Precision cap for the load-time order check
        depth (int): Chain depth, used for ``{"base": p}`` radical bounds

    Returns:
        Embedding: Validated embedding

    Raises:
        InputError: On schema violations (path-qualified), undeclared symbols
            and images without an order >= 1 within the cap
    """
    data = _load(text, DOCUMENT_SCHEMA, "document")

    field = data["field"]
    presentation = FieldPresentation(
        field["symbols"],
        resolve_radical_bounds(field.get("radical_bound", {}), depth),
    )

    variables = data["variables"]
    series = data["series"]
    for name in series:
        if name not in variables:
            raise InputError(f"$.series.{name}: not a declared variable")

    images = []
    certified = []
    for position, name in enumerate(variables, start=1):
        if name not in series:
            raise InputError(f"$.series: no series for variable '{name}'")
        images.append(_parse_series(presentation, name, series[name]))
        if series[name].get("certified_infinite", False):
            certified.append(position)

    logger.info(f"Parsed document with variables {variables} over {presentation}")
    return Embedding(presentation, variables, images, cap, certified)


def load_trace(text: Union[str, bytes], emb: Embedding) -> Trace:
    """
    Parse a saved trace: a list of steps, or a report object with a ``trace`` key.

    Raises:
        InputError: On schema violations or steps outside the embedding
    """
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputError(f"trace is not valid JSON: {e}") from e
    if isinstance(data, dict) and "trace" in data:
        data = data["trace"]
    error = jsonschema.exceptions.best_match(jsonschema.Draft7Validator(TRACE_SCHEMA).iter_errors(data))
    if error is not None:
        raise InputError(f"trace {json_path(error.absolute_path)}: {error.message}")
    trace = Trace.from_list(data, emb.variables, emb.presentation)
    trace.initial_values = emb.values()
    return trace
