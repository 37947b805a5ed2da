"""
The function file format: a JSON document with a leading format version,

    {
      "format_version": 1,
      "n": 2,
      "d": 1,
      "boolean": true,
      "space": {"q": 2, "d": 1},
      "values": [
        1,
        -1,
        ...
      ]
    }

`values` holds one entry per cube index (bit j-1 of the index set means eps_j = -1), a number
for d = 1 or a list of d numbers otherwise, one entry per line. Floats are written with their
shortest round-trip representation, so save followed by load is exact. `space` is optional.
"""
import json
import os
from typing import Any, Dict, NamedTuple, Optional

import numpy as np
from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from .cube import MAX_DIMENSION, CubeFunction
from .errors import DomainError, FunctionFormatError
from .log_config import get_logger
from .normed import NormedSpace

logger = get_logger(__name__)

FORMAT_VERSION = 1

FUNCTION_SCHEMA = {
    "type": "object",
    "required": ["format_version", "n", "d", "values"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "n": {"type": "integer", "minimum": 1, "maximum": MAX_DIMENSION},
        "d": {"type": "integer", "minimum": 1},
        "boolean": {"type": "boolean"},
        "space": {"type": "object"},
        "values": {
            "type": "array",
            "items": {
                "oneOf": [
                    {"type": "number"},
                    {"type": "array", "items": {"type": "number"}, "minItems": 1},
                ]
            },
        },
    },
}

_VALIDATOR = Draft7Validator(FUNCTION_SCHEMA)


class FunctionFile(NamedTuple):
    function: CubeFunction
    space: Optional[NormedSpace]


def _line_of(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _value_line(text: str, index: int) -> Optional[int]:
    start = _line_of(text, "values")
    return None if start is None else start + 1 + index


def _format_value(row: np.ndarray, boolean: bool) -> str:
    if boolean:
        return str(int(row[0]))
    if row.shape[0] == 1:
        return json.dumps(float(row[0]))
    return json.dumps([float(x) for x in row])


def dumps_function(f: CubeFunction, space: Optional[NormedSpace] = None) -> str:
    boolean = f.is_boolean
    lines = [
        "{",
        f'  "format_version": {FORMAT_VERSION},',
        f'  "n": {f.n},',
        f'  "d": {f.d},',
        f'  "boolean": {json.dumps(boolean)},',
        f'  "space": {json.dumps(space.to_dict() if space is not None else NormedSpace(d=f.d).to_dict())},',
        '  "values": [',
    ]
    rows = [f"    {_format_value(row, boolean)}" for row in f.values]
    lines.append(",\n".join(rows))
    lines.extend(["  ]", "}"])
    return "\n".join(lines) + "\n"


def save_function(f: CubeFunction, path: str, space: Optional[NormedSpace] = None) -> None:
    """Write f (and optionally its target space) to path."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as handle:
        handle.write(dumps_function(f, space))
    logger.debug(f"Saved function on n={f.n}, d={f.d} to {path}")


def loads_function(text: str) -> FunctionFile:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FunctionFormatError(f"not valid JSON: {exc.msg}", line=exc.lineno) from None

    error = best_match(_VALIDATOR.iter_errors(document))
    if error is not None:
        path = [str(p) for p in error.absolute_path]
        field = path[0] if path else None
        if error.validator == "required" and isinstance(document, dict):
            field = next((k for k in FUNCTION_SCHEMA["required"] if k not in document), None)
        line = None
        if len(path) >= 2 and path[0] == "values":
            line = _value_line(text, int(path[1]))
        elif field:
            line = _line_of(text, field)
        raise FunctionFormatError(error.message, field=field, line=line)

    n, d, values = document["n"], document["d"], document["values"]
    if len(values) != 1 << n:
        raise FunctionFormatError(f"expected 2^{n} = {1 << n} entries, found {len(values)}",
                                  field="values", line=_line_of(text, "values"))
    rows = []
    for index, entry in enumerate(values):
        row = entry if isinstance(entry, list) else [entry]
        if len(row) != d:
            raise FunctionFormatError(f"entry {index} has {len(row)} components, expected d={d}",
                                      field="values", line=_value_line(text, index))
        rows.append(row)
    array = np.asarray(rows, dtype=float)

    boolean = document.get("boolean")
    try:
        function = CubeFunction(array if d > 1 else array[:, 0], boolean=boolean)
    except DomainError as exc:
        raise FunctionFormatError(str(exc), field="boolean", line=_line_of(text, "boolean")) from None

    space = None
    if "space" in document:
        try:
            space = NormedSpace.from_dict(document["space"])
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise FunctionFormatError(f"invalid space: {exc}", field="space", line=_line_of(text, "space")) from None
        if space.d != d:
            raise FunctionFormatError(f"space has dimension {space.d}, values have d={d}",
                                      field="space", line=_line_of(text, "space"))
    return FunctionFile(function, space)


def read_function_file(path: str) -> FunctionFile:
    """Function and (when present) target space from a function file."""
    with open(path) as handle:
        text = handle.read()
    return loads_function(text)


def load_function(path: str) -> CubeFunction:
    return read_function_file(path).function


def function_document(f: CubeFunction, space: Optional[NormedSpace] = None) -> Dict[str, Any]:
    return json.loads(dumps_function(f, space))
