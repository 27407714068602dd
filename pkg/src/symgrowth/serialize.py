"""Canonical JSON conventions shared by certificates, reports and the CLI.

The output contract is byte-stability: the same object serializes to the
same bytes in every run and on every platform.  Keys are sorted, indentation
is fixed, rationals travel as exact lowest-terms "p/q" strings (bare "p"
when integral), and group elements travel as their encoding arrays.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction

from .errors import CertificateFormatError, ParameterError

_FRACTION_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def fraction_to_str(value: Fraction | int) -> str:
    """Render an exact rational as 'p/q' in lowest terms ('p' if integral)."""
    return str(Fraction(value))


def parse_fraction(text: str, what: str = "fraction") -> Fraction:
    """Parse an exact 'p/q' or 'p' string; decimals are rejected.

    Decimal notation is refused on purpose: a string like "0.3" looks exact
    but is not the rational 3/10 to a binary float reader, so only integer
    and slash forms are portable.
    """
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _FRACTION_RE.match(text.strip()):
        raise ParameterError(
            f"{what} must be an exact integer or p/q string, got {text!r}"
        )
    return Fraction(text.strip())


def encode_value(value):
    """Map a value to its JSON form: Fractions to strings, tuples to lists."""
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return fraction_to_str(value)
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    if isinstance(value, dict):
        return {k: encode_value(v) for k, v in value.items()}
    if value is None or isinstance(value, (int, str)):
        return value
    raise ParameterError(f"value {value!r} has no canonical JSON form")


def elements_to_json(elements) -> list[list[int]]:
    """Encode an iterable of element tuples as a list of int arrays."""
    return [list(x) for x in elements]


def elements_from_json(raw, what: str = "element list") -> list[tuple[int, ...]]:
    """Decode a JSON list of int arrays back to element tuples."""
    if not isinstance(raw, list):
        raise CertificateFormatError(f"{what} must be a list, got {type(raw).__name__}")
    out = []
    for item in raw:
        if not isinstance(item, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in item
        ):
            raise CertificateFormatError(f"{what} entries must be int arrays, got {item!r}")
        out.append(tuple(item))
    return out


def canonical_dumps(obj) -> str:
    """Serialize to the canonical byte-stable JSON text (trailing newline)."""
    return json.dumps(encode_value(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a sibling temp file and a single rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def load_json(path: str, what: str = "input") -> dict:
    """Read a JSON object from a file with a uniform error on failure."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read {what} file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{what} file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"{what} file {path} must hold a JSON object")
    return data
