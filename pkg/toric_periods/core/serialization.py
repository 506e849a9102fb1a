"""
Exact JSON encoding: integers as decimal strings, rationals as "p/q".
"""
import json
from enum import Enum
from fractions import Fraction
from typing import Any


def format_rational(value) -> str:
    """Render an int or Fraction as "n" or "p/q"."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    raise TypeError(f"not an exact number: {value!r}")


def parse_rational(text) -> Fraction:
    """Parse "n", "p/q" (or a plain int) into a Fraction."""
    if isinstance(text, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"cannot parse exact number from {text!r}")


def parse_integer(text) -> int:
    value = parse_rational(text)
    if value.denominator != 1:
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def to_exact_json(obj: Any) -> Any:
    """Recursively convert numbers to strings; floats are rejected."""
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in exact artifacts")
    if isinstance(obj, (bool, type(None))):
        return obj
    if isinstance(obj, (int, Fraction)):
        return format_rational(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_exact_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_exact_json(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [to_exact_json(v) for v in sorted(obj)]
    if hasattr(obj, "to_dict"):
        return to_exact_json(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Deterministic exact JSON text."""
    return json.dumps(to_exact_json(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
