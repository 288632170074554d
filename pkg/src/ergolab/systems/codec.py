"""JSON encoding of points."""

from fractions import Fraction
from typing import Any

from ..errors import IllegalPoint
from .dynamics import DynamicalSystem, IntervalSystem, PowerSystem, ProductSystem, Rotation, SymbolicSystem
from .points import Point, SymbolicPoint


def _encode_word(word: tuple[int, ...]) -> str | list[int]:
    if all(s < 10 for s in word):
        return "".join(str(s) for s in word)
    return list(word)


def _decode_word(data: str | list[int]) -> tuple[int, ...]:
    if isinstance(data, str):
        if data and not data.isdigit():
            raise IllegalPoint(f"Word {data!r} must be a string of digits")
        return tuple(int(ch) for ch in data)
    return tuple(int(s) for s in data)


def encode_point(x: Point) -> Any:
    """
    JSON-compatible form of a point.

    Examples:
        SymbolicPoint.eventually_periodic("01", "0") -> {"prefix": "01", "tail": "0"}
        Fraction(1, 3) -> "1/3"
        (0.25, Fraction(1, 2)) -> [0.25, "1/2"]
    """
    if isinstance(x, SymbolicPoint):
        data: dict[str, Any] = {"prefix": _encode_word(x.prefix)}
        if x.tail:
            data["tail"] = _encode_word(x.tail)
        else:
            data["generator"] = x.generator
            data["offset"] = x.offset
        return data
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, tuple):
        return [encode_point(c) for c in x]
    return float(x)


def decode_point(sys: DynamicalSystem, data: Any) -> Point:
    """
    Inverse of :func:`encode_point` for points of ``sys``; validates the result.

    Raises:
        IllegalPoint: If the data does not describe a point of ``sys``.
    """
    if isinstance(sys, PowerSystem):
        return decode_point(sys.base, data)
    if isinstance(sys, SymbolicSystem):
        if not isinstance(data, dict):
            raise IllegalPoint(f"Symbolic points are objects, got {data!r}")
        prefix = _decode_word(data.get("prefix", ""))
        if "tail" in data:
            point = SymbolicPoint(prefix=prefix, tail=_decode_word(data["tail"]))
        else:
            point = SymbolicPoint(prefix=prefix, generator=data.get("generator"), offset=int(data.get("offset", 0)))
        return sys.coerce(point)
    if isinstance(sys, Rotation):
        try:
            return sys.coerce(Fraction(data) if isinstance(data, str) else data)
        except (ValueError, ZeroDivisionError) as e:
            raise IllegalPoint(f"Cannot read rotation point {data!r}") from e
    if isinstance(sys, IntervalSystem):
        return sys.coerce(data)
    if isinstance(sys, ProductSystem):
        if not isinstance(data, list) or len(data) != 2:
            raise IllegalPoint("Product points are pairs")
        return tuple(decode_point(f, c) for f, c in zip(sys.factors, data, strict=True))
    raise IllegalPoint(f"Cannot decode points of '{sys.name}'")
