"""Shared JSON conventions: exact rationals travel as {"num": p, "den": q}."""

from __future__ import annotations

from fractions import Fraction


def frac_to_json(x) -> dict:
    f = Fraction(x)
    return {"num": f.numerator, "den": f.denominator}


def frac_from_json(data) -> Fraction:
    """Parse a rational from {"num","den"}, an integer, or a "p/q" string.
    Floats are rejected: exact outputs must not pick up binary drift."""
    if isinstance(data, bool):
        raise ValueError("expected a rational, got a boolean")
    if isinstance(data, dict):
        return Fraction(int(data["num"]), int(data["den"]))
    if isinstance(data, int):
        return Fraction(data)
    if isinstance(data, str):
        return Fraction(data)
    raise ValueError(f"expected a rational (int, 'p/q', or {{num,den}}), got {data!r}")


def canonical_dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    import json

    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
