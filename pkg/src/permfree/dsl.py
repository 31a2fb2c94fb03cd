"""Text forms for words, trace products and centered polynomial specs.

    words            S St S St          (B/Bs, G/Gt also accepted)
    powers           S^2 St^3
    trace products   Tr(S^2)|Tr(St^2)   or   Tr(S St)|Tr(S)|Tr(St)
    centered specs   TrP(x^2;+)|TrP(x^2-1/2x;-)P(x;+)
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from .errors import ValidationError
from .matrix_model import parse_word
from .second_order import CenteredPolyWord, TraceProductSpec

_SIGNS = {"+": 1, "-": -1, "−": -1}
_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(x(?:\^(\d+))?)?$")


def expand_powers(text: str) -> str:
    """``"S^2 St"`` -> ``"S S St"``."""
    out = []
    for tok in text.split():
        base, _, power = tok.partition("^")
        if power:
            if not power.isdigit() or int(power) < 1:
                raise ValidationError(f"bad exponent in {tok!r}")
            out += [base] * int(power)
        else:
            out.append(base)
    return " ".join(out)


def parse_word_dsl(text: str) -> tuple[int, ...]:
    word = parse_word(expand_powers(text))
    if not word:
        raise ValidationError("empty word")
    return word


def parse_poly(text: str) -> dict[int, Fraction]:
    """``"x^2 - 1/2x + 3"`` -> ``{2: 1, 1: -1/2, 0: 3}``."""
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise ValidationError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    out: dict[int, Fraction] = {}
    for sign, body in re.findall(r"([+-])([^+-]*)", s):
        m = _TERM.match(body)
        if not body or not m or (m.group(1) is None and m.group(2) is None):
            raise ValidationError(f"bad polynomial term {sign + body!r} in {text!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        exp = 0 if m.group(2) is None else int(m.group(3) or 1)
        out[exp] = out.get(exp, Fraction(0)) + (coef if sign == "+" else -coef)
    out = {e: c for e, c in out.items() if c}
    if not out:
        raise ValidationError(f"polynomial {text!r} is zero")
    return out


def format_poly(poly: Mapping[int, Fraction]) -> str:
    parts = []
    for e, c in sorted(poly.items(), reverse=True):
        c = Fraction(c)
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}") + ("x" if e == 1 else f"x^{e}")
        parts.append(("-" if c < 0 else "+") + body)
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def _split_traces(text: str) -> list[str]:
    sides = [t.strip() for t in text.split("|")]
    if any(not t for t in sides):
        raise ValidationError(f"empty trace in {text!r}")
    return sides


def parse_trace_spec(text: str) -> TraceProductSpec:
    words = []
    for side in _split_traces(text):
        m = re.fullmatch(r"Tr\((.*)\)", side)
        if not m:
            raise ValidationError(f"expected Tr(...), got {side!r}")
        words.append(parse_word_dsl(m.group(1)))
    return TraceProductSpec.from_words(words)


def _parse_factors(side: str):
    if not side.startswith("Tr"):
        raise ValidationError(f"expected TrP(...), got {side!r}")
    rest = side[2:]
    factors = re.findall(r"P\(([^;()]*);\s*([+\-−])\s*\)", rest)
    if not factors or re.sub(r"P\(([^;()]*);\s*([+\-−])\s*\)", "", rest).strip():
        raise ValidationError(f"could not parse factors in {side!r}")
    return [(parse_poly(p), _SIGNS[s]) for p, s in factors]


def parse_centered_spec(text: str) -> CenteredPolyWord:
    sides = _split_traces(text)
    if len(sides) != 2:
        raise ValidationError("a centered spec needs exactly two traces")
    left, right = (_parse_factors(s) for s in sides)
    return CenteredPolyWord(
        tuple(p for p, _ in left + right), tuple(w for _, w in left + right), len(left)
    )


def format_centered_spec(spec: CenteredPolyWord) -> str:
    def side(ks):
        return "Tr" + "".join(
            f"P({format_poly(spec.poly(k))};{'+' if spec.omega[k] == 1 else '-'})" for k in ks
        )

    n = len(spec.polys)
    return side(range(spec.s)) + "|" + side(range(spec.s, n))


def parse_spec(text: str) -> TraceProductSpec | CenteredPolyWord:
    """Dispatch on the form: any ``P(`` factor makes it a centered spec."""
    if "P(" in text:
        return parse_centered_spec(text)
    return parse_trace_spec(text)
