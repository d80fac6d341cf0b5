"""JSON encodings of points, monomials, algebra elements and measures.

Every ``encode`` output decodes back to an equal value.  Decoders also
accept plain integers and ``"p/q"`` strings wherever a rational is expected.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .affine import AffinePoint, ConePoint
from .monomials import AddMonomial, AlgebraElement, ClMonomial, Monomial, MultMonomial
from .states import Measure, NAMED_MEASURES


class CodecError(ValueError):
    pass


def encode_rational(q: Fraction) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def decode_rational(obj: Any) -> Fraction:
    if isinstance(obj, bool):
        raise CodecError("booleans are not rationals")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except ValueError as exc:
            raise CodecError(f"bad rational {obj!r}") from exc
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if not (isinstance(num, int) and isinstance(den, int)) or den == 0:
            raise CodecError(f"bad rational {obj!r}")
        return Fraction(num, den)
    raise CodecError(f"expected a rational, got {obj!r}")


def _int(obj: Any, key: str) -> int:
    try:
        v = obj[key]
    except (KeyError, TypeError) as exc:
        raise CodecError(f"missing field {key!r} in {obj!r}") from exc
    if isinstance(v, bool) or not isinstance(v, int):
        raise CodecError(f"field {key!r} must be an integer, got {v!r}")
    return v


def _rat(obj: Any, key: str) -> Fraction:
    if not isinstance(obj, dict) or key not in obj:
        raise CodecError(f"missing field {key!r} in {obj!r}")
    return decode_rational(obj[key])


def encode(value) -> Any:
    """JSON-ready form of any supported value."""
    if isinstance(value, AffinePoint):
        return {"a": encode_rational(value.a), "r": encode_rational(value.r)}
    if isinstance(value, ConePoint):
        return {"a": value.a, "m": value.m}
    if isinstance(value, Monomial):
        return {"a": value.a, "m": value.m, "n": value.n, "b": value.b}
    if isinstance(value, AddMonomial):
        return {"a": value.a, "k": value.k, "b": value.b}
    if isinstance(value, MultMonomial):
        return {"r": encode_rational(value.r), "s": encode_rational(value.s), "g": encode_rational(value.g)}
    if isinstance(value, ClMonomial):
        return {"t": encode_rational(value.t), "g": encode_rational(value.g)}
    if isinstance(value, AlgebraElement):
        return [
            {"mono": encode(m), "re": complex(c).real, "im": complex(c).imag}
            for m, c in sorted(value.terms.items(), key=lambda kv: _sort_key(kv[0]))
        ]
    if isinstance(value, Measure):
        return encode_measure(value)
    if isinstance(value, Fraction):
        return encode_rational(value)
    raise TypeError(f"cannot encode {type(value).__name__}")


def _sort_key(m):
    return tuple(encode_key(m))


def encode_key(m):
    if isinstance(m, Monomial):
        return (m.a, m.m, m.n, m.b)
    if isinstance(m, AddMonomial):
        return (m.a, m.k, m.b)
    if isinstance(m, MultMonomial):
        return (m.r, m.s, m.g)
    return (m.t, m.g)


_MONOMIAL_FIELDS = {
    frozenset("amnb"): "full",
    frozenset("akb"): "add",
    frozenset("rsg"): "mult",
    frozenset("tg"): "cl",
}


def decode_monomial(obj: Any, kind: str = None):
    """Decode any monomial presentation; ``kind`` forces one of full/add/mult/cl."""
    if not isinstance(obj, dict):
        raise CodecError(f"expected a JSON object, got {obj!r}")
    detected = _MONOMIAL_FIELDS.get(frozenset(obj))
    if detected is None:
        raise CodecError(f"unrecognised monomial fields {sorted(obj)}")
    if kind is not None and kind != detected:
        raise CodecError(f"expected a {kind} monomial, got {detected} fields")
    try:
        if detected == "full":
            return Monomial(_int(obj, "a"), _int(obj, "m"), _int(obj, "n"), _int(obj, "b"))
        if detected == "add":
            return AddMonomial(_int(obj, "a"), _int(obj, "k"), _int(obj, "b"))
        if detected == "mult":
            return MultMonomial(_rat(obj, "r"), _rat(obj, "s"), _rat(obj, "g"))
        return ClMonomial(_rat(obj, "t"), _rat(obj, "g"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CodecError):
            raise
        raise CodecError(str(exc)) from exc


def decode_affine(obj: Any) -> AffinePoint:
    try:
        return AffinePoint(_rat(obj, "a"), _rat(obj, "r"))
    except ValueError as exc:
        raise CodecError(str(exc)) from exc


def decode_cone(obj: Any) -> ConePoint:
    try:
        return ConePoint(_int(obj, "a"), _int(obj, "m"))
    except ValueError as exc:
        raise CodecError(str(exc)) from exc


def decode_element(obj: Any, kind: str = None) -> AlgebraElement:
    if not isinstance(obj, list):
        raise CodecError("an algebra element is a list of terms")
    terms = {}
    for term in obj:
        try:
            mono = decode_monomial(term["mono"], kind)
            coeff = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        except (KeyError, TypeError) as exc:
            raise CodecError(f"bad term {term!r}") from exc
        terms[mono] = terms.get(mono, 0) + coeff
    return AlgebraElement(terms)


def encode_measure(mu: Measure) -> dict:
    if mu.kind == "lebesgue":
        return {"kind": "lebesgue"}
    if mu.kind == "atoms":
        return {
            "kind": "atoms",
            "atoms": [{"turns": encode_rational(t), "weight": encode_rational(w)} for t, w in mu.atoms],
        }
    return {
        "kind": "mixture",
        "parts": [{"measure": encode_measure(m), "weight": encode_rational(w)} for m, w in mu.parts],
    }


def decode_measure(obj: Any) -> Measure:
    """Decode a measure from JSON or one of the names delta1, delta-1, lebesgue, rootsQ."""
    if isinstance(obj, str):
        if obj in NAMED_MEASURES:
            return NAMED_MEASURES[obj]
        if obj.startswith("roots") and obj[5:].isdigit() and int(obj[5:]) > 0:
            return Measure.roots_of_unity(int(obj[5:]))
        raise CodecError(f"unknown measure name {obj!r}")
    if not isinstance(obj, dict) or "kind" not in obj:
        raise CodecError(f"bad measure {obj!r}")
    try:
        kind = obj["kind"]
        if kind == "lebesgue":
            return Measure.lebesgue()
        if kind == "atoms":
            return Measure.from_atoms(
                [(decode_rational(a["turns"]), decode_rational(a["weight"])) for a in obj["atoms"]]
            )
        if kind == "mixture":
            return Measure.mixture(
                [(decode_measure(p["measure"]), decode_rational(p["weight"])) for p in obj["parts"]]
            )
    except (KeyError, TypeError) as exc:
        raise CodecError(f"bad measure {obj!r}") from exc
    except ValueError as exc:
        if isinstance(exc, CodecError):
            raise
        raise CodecError(str(exc)) from exc
    raise CodecError(f"unknown measure kind {kind!r}")


def load_measure(text: str) -> Measure:
    """Parse ``--measure``: a name, a JSON document, or a path to a JSON file."""
    text = text.strip()
    if text in NAMED_MEASURES or (text.startswith("roots") and text[5:].isdigit()):
        return decode_measure(text)
    if text.startswith(("{", "[", '"')):
        return decode_measure(_loads(text))
    path = Path(text)
    if path.is_file():
        return decode_measure(_loads(path.read_text()))
    raise CodecError(f"measure {text!r} is neither a known name, JSON, nor a file")


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodecError(f"invalid JSON: {exc}") from exc


def loads_monomial(text: str, kind: str = None):
    return decode_monomial(_loads(text), kind)


def dumps(value: Union[Any]) -> str:
    return json.dumps(encode(value), separators=(",", ":"))
