"""Object references and facts of the symbolic knowledge base."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple

from ..geom import LABELS

KINDS = ("point", "line", "circle", "angle", "locus")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}
_TAG_RANK = {t: i for i, t in enumerate(("pt", "line", "bis", "hom", "circ", "diam", "angle", "arc"))}

TRIANGLE_ANGLES = {"BAC": ("B", "A", "C"), "CBA": ("C", "B", "A"), "ACB": ("A", "C", "B")}


@dataclass(frozen=True)
class Ref:
    """A symbolic geometric object.

    ``tag`` says how the object is derived: ``pt`` (named point), ``line``
    (line through two named points), ``bis`` (perpendicular bisector of two
    points), ``hom`` (homothetic image of a line), ``circ`` (center, point),
    ``diam`` (circle over a diameter), ``angle`` (X, V, Y) and ``arc``
    (angle locus over a segment).
    """

    kind: str
    tag: str
    args: tuple

    def __hash__(self):
        # refs are hashed constantly during matching; cache it
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.kind, self.tag, self.args))
            object.__setattr__(self, "_hash", h)
            return h

    def __repr__(self):
        return self.text()

    def text(self) -> str:
        if self.tag == "pt":
            return self.args[0]
        return f"{self.tag}({','.join(_arg_text(a) for a in self.args)})"


def _arg_text(a) -> str:
    if isinstance(a, Ref):
        return a.text()
    if isinstance(a, Fraction):
        return str(a)
    if isinstance(a, AngleExpr):
        return a.text()
    return str(a)


def pt(name: str) -> Ref:
    return Ref("point", "pt", (name,))


def line(x: str, y: str) -> Ref:
    return Ref("line", "line", tuple(sorted((x, y), key=_label_rank)))


def bis(x: str, y: str) -> Ref:
    return Ref("line", "bis", tuple(sorted((x, y), key=_label_rank)))


def hom(center: str, k: Fraction, base: Ref) -> Ref:
    return Ref("line", "hom", (center, Fraction(k), base))


def circ(center: str, through: str) -> Ref:
    return Ref("circle", "circ", (center, through))


def diam(x: str, y: str) -> Ref:
    return Ref("circle", "diam", tuple(sorted((x, y), key=_label_rank)))


def angle(x: str, v: str, y: str) -> Ref:
    x, y = sorted((x, y), key=_label_rank)
    return Ref("angle", "angle", (x, v, y))


def arc(x: str, y: str, e: "AngleExpr") -> Ref:
    x, y = sorted((x, y), key=_label_rank)
    return Ref("locus", "arc", (x, y, e))


_VOCAB_RANK = {name: i for i, name in enumerate(LABELS)}


def _label_rank(name: str):
    return (_VOCAB_RANK.get(name, 10_000), name)


def sort_key(obj: Any):
    if isinstance(obj, Ref):
        return (0, _KIND_RANK[obj.kind], _TAG_RANK[obj.tag], tuple(sort_key(a) for a in obj.args))
    if isinstance(obj, str):
        return (1, _label_rank(obj))
    if isinstance(obj, Fraction):
        return (2, obj)
    if isinstance(obj, AngleExpr):
        return (3, obj.coeff, obj.base or "", obj.plus_pi)
    raise TypeError(f"unsortable {obj!r}")


class AngleExpr(NamedTuple):
    """``coeff * base + plus_pi * pi`` where base names a triangle angle."""

    coeff: Fraction
    base: str | None
    plus_pi: Fraction

    def text(self) -> str:
        parts = []
        if self.base:
            parts.append(f"{self.coeff}*{self.base}")
        if self.plus_pi:
            parts.append(f"{self.plus_pi}*pi")
        return "+".join(parts) or "0"

    def value(self, base_value: float | None) -> float:
        v = float(self.plus_pi) * math.pi
        if self.base:
            v += float(self.coeff) * base_value
        return v

    def base_angle(self) -> Ref | None:
        if not self.base:
            return None
        x, v, y = TRIANGLE_ANGLES[self.base]
        return angle(x, v, y)


class Fact(NamedTuple):
    pred: str
    args: tuple

    def text(self) -> str:
        return " ".join([self.pred] + [_arg_text(a) for a in self.args])

    def __repr__(self):
        return f"<{self.text()}>"


# predicates that describe how objects are built rather than geometric truths
STRUCTURAL = frozenset({"center", "diameter", "homof", "angledef", "arcdef", "arcbase", "pbis"})


def objects_of(fact: Fact):
    for a in fact.args:
        if isinstance(a, Ref):
            yield a


def points_in(obj) -> set[str]:
    """Every named point label mentioned (recursively) by an argument."""
    if isinstance(obj, Ref):
        if obj.tag == "pt":
            return {obj.args[0]}
        out: set[str] = set()
        for a in obj.args:
            out |= points_in(a)
        return out
    if isinstance(obj, str):
        return {obj}
    if isinstance(obj, Fact):
        out = set()
        for a in obj.args:
            out |= points_in(a)
        return out
    return set()


# -- display -------------------------------------------------------------

def label_display(name: str) -> str:
    """``Ha`` -> ``H_a``, ``T'a`` -> ``T'_a``, ``H'bc`` -> ``H'_BC``."""
    if len(name) == 1:
        return name
    head = name[0]
    rest = name[1:]
    prime = ""
    if rest.startswith("'"):
        prime, rest = "'", rest[1:]
    sub = rest.upper() if len(rest) > 1 else rest
    return f"{head}{prime}_{sub}" if rest else head + prime


def display(obj: Any) -> str:
    if isinstance(obj, str):
        return label_display(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, AngleExpr):
        parts = []
        if obj.base:
            x, v, y = TRIANGLE_ANGLES[obj.base]
            c = "" if obj.coeff == 1 else f"{obj.coeff}*"
            parts.append(f"{c}angle {x}{v}{y}")
        if obj.plus_pi:
            c = "" if obj.plus_pi == 1 else f"{obj.plus_pi}*"
            parts.append(f"{c}pi")
        return " + ".join(parts)
    r: Ref = obj
    a = r.args
    if r.tag == "pt":
        return label_display(a[0])
    if r.tag == "line":
        return label_display(a[0]) + label_display(a[1])
    if r.tag == "bis":
        return f"s({label_display(a[0])}{label_display(a[1])})"
    if r.tag == "hom":
        return f"homothety_{{{label_display(a[0])},{a[1]}}}({display(a[2])})"
    if r.tag == "circ":
        return f"k({label_display(a[0])},{label_display(a[1])})"
    if r.tag == "diam":
        return f"k({label_display(a[0])}{label_display(a[1])})"
    if r.tag == "angle":
        return "".join(label_display(x) for x in a)
    if r.tag == "arc":
        return f"L({label_display(a[0])}{label_display(a[1])}, {display(a[2])})"
    return r.text()


def describe(obj: Ref) -> str:
    """Object with its kind word, as used in construction sentences."""
    if obj.tag == "diam":
        return f"the circle with diameter {label_display(obj.args[0])}{label_display(obj.args[1])}"
    if obj.tag == "angle":
        return f"the angle {display(obj)}"
    if obj.tag == "arc":
        x, y, e = obj.args
        return f"the locus of points S with angle {label_display(x)}S{label_display(y)} = {display(e)}"
    return f"the {obj.kind} {display(obj)}"
