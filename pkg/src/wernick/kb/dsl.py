"""Parser for the line-oriented knowledge-base language.

Statements (one per line; indented lines continue the previous one)::

    point A B C ...
    def [tag:] <fact>
    lemma [tag:] <fact>
    generic <id>: <premises> => <conclusions>
    rule <id>: needs <premises> gives ?V op <call> [facts <facts>]
               [ndg <conditions>] says "<template>"

Facts are prefix forms such as ``vecratio A G A Ma 2/3`` or
``oncircle B circ(O,A)``.  Pattern variables are written ``?X``.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from ..geom import LABELS
from .refs import TRIANGLE_ANGLES, AngleExpr, Fact, Ref, angle, circ, diam, hom, line, pt


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line, self.col = line, col


class ValidationError(ValueError):
    pass


# -- terms ----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: Any


@dataclass(frozen=True)
class Expr:
    """Rational arithmetic over bound variables, e.g. ``?r/(?r-1)``."""

    source: str
    tree: Any = field(compare=False, hash=False, repr=False)

    def eval(self, binding: dict) -> Fraction:
        return _eval(self.tree.body, binding)


@dataclass(frozen=True)
class Ctor:
    tag: str
    args: tuple


def _eval(node, binding) -> Fraction:
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left, binding), _eval(node.right, binding)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, binding)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        v = binding[node.id]
        if not isinstance(v, Fraction):
            raise TypeError(f"?{node.id} is not a rational")
        return v
    raise ValueError("unsupported expression")


@dataclass(frozen=True)
class Pattern:
    pred: str
    args: tuple
    negated: bool = False


@dataclass(frozen=True)
class Guard:
    """Non-fact premise: ``point ?X``, ``unknown ?P``, ``distinct ?X ?Y``..."""

    kind: str
    args: tuple


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass
class GenericLemma:
    id: str
    premises: list
    conclusions: list


@dataclass
class ConstructionRule:
    id: str
    premises: list
    output: Var
    op: Call
    facts: list
    ndg: list
    template: str

    def input_vars(self) -> list[str]:
        return [a.name for a in self.op.args if isinstance(a, Var)]


@dataclass
class KBSource:
    points: list[str] = field(default_factory=list)
    definitions: list[tuple[str, Fact]] = field(default_factory=list)
    lemmas: list[tuple[str, Fact]] = field(default_factory=list)
    generics: list[GenericLemma] = field(default_factory=list)
    rules: list[ConstructionRule] = field(default_factory=list)


GUARDS = {"point", "line", "circle", "curve", "angle", "locus", "unknown", "distinct", "less"}
ARITY = {
    "online": 2, "oncircle": 2, "onlocus": 2, "on": 2, "perp": 2, "perpat": 3,
    "vecratio": 5, "harmonic": 4, "tangent": 2, "bisects": 5, "reflection": 3,
    "seesangle": 4, "center": 2, "diameter": 3, "homof": 4, "angledef": 4,
    "arcdef": 4, "arcbase": 2, "pbis": 3,
}
KIND_WORDS = {"internal", "external", "either"}
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9']*\Z")
_RATIONAL = re.compile(r"-?\d+(/\d+)?\Z")
_ANGLE = re.compile(r"(?:(?P<c>-?\d+(?:/\d+)?)\*)?(?P<base>BAC|CBA|ACB)(?:\+(?P<p>\d+(?:/\d+)?)\*pi)?\Z")


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses and quotes."""
    out, depth, cur, quoted = [], 0, [], False
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == '"':
            quoted = not quoted
        elif not quoted and ch == "(":
            depth += 1
        elif not quoted and ch == ")":
            depth -= 1
        if not quoted and depth == 0 and text.startswith(sep, i):
            out.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def tokens(text: str) -> list[str]:
    return split_top(text, " ")


class _Parser:
    def __init__(self, declared: Optional[set[str]] = None):
        self.declared = declared if declared is not None else set()
        self.lineno = 0

    def fail(self, msg, col=0):
        raise ParseError(msg, self.lineno, col)

    # terms
    def label(self, tok: str) -> str:
        if not _IDENT.match(tok):
            self.fail(f"bad point name {tok!r}")
        if tok not in self.declared:
            raise ValidationError(f"line {self.lineno}: unknown point {tok!r}")
        return tok

    def rational(self, tok: str) -> Fraction:
        if not _RATIONAL.match(tok):
            raise ValidationError(f"line {self.lineno}: malformed rational {tok!r}")
        try:
            return Fraction(tok)
        except ZeroDivisionError:
            raise ValidationError(f"line {self.lineno}: zero denominator in {tok!r}") from None

    def angle_expr(self, tok: str) -> AngleExpr:
        m = _ANGLE.match(tok)
        if not m:
            raise ValidationError(f"line {self.lineno}: malformed angle expression {tok!r}")
        coeff = Fraction(m["c"]) if m["c"] else Fraction(1)
        return AngleExpr(coeff, m["base"], Fraction(m["p"]) if m["p"] else Fraction(0))

    def ref(self, tok: str) -> Ref:
        m = re.match(r"(\w+)\((.*)\)\Z", tok)
        if not m:
            return pt(self.label(tok))
        name, inner = m.group(1), split_top(m.group(2), ",")
        if name == "line" and len(inner) == 2:
            return line(*(self.label(t) for t in inner))
        if name == "circ" and len(inner) == 2:
            return circ(*(self.label(t) for t in inner))
        if name == "diam" and len(inner) == 2:
            return diam(*(self.label(t) for t in inner))
        if name == "angle" and len(inner) == 3:
            return angle(*(self.label(t) for t in inner))
        if name == "hom" and len(inner) == 3:
            return hom(self.label(inner[0]), self.rational(inner[1]), self.ref(inner[2]))
        self.fail(f"unknown object form {tok!r}")

    def term(self, tok: str):
        if tok.startswith("?") and _IDENT.match(tok[1:]):
            return Var(tok[1:])
        if "?" in tok:
            m = re.match(r"(\w+)\((.*)\)\Z", tok)
            if m and m.group(1) in ("hom", "line", "circ", "diam", "bis", "arc", "angle"):
                return Ctor(m.group(1), tuple(self.term(t) for t in split_top(m.group(2), ",")))
            src = tok.replace("?", "")
            try:
                tree = ast.parse(src, mode="eval")
            except SyntaxError:
                self.fail(f"bad expression {tok!r}")
            return Expr(src, tree)
        if _RATIONAL.match(tok):
            return Const(self.rational(tok))
        if tok in KIND_WORDS:
            return Const(tok)
        if _ANGLE.match(tok):
            return Const(self.angle_expr(tok))
        return Const(self.ref(tok))

    # facts
    def fact(self, text: str) -> list[Fact]:
        """A ground fact; ``perpat`` and ``bisects`` are normalized."""
        toks = tokens(text)
        if not toks:
            self.fail("empty fact")
        pred, args = toks[0], toks[1:]
        if pred not in ARITY or pred in ("on", "onlocus", "center", "diameter", "homof", "angledef", "arcdef", "arcbase", "pbis"):
            self.fail(f"unknown predicate {pred!r}")
        if pred == "bisects":
            if len(args) not in (2, 3):
                self.fail("bisects takes a line, an angle and an optional kind")
            kind = args[2] if len(args) == 3 else "either"
            if kind not in KIND_WORDS:
                raise ValidationError(f"line {self.lineno}: bad bisector kind {kind!r}")
            l, a = self.ref(args[0]), self.ref(args[1])
            if a.kind != "angle":
                self.fail("bisects needs angle(X,V,Y)")
            x, v, y = (pt(n) for n in a.args)
            return [Fact("bisects", (l, x, v, y, kind))]
        if len(args) != ARITY[pred]:
            self.fail(f"{pred} takes {ARITY[pred]} arguments, got {len(args)}")
        if pred == "vecratio":
            vals = tuple(self.ref(t) for t in args[:4]) + (self.rational(args[4]),)
            if vals[4] == 0:
                raise ValidationError(f"line {self.lineno}: zero vector ratio")
            return [Fact(pred, vals)]
        if pred == "seesangle":
            return [Fact(pred, tuple(self.ref(t) for t in args[:3]) + (self.angle_expr(args[3]),))]
        vals = tuple(self.ref(t) for t in args)
        if pred == "perpat":
            l1, m, l2 = vals
            return [Fact("perp", (l1, l2)), Fact("online", (m, l1)), Fact("online", (m, l2))]
        return [Fact(pred, vals)]

    def pattern(self, text: str):
        toks = tokens(text)
        if not toks:
            self.fail("empty pattern")
        negated = toks[0] == "not"
        if negated:
            toks = toks[1:]
        head, rest = toks[0], toks[1:]
        if head in GUARDS and not negated:
            return Guard(head, tuple(self.term(t) for t in rest))
        if head not in ARITY:
            self.fail(f"unknown predicate {head!r}")
        if len(rest) != ARITY[head]:
            self.fail(f"{head} takes {ARITY[head]} arguments, got {len(rest)}")
        return Pattern(head, tuple(self.term(t) for t in rest), negated)

    def call(self, text: str) -> Call:
        m = re.match(r"(\w+)\((.*)\)\Z", text.strip())
        if not m:
            self.fail(f"bad call {text!r}")
        return Call(m.group(1), tuple(self.term(t) for t in split_top(m.group(2), ",")))

    # statements
    def generic(self, body: str) -> GenericLemma:
        gid, _, rest = body.partition(":")
        if "=>" not in rest:
            self.fail("generic lemma needs '=>'")
        lhs, rhs = rest.split("=>", 1)
        return GenericLemma(
            gid.strip(),
            [self.pattern(p) for p in split_top(lhs, ",")],
            [self.pattern(p) for p in split_top(rhs, ",")],
        )

    def rule(self, body: str) -> ConstructionRule:
        rid, _, rest = body.partition(":")
        m = re.match(
            r"\s*needs\s+(?P<needs>.*?)\s+gives\s+(?P<gives>\S+)\s+op\s+(?P<op>\w+\(.*?\))"
            r"(?:\s+facts\s+(?P<facts>.*?))?(?:\s+ndg\s+(?P<ndg>.*?))?\s+says\s+\"(?P<says>[^\"]*)\"\s*\Z",
            rest,
        )
        if not m:
            self.fail(f"malformed rule {rid.strip()!r}")
        out = self.term(m["gives"])
        if not isinstance(out, Var):
            self.fail("rule output must be a variable")
        rule = ConstructionRule(
            id=rid.strip(),
            premises=[self.pattern(p) for p in split_top(m["needs"], ",")],
            output=out,
            op=self.call(m["op"]),
            facts=[self.pattern(p) for p in split_top(m["facts"] or "", ",")],
            ndg=[self.call(c) for c in split_top(m["ndg"] or "", ",")],
            template=m["says"],
        )
        bound = _vars(rule.premises)
        for what, used in (("gives", {out.name}), ("op", _vars(rule.op)), ("ndg", _vars(rule.ndg)), ("says", _slot_vars(rule.template))):
            free = sorted(used - bound)
            if free:
                raise ValidationError(f"line {self.lineno}: rule {rule.id}: {what} uses unbound {free}")
        return rule


TEMPLATE_SLOT = re.compile(r"\{(?:(vec|name) )?\?(\w+)(?: \?(\w+))?\}")


def _vars(node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Expr):
        return {n.id for n in ast.walk(node.tree) if isinstance(n, ast.Name)}
    if isinstance(node, (list, tuple)):
        return set().union(*(_vars(x) for x in node)) if node else set()
    if hasattr(node, "__dataclass_fields__"):
        return _vars([getattr(node, f) for f in node.__dataclass_fields__])
    return set()


def _slot_vars(template: str) -> set[str]:
    out = set()
    for m in TEMPLATE_SLOT.finditer(template):
        out.add(m[2])
        if m[3]:
            out.add(m[3])
    return out


def _logical_lines(text: str):
    cur, start = None, 0
    for i, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0] if '"' not in raw else _strip_comment(raw)
        if not body.strip():
            continue
        if body[0].isspace() and cur is not None:
            cur += " " + body.strip()
            continue
        if cur is not None:
            yield start, cur
        cur, start = body.strip(), i
    if cur is not None:
        yield start, cur


def _strip_comment(raw: str) -> str:
    quoted = False
    for i, ch in enumerate(raw):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return raw[:i]
    return raw


def parse_kb(text: str) -> KBSource:
    src = KBSource()
    p = _Parser()
    for lineno, stmt in _logical_lines(text):
        p.lineno = lineno
        head, _, body = stmt.partition(" ")
        if head == "point":
            for name in body.split():
                if not _IDENT.match(name):
                    raise ParseError(f"bad point name {name!r}", lineno, stmt.find(name) + 1)
                if name not in LABELS:
                    raise ValidationError(f"line {lineno}: {name!r} is not in the triangle vocabulary")
                if name in p.declared:
                    raise ValidationError(f"line {lineno}: point {name!r} declared twice")
                p.declared.add(name)
                src.points.append(name)
        elif head in ("def", "lemma"):
            tag = ""
            m = re.match(r"([\w.-]+):\s*(.*)\Z", body)
            if m and m.group(1) not in ARITY:
                tag, body = m.group(1), m.group(2)
            target = src.definitions if head == "def" else src.lemmas
            for f in p.fact(body):
                target.append((tag, f))
        elif head == "generic":
            src.generics.append(p.generic(body))
        elif head == "rule":
            src.rules.append(p.rule(body))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, 1)
    return src
