"""Fact storage modulo predicate symmetries, and premise matching."""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

from .dsl import Const, Ctor, Expr, Guard, Pattern, Var
from .refs import Fact, Ref, arc, bis, circ, diam, hom, line, sort_key


def variants(f: Fact) -> list[tuple]:
    """All argument tuples equivalent to ``f`` under its predicate's symmetries."""
    a = f.args
    p = f.pred
    if p == "vecratio":
        x, y, z, w, r = a
        return [(x, y, z, w, r), (y, x, w, z, r), (z, w, x, y, 1 / r), (w, z, y, x, 1 / r)]
    if p == "harmonic":
        x, y, z, w = a
        return [(x, y, z, w), (y, x, w, z), (z, w, x, y), (w, z, y, x)]
    if p in ("perp",):
        return [a, (a[1], a[0])]
    if p == "reflection":
        return [a, (a[1], a[0], a[2])]
    if p == "bisects":
        l, x, v, y, k = a
        return [a, (l, y, v, x, k)]
    if p in ("seesangle", "arcdef"):
        s, x, y, e = a
        return [a, (s, y, x, e)]
    if p in ("pbis", "diameter"):
        return [a, (a[0], a[2], a[1])]
    if p == "angledef":
        g, x, v, y = a
        return [a, (g, y, v, x)]
    return [a]


def canonical(f: Fact) -> Fact:
    vs = variants(f)
    if len(vs) == 1:
        return f
    return Fact(f.pred, min(vs, key=lambda t: tuple(sort_key(x) for x in t)))


_ON = ("online", "oncircle", "onlocus")


class FactStore:
    """A deduplicated fact set with per-argument indexes over all variants."""

    def __init__(self, facts: Iterable[Fact] = ()):
        self.facts: set[Fact] = set()
        self._by_pred: dict[str, list[tuple]] = defaultdict(list)
        self._index: dict[tuple, list[tuple]] = defaultdict(list)
        for f in facts:
            self.add(f)

    def __len__(self):
        return len(self.facts)

    def __iter__(self):
        return iter(self.facts)

    def __contains__(self, f: Fact) -> bool:
        return canonical(f) in self.facts

    def add(self, f: Fact) -> bool:
        c = canonical(f)
        if c in self.facts:
            return False
        self.facts.add(c)
        seen = set()
        for v in variants(c):
            if v in seen:
                continue
            seen.add(v)
            self._by_pred[c.pred].append(v)
            for i, x in enumerate(v):
                self._index[(c.pred, i, x)].append(v)
        return True

    def candidates(self, pred: str, bound: Mapping[int, object]) -> Iterable[tuple]:
        if pred == "on":
            for p in _ON:
                yield from self.candidates(p, bound)
            return
        if not bound:
            yield from self._by_pred.get(pred, ())
            return
        best = None
        for i, x in bound.items():
            lst = self._index.get((pred, i, x), ())
            if best is None or len(lst) < len(best):
                best = lst
            if not best:
                return
        for v in best:
            if all(v[i] == x for i, x in bound.items()):
                yield v

    def sorted_facts(self) -> list[Fact]:
        return sorted(self.facts, key=lambda f: (f.pred, tuple(sort_key(x) for x in f.args)))


class Overlay:
    """A read-only base store plus a small private extension."""

    def __init__(self, base: FactStore):
        self.base = base
        self.extra = FactStore()

    def __contains__(self, f):
        return f in self.base or f in self.extra

    def add(self, f: Fact) -> bool:
        if f in self.base:
            return False
        return self.extra.add(f)

    def candidates(self, pred, bound):
        yield from self.base.candidates(pred, bound)
        yield from self.extra.candidates(pred, bound)


# -- matching ---------------------------------------------------------------

class KnownObjects:
    """Constructed objects grouped by kind, in canonical order."""

    def __init__(self, objs: Iterable[Ref] = ()):
        self.members: set[Ref] = set()
        self.by_kind: dict[str, list[Ref]] = defaultdict(list)
        for o in objs:
            self.add(o)

    def add(self, o: Ref) -> None:
        if o in self.members:
            return
        self.members.add(o)
        lst = self.by_kind[o.kind]
        lst.append(o)
        lst.sort(key=sort_key)

    def __contains__(self, o) -> bool:
        return o in self.members

    def of_kind(self, kind: str) -> list[Ref]:
        if kind == "curve":
            return self.by_kind["line"] + self.by_kind["circle"] + self.by_kind["locus"]
        return self.by_kind[kind]


_KIND_OF_GUARD = {"point": "point", "line": "line", "circle": "circle", "angle": "angle", "locus": "locus"}


def resolve(term, binding: Mapping[str, object]):
    """Value of a term under a binding; ``None`` if a variable is unbound."""
    if isinstance(term, Var):
        return binding.get(term.name)
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Expr):
        try:
            return term.eval(binding)
        except (KeyError, ZeroDivisionError, TypeError):
            return None
    if isinstance(term, Ctor):
        return build_ctor(term, binding)
    raise TypeError(term)


def _label(x) -> Optional[str]:
    return x.args[0] if isinstance(x, Ref) and x.tag == "pt" else None


def build_ctor(term: Ctor, binding) -> Optional[Ref]:
    vals = [resolve(a, binding) for a in term.args]
    if any(v is None for v in vals):
        return None
    if term.tag == "hom":
        center, k, base = vals
        # homothetic images are taken of named lines only
        if _label(center) is None or not isinstance(k, Fraction) or k == 0 or base.tag != "line":
            return None
        return hom(_label(center), k, base)
    labels = [_label(v) for v in vals]
    if term.tag in ("line", "bis", "diam", "circ") and all(labels) and labels[0] != labels[1]:
        return {"line": line, "bis": bis, "diam": diam, "circ": circ}[term.tag](*labels)
    return None


def _unify(args: tuple, vals: tuple, binding: dict) -> Optional[dict]:
    new = None
    for t, v in zip(args, vals):
        if isinstance(t, Var):
            cur = binding.get(t.name) if new is None else new.get(t.name)
            if cur is None:
                if new is None:
                    new = dict(binding)
                new[t.name] = v
            elif cur != v:
                return None
        else:
            want = resolve(t, binding if new is None else new)
            if want is None or want != v:
                return None
    return binding if new is None else new


def match(premises, store, binding: Optional[dict] = None, known: Optional[KnownObjects] = None) -> Iterator[dict]:
    """All bindings satisfying ``premises`` in order (depth-first)."""
    yield from _match(list(premises), 0, store, dict(binding or {}), known)


def _match(prem, i, store, binding, known):
    if i == len(prem):
        yield binding
        return
    p = prem[i]
    if isinstance(p, Guard):
        yield from _guard(prem, i, p, store, binding, known)
        return
    bound = {}
    for j, t in enumerate(p.args):
        v = resolve(t, binding) if not isinstance(t, Ctor) else None
        if v is not None:
            bound[j] = v
    if p.negated:
        for v in store.candidates(p.pred, bound):
            if _unify(p.args, v, binding) is not None:
                return
        yield from _match(prem, i + 1, store, binding, known)
        return
    for v in store.candidates(p.pred, bound):
        b = _unify(p.args, v, binding)
        if b is not None:
            yield from _match(prem, i + 1, store, b, known)


def _guard(prem, i, g: Guard, store, binding, known: Optional[KnownObjects]):
    k = g.kind
    if k in ("distinct", "less"):
        a, b = (resolve(t, binding) for t in g.args)
        if a is None or b is None:
            raise ValueError(f"guard {k} needs bound arguments")
        ok = a != b if k == "distinct" else sort_key(a) < sort_key(b)
        if ok:
            yield from _match(prem, i + 1, store, binding, known)
        return
    if known is None:
        raise ValueError(f"guard {k!r} needs a set of known objects")
    (t,) = g.args
    v = resolve(t, binding)
    if k == "unknown":
        if v is None:
            raise ValueError("unknown guard needs a bound argument")
        if v not in known:
            yield from _match(prem, i + 1, store, binding, known)
        return
    if v is not None:
        want = k if k != "curve" else None
        if v in known and (want is None and v.kind in ("line", "circle", "locus") or v.kind == want):
            yield from _match(prem, i + 1, store, binding, known)
        return
    for o in list(known.of_kind(k)):
        b = dict(binding)
        b[t.name] = o
        yield from _match(prem, i + 1, store, b, known)


def instantiate(pattern: Pattern, binding) -> Optional[Fact]:
    vals = []
    for t in pattern.args:
        v = resolve(t, binding)
        if v is None:
            return None
        vals.append(v)
    return Fact(pattern.pred, tuple(vals))
