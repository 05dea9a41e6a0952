"""Loading, canonicalizing and closing the knowledge base."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional

from .dsl import ConstructionRule, GenericLemma, KBSource, ValidationError, parse_kb
from .refs import STRUCTURAL, Fact, Ref, angle, arc, line, pt, sort_key
from .store import FactStore, canonical, instantiate, match


class ClosureBudgetExceeded(RuntimeError):
    pass


DEFAULT_FACT_CAP = 100_000


def structural_facts(facts: Iterable[Fact]) -> set[Fact]:
    """Facts implied by how the objects mentioned in ``facts`` are written."""
    out: set[Fact] = set()
    seen: set[Ref] = set()

    def visit(r: Ref):
        if r in seen:
            return
        seen.add(r)
        a = r.args
        if r.tag == "line":
            out.add(Fact("online", (pt(a[0]), r)))
            out.add(Fact("online", (pt(a[1]), r)))
        elif r.tag == "circ":
            out.add(Fact("oncircle", (pt(a[1]), r)))
            out.add(Fact("center", (r, pt(a[0]))))
        elif r.tag == "diam":
            out.add(Fact("oncircle", (pt(a[0]), r)))
            out.add(Fact("oncircle", (pt(a[1]), r)))
            out.add(Fact("diameter", (r, pt(a[0]), pt(a[1]))))
        elif r.tag == "hom":
            visit(a[2])
            out.add(Fact("homof", (r, pt(a[0]), a[2], a[1])))
        elif r.tag == "angle":
            out.add(Fact("angledef", (r, pt(a[0]), pt(a[1]), pt(a[2]))))
        elif r.tag == "arc":
            base = a[2].base_angle()
            if base is not None:
                visit(base)
                out.add(Fact("arcbase", (r, base)))

    for f in facts:
        for x in f.args:
            if isinstance(x, Ref):
                visit(x)
        if f.pred == "bisects":
            _, x, v, y, _ = f.args
            ang = angle(x.args[0], v.args[0], y.args[0])
            visit(ang)
            visit(line(v.args[0], x.args[0]))
            visit(line(v.args[0], y.args[0]))
        elif f.pred == "seesangle":
            s, x, y, e = f.args
            locus = arc(x.args[0], y.args[0], e)
            visit(locus)
            out.add(Fact("onlocus", (s, locus)))
            out.add(Fact("arcdef", (locus, x, y, e)))
    return out


# -- canonical merging of lines and circles ---------------------------------

class _UF:
    def __init__(self, nodes):
        self.parent = {n: n for n in nodes}

    def find(self, n):
        p = self.parent
        while p[n] != n:
            p[n] = p[p[n]]
            n = p[n]
        return n

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if sort_key(rb) < sort_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _merge_classes(nodes: list[Ref], members: dict[Ref, set[str]], need: int, same_group, parallel=None) -> dict[Ref, Ref]:
    """Union objects sharing ``need`` points (one point for parallel lines)."""
    same = _UF(nodes)
    direction = _UF(nodes)
    for a, b in parallel or ():
        direction.union(a, b)
    changed = True
    while changed:
        changed = False
        roots = sorted({same.find(n) for n in nodes}, key=sort_key)
        pts = {r: set() for r in roots}
        for n in nodes:
            pts[same.find(n)] |= members.get(n, set())
        for i, r1 in enumerate(roots):
            for r2 in roots[i + 1:]:
                a, b = same.find(r1), same.find(r2)
                if a == b or not same_group(r1, r2):
                    continue
                shared = len(pts[a] & pts[b])
                want = 1 if direction.find(a) == direction.find(b) else need
                if shared >= want:
                    same.union(a, b)
                    direction.union(a, b)
                    root = same.find(a)
                    pts[root] = pts[a] | pts[b]
                    changed = True
    classes: dict[Ref, list[Ref]] = {}
    for n in nodes:
        classes.setdefault(same.find(n), []).append(n)
    rename = {}
    for group in classes.values():
        rep = min(group, key=_rep_key)
        for n in group:
            rename[n] = rep
    return rename


def _rep_key(r: Ref):
    # named objects first, then shallow homothety chains, then canonical order;
    # a class never gets a representative built on a member of itself
    return (0 if r.tag in ("line", "circ", "diam") else 1, _depth(r), sort_key(r))


def _depth(r: Ref) -> int:
    return 1 + _depth(r.args[2]) if r.tag == "hom" else 0


def _substitute(x, rename):
    if isinstance(x, Ref):
        if x in rename:
            return rename[x]
        if x.tag == "hom":
            base = _substitute(x.args[2], rename)
            if base in rename:
                base = rename[base]
            if base != x.args[2]:
                return Ref(x.kind, x.tag, (x.args[0], x.args[1], base))
    return x


def canonicalize(facts: Iterable[Fact]) -> tuple[set[Fact], dict[Ref, Ref]]:
    """Identify lines sharing two points and circles sharing center and a point."""
    facts = set(facts)
    members: dict[Ref, set[str]] = {}
    lines, circles = set(), set()
    for f in facts:
        for x in f.args:
            if isinstance(x, Ref):
                if x.kind == "line":
                    lines.add(x)
                    while x.tag == "hom":
                        x = x.args[2]
                        lines.add(x)
                elif x.kind == "circle":
                    circles.add(x)
        if f.pred in ("online", "oncircle"):
            members.setdefault(f.args[1], set()).add(f.args[0].args[0])
    parallel = [(l, l.args[2]) for l in lines if l.tag == "hom"]
    rename = _merge_classes(sorted(lines, key=sort_key), members, 2, lambda a, b: True, parallel)
    centers = {c: c.args[0] for c in circles if c.tag == "circ"}
    rename.update(
        _merge_classes(
            sorted(circles, key=sort_key), members, 1,
            lambda a, b: a.tag == b.tag == "circ" and centers[a] == centers[b],
        )
    )
    rename = {k: v for k, v in rename.items() if k != v}
    if not rename:
        return {canonical(f) for f in facts}, {}
    # hom refs mention base lines; substitute until stable
    while True:
        nxt = {k: _substitute(v, rename) for k, v in rename.items()}
        if nxt == rename:
            break
        rename = nxt
    out = set()
    for f in facts:
        out.add(canonical(Fact(f.pred, tuple(_substitute(x, rename) for x in f.args))))
    return out, rename


# -- generic closure ---------------------------------------------------------

def close_generic(facts: Iterable[Fact], lemmas: list[GenericLemma], cap: int = DEFAULT_FACT_CAP) -> set[Fact]:
    """Least fixpoint of ``facts`` under the implication-form lemmas."""
    store = FactStore(facts)
    while True:
        new = []
        for lemma in lemmas:
            for b in match(lemma.premises, store):
                for concl in lemma.conclusions:
                    f = instantiate(concl, b)
                    if f is not None and f not in store:
                        new.append(f)
        added = 0
        for f in new:
            if f.pred == "vecratio" and f.args[4] == 0:
                continue
            for g in [f, *structural_facts([f])]:
                added += store.add(g)
        if len(store) > cap:
            raise ClosureBudgetExceeded(f"closure exceeded {cap} facts")
        if not added:
            return set(store.facts)


# -- knowledge base ------------------------------------------------------------

@dataclass
class KnowledgeBase:
    vocabulary: list[str]
    definitions: list[tuple[str, Fact]]
    lemmas: list[tuple[str, Fact]]
    generics: list[GenericLemma]
    rules: list[ConstructionRule]
    facts: FactStore
    base_facts: set[Fact]
    rename: dict[Ref, Ref] = field(default_factory=dict)
    objects: set[Ref] = field(default_factory=set)
    line_points: dict[Ref, frozenset] = field(default_factory=dict)
    text: str = ""

    def canon(self, obj):
        """Canonical form of an object reference (or fact)."""
        if isinstance(obj, Fact):
            return canonical(Fact(obj.pred, tuple(self.canon(x) for x in obj.args)))
        if not isinstance(obj, Ref):
            return obj
        obj = self.rename.get(obj, obj)
        if obj.tag == "hom":
            base = self.canon(obj.args[2])
            obj = self.rename.get(Ref("line", "hom", (obj.args[0], obj.args[1], base)), obj)
        if obj.tag == "line" and obj not in self.objects:
            x, y = obj.args
            for l, pts in self.line_points.items():
                if x in pts and y in pts:
                    return l
        return obj

    def holds(self, f: Fact) -> bool:
        return self.canon(f) in self.facts

    def geometric_facts(self) -> list[Fact]:
        return [f for f in self.facts.sorted_facts() if f.pred not in STRUCTURAL]

    def rule(self, rid: str) -> ConstructionRule:
        for r in self.rules:
            if r.id == rid:
                return r
        raise KeyError(rid)

    def serialize(self) -> str:
        return "\n".join(f.text() for f in self.facts.sorted_facts()) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:16]

    def with_rules(self, order: list[str]) -> "KnowledgeBase":
        """Same facts, rules reordered (unlisted rules keep their relative order after)."""
        by_id = {r.id: r for r in self.rules}
        unknown = [o for o in order if o not in by_id]
        if unknown:
            raise KeyError(f"unknown rule ids {unknown}")
        rules = [by_id[o] for o in order] + [r for r in self.rules if r.id not in order]
        return KnowledgeBase(
            self.vocabulary, self.definitions, self.lemmas, self.generics, rules,
            self.facts, self.base_facts, self.rename, self.objects, self.line_points, self.text,
        )


def instantiate_definitions(src: KBSource) -> set[Fact]:
    return {f for _, f in src.definitions}


def instantiate_lemmas(src: KBSource) -> set[Fact]:
    return {f for _, f in src.lemmas}


def _check_duplicates(src: KBSource) -> None:
    seen = set()
    for tag, f in src.definitions + src.lemmas:
        if f.pred in ("online", "perp"):
            # perpendicular-at statements expand into these and may overlap
            continue
        c = canonical(f)
        if c in seen:
            raise ValidationError(f"duplicate fact {f.text()} ({tag or 'untagged'})")
        seen.add(c)


def load_kb(text: str, *, fact_cap: int = DEFAULT_FACT_CAP) -> KnowledgeBase:
    src = parse_kb(text)
    _check_duplicates(src)
    base = instantiate_definitions(src) | instantiate_lemmas(src)
    facts = base | structural_facts(base)
    rename_total: dict[Ref, Ref] = {}
    prev = None
    # derived lines may coincide with named ones, so closure re-derives
    # facts about them; stop once closing adds nothing modulo renaming
    while True:
        facts, rename = canonicalize(facts)
        for k, v in list(rename_total.items()):
            rename_total[k] = rename.get(v, v)
        for k, v in rename.items():
            rename_total.setdefault(k, v)
        if facts == prev:
            break
        prev = facts
        facts = close_generic(facts, src.generics, fact_cap)
    store = FactStore(facts)
    objects = set()
    line_points: dict[Ref, set] = {}
    for f in store:
        for x in f.args:
            if isinstance(x, Ref):
                objects.add(x)
        if f.pred == "online":
            line_points.setdefault(f.args[1], set()).add(f.args[0].args[0])
    return KnowledgeBase(
        vocabulary=list(src.points),
        definitions=src.definitions,
        lemmas=src.lemmas,
        generics=src.generics,
        rules=src.rules,
        facts=store,
        base_facts={canonical(f) for f in base},
        rename=rename_total,
        objects=objects,
        line_points={k: frozenset(v) for k, v in line_points.items()},
        text=text,
    )


def default_kb_text() -> str:
    return resources.files("wernick.data").joinpath("wernick.kb").read_text(encoding="utf-8")


_DEFAULT: Optional[KnowledgeBase] = None


def default_kb() -> KnowledgeBase:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_kb(default_kb_text())
    return _DEFAULT
