"""Wernick's list of triangle construction problems with their statuses."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .geom import LABELS
from .solver import ProblemSpec

STATUSES = ("S", "U", "R", "L", "Unknown")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    index: int
    points: tuple[str, str, str]
    status: str
    note: str = ""

    def line(self) -> str:
        return f"{self.index}|{','.join(self.points)}|{self.status}|{self.note}"

    def problem(self) -> ProblemSpec:
        return ProblemSpec(self.index, self.points, status=self.status)

    def pretty(self) -> str:
        return f"{self.index}. {', '.join(self.points)} — {self.status}"


def parse_catalog(text: str) -> list[CatalogEntry]:
    out = []
    # notes are free text, so split on newlines only
    for n, raw in enumerate(text.split("\n"), 1):
        raw = raw.rstrip("\r")
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.split("|")
        if len(parts) != 4:
            raise CatalogError(f"line {n}: expected idx|P1,P2,P3|status|note")
        idx, pts, status, note = parts
        if not idx.strip().isdigit():
            raise CatalogError(f"line {n}: bad index {idx!r}")
        names = tuple(p.strip() for p in pts.split(","))
        if len(names) != 3 or any(p not in LABELS for p in names):
            raise CatalogError(f"line {n}: bad triple {pts!r}")
        if status not in STATUSES:
            raise CatalogError(f"line {n}: bad status {status!r}")
        out.append(CatalogEntry(int(idx), names, status, note))
    return out


def format_catalog(entries: list[CatalogEntry]) -> str:
    return "".join(e.line() + "\n" for e in entries)


def catalog_text() -> str:
    return resources.files("wernick.data").joinpath("catalog.txt").read_text(encoding="utf-8")


_CATALOG: Optional[list[CatalogEntry]] = None


def load_catalog() -> list[CatalogEntry]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = parse_catalog(catalog_text())
    return list(_CATALOG)


def entry(index: int) -> CatalogEntry:
    for e in load_catalog():
        if e.index == index:
            return e
    raise CatalogError(f"no problem {index}")


def resolve_problem(ref: str) -> ProblemSpec:
    """A catalog index such as ``7`` or a triple such as ``A,B,H``."""
    ref = ref.strip()
    if ref.isdigit():
        return entry(int(ref)).problem()
    names = tuple(p.strip() for p in ref.split(","))
    if not names or any(n not in LABELS for n in names) or len(set(names)) != len(names):
        raise CatalogError(f"not a problem index or point triple: {ref!r}")
    for e in load_catalog():
        if set(e.points) == set(names):
            return e.problem()
    return ProblemSpec(ref, names)
