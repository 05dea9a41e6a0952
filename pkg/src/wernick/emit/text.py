"""Natural-language rendering of construction plans."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..kb.build import KnowledgeBase, default_kb
from ..kb.dsl import TEMPLATE_SLOT
from ..kb.refs import AngleExpr, Ref, describe, display
from ..solver import ConstructionPlan, ConstructionStep



@dataclass
class SentencePlan:
    sentences: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.sentences)

    def text(self) -> str:
        return "".join(f"{i}. {s}\n" for i, s in enumerate(self.sentences, 1))


def _word(x) -> str:
    if isinstance(x, Ref):
        return describe(x)
    if isinstance(x, (Fraction, AngleExpr)):
        return display(x)
    return str(x)


def sentence(step: ConstructionStep, template: str) -> str:
    b = step.bound()

    def fill(m):
        if m[1] == "vec":
            return f"vec({display(b[m[2]])}{display(b[m[3]])})"
        if m[1] == "name":
            return display(b[m[2]])
        return _word(b[m[2]])

    return TEMPLATE_SLOT.sub(fill, template)


def to_text(plan: ConstructionPlan, kb: Optional[KnowledgeBase] = None) -> SentencePlan:
    """One sentence per step; all but the last end with ';', the last with '.'.

    Templates come from the rules of ``kb`` (the shipped base by default).
    """
    kb = kb or default_kb()
    out = [sentence(s, kb.rule(s.rule).template) for s in plan.steps]
    out = [s + ";" for s in out[:-1]] + [s + "." for s in out[-1:]]
    return SentencePlan(out)
