from .build import ClosureBudgetExceeded, KnowledgeBase, close_generic, default_kb, default_kb_text, load_kb
from .dsl import ParseError, ValidationError, parse_kb
from .refs import Fact, Ref

__all__ = [
    "ClosureBudgetExceeded", "Fact", "KnowledgeBase", "ParseError", "Ref", "ValidationError",
    "close_generic", "default_kb", "default_kb_text", "load_kb", "parse_kb",
]
