"""Rendering construction plans as sentences, GCLC-style scripts and SVG."""
from .gclc import GclcError, GclcScript, UnsupportedStep, round_trip_error, run_gclc, to_gclc
from .svg import SvgOptions, to_svg
from .text import SentencePlan, to_text
from .trace import NoCompleteTrace, solution_trace

__all__ = [
    "GclcError", "GclcScript", "NoCompleteTrace", "SentencePlan", "SvgOptions", "UnsupportedStep",
    "round_trip_error", "run_gclc", "solution_trace", "to_gclc", "to_svg", "to_text",
]
