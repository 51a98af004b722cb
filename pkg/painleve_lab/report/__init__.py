"""
Report schema and renderings. Stage orchestration lives in report.pipeline.
"""

from .models import SCHEMA_VERSION, AnalysisReport, Discrepancy
from .render import FORMATS, parse_structured, render_report, render_structured, render_text

__all__ = [
    "AnalysisReport",
    "Discrepancy",
    "FORMATS",
    "SCHEMA_VERSION",
    "parse_structured",
    "render_report",
    "render_structured",
    "render_text",
]
