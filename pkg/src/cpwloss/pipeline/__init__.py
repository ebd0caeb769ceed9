"""Configuration, ingestion, analysis orchestration and report emission."""

from .analysis import Report, ResonatorReport, run_analysis
from .config import ConfigError, FitOptions, IoPaths, RunConfig, load_config
from .ingest import IngestError, IngestResult, ingest, read_trace_csv, read_trace_touchstone
from .report import emit, render_summary, report_to_dict

__all__ = [
    "Report",
    "ResonatorReport",
    "run_analysis",
    "ConfigError",
    "FitOptions",
    "IoPaths",
    "RunConfig",
    "load_config",
    "IngestError",
    "IngestResult",
    "ingest",
    "read_trace_csv",
    "read_trace_touchstone",
    "emit",
    "render_summary",
    "report_to_dict",
]
