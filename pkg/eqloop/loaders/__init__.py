"""
Loaders module for engine output.

Contains the schema-validating report writer and the on-disk basis cache.
"""

from .basis_cache import BasisCache
from .report_writer import OUTPUT_FORMATS, SCHEMA_PATH, ReportWriter, load_schema

__all__ = ["BasisCache", "OUTPUT_FORMATS", "SCHEMA_PATH", "ReportWriter", "load_schema"]
