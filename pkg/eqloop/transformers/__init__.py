"""
Transformers module for report shaping.

Contains the transformer turning engine results into ordered, JSON-ready report dictionaries.
"""

from .report_transformer import REPORT_VERSION, ReportTransformer, chain_terms, element_terms

__all__ = ["REPORT_VERSION", "ReportTransformer", "chain_terms", "element_terms"]
