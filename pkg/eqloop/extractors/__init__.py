"""
Extractors module for the engine.

Reads algebra presentation documents.
"""

from .presentation_extractor import PresentationDocument, PresentationExtractor, parse_presentation, render_presentation

__all__ = ["PresentationDocument", "PresentationExtractor", "parse_presentation", "render_presentation"]
