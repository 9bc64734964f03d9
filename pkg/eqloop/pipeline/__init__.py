"""
Pipeline module for engine orchestration.

Contains the Tor pipeline with its cross-checks and the structural invariant suite.
"""

from .invariant_suite import InvariantSuite, SuiteReport
from .tor_pipeline import MODE_BOTH, CrosscheckReport, TorPipeline, TorRequest, TorResult, chain_string

__all__ = [
    "MODE_BOTH",
    "CrosscheckReport",
    "InvariantSuite",
    "SuiteReport",
    "TorPipeline",
    "TorRequest",
    "TorResult",
    "chain_string",
]
