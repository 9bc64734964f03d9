"""
Validates reports against the report schema and writes them as JSON or text.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

from jsonschema import ValidationError, validate

from eqloop.config.settings import PROJECT_ROOT
from eqloop.exceptions import InvariantError
from eqloop.transformers.report_transformer import ReportTransformer

logger = logging.getLogger(__name__)

SCHEMA_PATH = PROJECT_ROOT / "schemas" / "report.schema.json"
OUTPUT_FORMATS = ("human", "json")


def load_schema(path: Optional[Path] = None) -> Dict[str, Any]:
    with open(path or SCHEMA_PATH, "r", encoding="utf-8") as f:
        return json.load(f)


class ReportWriter:
    """
    Args:
        output_format: ``human`` or ``json``
        stream: Destination, stdout by default
        schema_path: Report schema; the bundled one by default
    """

    def __init__(self, output_format: str = "human", stream: Optional[TextIO] = None,
                 schema_path: Optional[Path] = None):
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format {output_format!r}; expected one of {OUTPUT_FORMATS}")
        self.output_format = output_format
        self.stream = stream or sys.stdout
        self.schema = load_schema(schema_path)
        self.renderer = ReportTransformer()

    def validate(self, report: Dict[str, Any]) -> None:
        """
        Raises:
            InvariantError: the report does not match the schema
        """
        try:
            validate(instance=report, schema=self.schema)
        except ValidationError as e:
            logger.error(f"❌ Report failed schema validation: {e.message}")
            raise InvariantError(f"Report does not match schema: {e.message}") from e

    def to_json(self, report: Dict[str, Any]) -> str:
        self.validate(report)
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"

    def write(self, report: Dict[str, Any]) -> None:
        if self.output_format == "json":
            text = self.to_json(report)
        else:
            self.validate(report)
            text = self.renderer.render_human(report)
        self.stream.write(text)
        self.stream.flush()
