"""
Checks saved eqloop reports against schemas/report.schema.json.

    python scripts/validate_json.py --file tor.json cohomology.json

Exit codes: 0 all valid, 1 a file could not be read, 2 a report violates the schema.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from jsonschema import Draft7Validator

# Add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from eqloop.loaders.report_writer import SCHEMA_PATH, load_schema  # noqa: E402


def report_errors(validator: Draft7Validator, report) -> List[str]:
    """Every schema violation in a report, as 'path: message' lines sorted by path"""
    lines = []
    for error in sorted(validator.iter_errors(report), key=lambda e: list(map(str, e.absolute_path))):
        location = "/".join(str(part) for part in error.absolute_path) or "<root>"
        lines.append(f"{location}: {error.message}")
    return lines


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        description="Validate saved eqloop JSON reports against the report schema."
    )
    parser.add_argument('--file', required=True, nargs='+', help='JSON reports to validate')
    parser.add_argument('--schema', default=str(SCHEMA_PATH), help='Path to the schema file')
    args = parser.parse_args(argv)

    try:
        validator = Draft7Validator(load_schema(Path(args.schema)))
    except Exception as e:
        print(f"Error loading schema file: {e}")
        return 1

    code = 0
    for path in args.file:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                report = json.load(f)
        except Exception as e:
            print(f"❌ Error loading JSON file '{path}': {e}")
            code = max(code, 1)
            continue

        errors = report_errors(validator, report)
        if errors:
            print(f"❌ Validation failed for '{path}' ({len(errors)} errors):")
            for line in errors:
                print(f"   {line}")
            code = 2
        else:
            print(f"✅ The report '{path}' is valid ({report.get('command')}, status {report.get('status')}).")
    return code


if __name__ == "__main__":
    sys.exit(main())
