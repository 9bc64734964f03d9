#!/usr/bin/env python3
"""
eqloop command line runner

Examples:
    python run_eqloop.py tor --max-degree 12 --ring --mode both data/presentations/s2-circle.alg
    python run_eqloop.py cohomology --max-degree 6 data/presentations/lambda-uxy.alg
    python run_eqloop.py massey --triple x u x data/presentations/lambda-uxy.alg
    python run_eqloop.py check data/presentations/s2-circle.alg
"""

import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from eqloop.cli import run_command

if __name__ == "__main__":
    sys.exit(run_command())
