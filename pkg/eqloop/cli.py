"""
Command line surface: ``tor``, ``cohomology``, ``massey``, ``homotopy`` and ``check``.

Reports go to stdout, diagnostics to stderr. Exit codes: 0 success, 1 input error,
2 invariant or cross-check failure, 3 truncation insufficient.
"""

import argparse
import logging
import logging.config
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from eqloop.algebra.graded_ring import OVER_K, OVER_R
from eqloop.cdga.cdga_engine import CdgaEngine, CdgaInstance
from eqloop.config.settings import EngineConfig
from eqloop.exceptions import EngineError, InvariantError, PresentationError, TruncationError
from eqloop.extractors.presentation_extractor import PresentationDocument, PresentationExtractor
from eqloop.loaders.basis_cache import BasisCache
from eqloop.loaders.report_writer import OUTPUT_FORMATS, ReportWriter
from eqloop.pipeline.invariant_suite import InvariantSuite
from eqloop.pipeline.tor_pipeline import MODE_BOTH, TorPipeline, TorRequest
from eqloop.transformers.report_transformer import ReportTransformer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2
EXIT_TRUNCATION = 3

COMMANDS = ("tor", "cohomology", "massey", "homotopy", "check")


class UsageError(PresentationError):
    """Malformed command line"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, invariant="usage")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eqloop", description="Exact equivariant loop-space cohomology engine")
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)

    shared = _Parser(add_help=False)
    shared.add_argument("input", help="Algebra presentation file")
    shared.add_argument("--max-degree", type=int, default=None, help="Truncation degree N")
    shared.add_argument("--output", choices=OUTPUT_FORMATS, default=EngineConfig.DEFAULT_OUTPUT,
                        help="Report format")
    shared.add_argument("--mode", choices=EngineConfig.MODES, default=EngineConfig.DEFAULT_MODE,
                        help="Tensor products over R, over k, or both")
    shared.add_argument("--cache-dir", default=EngineConfig.CACHE_DIR, help="Directory for memoized degree bases")
    shared.add_argument("--timing", action="store_true", help="Include wall-clock timings in the report")
    shared.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")

    tor = subparsers.add_parser("tor", parents=[shared], help="Tor over H of (R, R) through the bar complex")
    tor.add_argument("--ring", action="store_true", help="Compute shuffle ring constants and the R-action")
    tor.add_argument("--representatives", action="store_true", help="Report cocycle representatives")
    tor.add_argument("--oracle", help="CDGA presentation to cross-check against")
    tor.add_argument("--crosscheck-degree", type=int, default=None,
                     help="Highest degree compared against the over-k complex (default: EQLOOP_CROSSCHECK_DEGREE)")

    cohomology = subparsers.add_parser("cohomology", parents=[shared], help="Cohomology of a CDGA")
    cohomology.add_argument("--ring", action="store_true", help="Compute ring structure constants")
    cohomology.add_argument("--representatives", action="store_true", help="Report cocycle representatives")

    massey = subparsers.add_parser("massey", parents=[shared], help="Triple Massey product")
    massey.add_argument("--triple", nargs=3, required=True, metavar=("A", "B", "C"),
                        help="Cocycles as expressions in the generators")

    subparsers.add_parser("homotopy", parents=[shared], help="Pseudo-dual homotopy groups (indecomposables)")
    subparsers.add_parser("check", parents=[shared], help="Structural invariant suite of the bar complex")
    return parser


def configure_logging(verbose: bool) -> None:
    logging.config.dictConfig(EngineConfig.get_logging_config("DEBUG" if verbose else None))


class CommandRunner:
    """Executes one parsed command and returns (report result, exit code, timing)"""

    def __init__(self, args: argparse.Namespace, document: PresentationDocument):
        self.args = args
        self.document = document
        self.algebra = document.presentation
        self.cache = BasisCache(args.cache_dir) if args.cache_dir else None
        self.transformer = ReportTransformer(include_timing=args.timing)
        self.timing: Dict[str, float] = {}

    @property
    def max_degree(self) -> int:
        if self.args.max_degree is not None:
            return self.args.max_degree
        if self.args.command == "check":
            return EngineConfig.CHECK_DEGREE
        return EngineConfig.DEFAULT_MAX_DEGREE

    def handler(self) -> Callable[[], Tuple[Dict[str, Any], int]]:
        return {
            "tor": self.run_tor,
            "cohomology": self.run_cohomology,
            "massey": self.run_massey,
            "homotopy": self.run_homotopy,
            "check": self.run_check,
        }[self.args.command]

    def run_tor(self) -> Tuple[Dict[str, Any], int]:
        oracle = None
        if self.args.oracle:
            oracle = PresentationExtractor(self.args.oracle).extract().presentation
        request = TorRequest(
            algebra=self.algebra,
            max_degree=self.max_degree,
            mode=self.args.mode,
            want_ring=self.args.ring,
            want_representatives=self.args.representatives,
            oracle=oracle,
            crosscheck_degree=self.args.crosscheck_degree,
        )
        pipeline = TorPipeline(request, self.cache)
        result = pipeline.run()
        if not self.args.representatives and not self.args.ring:
            result.representatives = {}
        self.timing.update(result.timing)
        code = EXIT_OK
        if result.crosscheck is not None and not result.crosscheck.passed:
            code = EXIT_INVARIANT
        return self.transformer.transform_tor(result, pipeline.complex), code

    def _engine(self) -> CdgaEngine:
        return CdgaEngine(CdgaInstance(self.algebra, self.max_degree), self.cache)

    def run_cohomology(self) -> Tuple[Dict[str, Any], int]:
        engine = self._engine()
        table = engine.cohomology(with_ring=self.args.ring)
        if not self.args.representatives and not self.args.ring:
            table.representatives = {}
        return self.transformer.transform_cohomology(table, engine.ring, engine.is_minimal()), EXIT_OK

    def run_massey(self) -> Tuple[Dict[str, Any], int]:
        engine = self._engine()
        a, b, c = (engine.ring.element(text) for text in self.args.triple)
        result = engine.massey_triple(a, b, c)
        return self.transformer.transform_massey(result, engine.ring, self.args.triple), EXIT_OK

    def run_homotopy(self) -> Tuple[Dict[str, Any], int]:
        engine = self._engine()
        targets = {OVER_K: [OVER_K], OVER_R: [OVER_R], MODE_BOTH: [OVER_K, OVER_R]}[self.args.mode]
        tables = [engine.indecomposables_homotopy(target) for target in targets]
        return self.transformer.transform_homotopy(tables, engine.is_minimal()), EXIT_OK

    def run_check(self) -> Tuple[Dict[str, Any], int]:
        report = InvariantSuite(self.algebra, self.max_degree, basis_cache=self.cache).run()
        return self.transformer.transform_check(report), EXIT_OK

    def run(self) -> Tuple[Dict[str, Any], int]:
        started = time.perf_counter()
        result, code = self.handler()()
        self.timing["total"] = time.perf_counter() - started
        report = self.transformer.envelope(
            self.args.command, self.algebra.name, self.document.digest, self.max_degree, result, self.timing
        )
        return report, code


def exit_code_for(error: Exception) -> int:
    if isinstance(error, (PresentationError, FileNotFoundError)):
        return EXIT_INPUT
    if isinstance(error, TruncationError):
        return EXIT_TRUNCATION
    return EXIT_INVARIANT


def run_command(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
                stderr: Optional[TextIO] = None) -> int:
    """
    Parse ``argv``, run the command and write its report.

    Returns:
        Process exit code
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    output = "json" if "--output=json" in argv or _flag_value(argv, "--output") == "json" else "human"
    command = argv[0] if argv and argv[0] in COMMANDS else "none"
    transformer = ReportTransformer()

    try:
        if not argv or argv[0] in ("-h", "--help"):
            build_parser().print_help(stdout)
            return EXIT_OK if argv else EXIT_INPUT
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        if args.max_degree is not None and args.max_degree < 0:
            raise UsageError("--max-degree must be non-negative", invariant="truncation")
        logger.info(f"🚀 eqloop {args.command} {args.input}")
        document = PresentationExtractor(args.input).extract()
        report, code = CommandRunner(args, document).run()
        ReportWriter(args.output, stdout).write(report)
        if code == EXIT_OK:
            logger.info(f"✅ {args.command} finished")
        else:
            logger.error(f"❌ {args.command} finished with failed cross-checks")
        return code
    except (EngineError, FileNotFoundError) as e:
        logger.error(f"❌ {command} failed: {e}")
        _write_error(transformer.error_report(command, e), output, stdout, stderr)
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"❌ {command} crashed: {e}")
        _write_error(transformer.error_report(command, e), output, stdout, stderr)
        return EXIT_INVARIANT


def _flag_value(argv: List[str], flag: str) -> Optional[str]:
    if flag in argv:
        position = argv.index(flag)
        if position + 1 < len(argv):
            return argv[position + 1]
    return None


def _write_error(report: Dict[str, Any], output: str, stdout: TextIO, stderr: TextIO) -> None:
    if output == "json":
        ReportWriter("json", stdout).write(report)
    else:
        stderr.write(ReportTransformer().render_human(report))


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
