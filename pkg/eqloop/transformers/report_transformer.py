"""
Shapes engine results into report dictionaries.

Reports are plain dicts with keys in a fixed order so that ``json.dumps`` of the same request is
byte-identical across runs. Rationals are written as ``"p/q"`` strings, never floats.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from eqloop.algebra.graded_ring import GradedRing
from eqloop.algebra.monomials import monomial_to_string
from eqloop.algebra.presentation import GradedElement
from eqloop.bar.bar_complex import BarComplex
from eqloop.bar.bar_config import BarChain
from eqloop.cdga.cdga_engine import CohomologyTable
from eqloop.cdga.indecomposables import HomotopyTable
from eqloop.cdga.massey import MasseyResult
from eqloop.exceptions import EngineError, InvariantError, ParseError, PresentationError, TruncationError
from eqloop.linalg.rational_matrix import fraction_str
from eqloop.pipeline.invariant_suite import SuiteReport
from eqloop.pipeline.tor_pipeline import CrosscheckReport, TorResult, chain_string

logger = logging.getLogger(__name__)

REPORT_VERSION = "1"


def _fractions(values: Sequence[Fraction]) -> List[str]:
    return [fraction_str(v) for v in values]


def _class_key(key: Tuple[int, int]) -> Dict[str, int]:
    return {"degree": key[0], "index": key[1]}


def _degree_list(values: Dict[int, int], top: int) -> List[int]:
    return [values.get(n, 0) for n in range(top + 1)]


def element_terms(ring: GradedRing, element: GradedElement) -> List[Dict[str, str]]:
    """Monomial term list of an element, in basis order"""
    basis = ring.degree_basis(element.degree) if not element.is_zero() else []
    order = {m: i for i, m in enumerate(basis)}
    terms = sorted(element.terms.items(), key=lambda item: order.get(item[0], len(order)))
    return [{"monomial": monomial_to_string(m, ring.names), "coefficient": fraction_str(c)} for m, c in terms]


def chain_terms(bar: BarComplex, chain: BarChain) -> List[Dict[str, str]]:
    """Word term list of a bar chain, in basis order"""
    return [{"word": bar.word_string(word), "coefficient": fraction_str(c)} for word, c in chain.sorted_terms()]


class ReportTransformer:
    """
    Builds run reports for every command.

    Args:
        include_timing: Add the ``timing`` block; off by default so output is reproducible
    """

    def __init__(self, include_timing: bool = False):
        self.include_timing = include_timing

    def envelope(self, command: str, algebra: str, digest: str, max_degree: int,
                 result: Dict[str, Any], timing: Optional[Dict[str, float]] = None,
                 status: str = "ok") -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "status": status,
            "command": command,
            "version": REPORT_VERSION,
            "algebra": algebra,
            "input_digest": digest,
            "max_degree": max_degree,
            "result": result,
        }
        if self.include_timing and timing is not None:
            report["timing"] = {name: round(seconds, 6) for name, seconds in sorted(timing.items())}
        return report

    # ------------------------------------------------------------------ tor

    def transform_tor(self, result: TorResult, bar: BarComplex) -> Dict[str, Any]:
        top = result.max_degree
        generators = []
        for n in range(top + 1):
            chains = result.representatives.get(n, [])
            for i, chain in enumerate(chains):
                generators.append({
                    "degree": n,
                    "index": i,
                    "representative": chain_string(bar, chain),
                    "display": chain_string(bar, chain, display=True),
                    "terms": chain_terms(bar, chain),
                })
        shaped: Dict[str, Any] = {
            "mode": result.mode,
            "betti": _degree_list(result.betti, top),
            "poincare_polynomial": result.poincare_polynomial(),
            "bigraded_betti": [
                {"degree": n, "bar_degree": bar_degree, "tensor_degree": tensor_degree, "dimension": dim}
                for n in sorted(result.bigraded_betti)
                for (bar_degree, tensor_degree), dim in sorted(result.bigraded_betti[n].items())
            ],
            "generators": generators,
        }
        if result.over_k_betti:
            shaped["over_k_betti"] = _degree_list(result.over_k_betti, max(result.over_k_betti))
        if result.crosscheck_degree is not None:
            shaped["crosscheck_degree"] = result.crosscheck_degree
        if result.ring_constants or result.outside_truncation:
            shaped["ring_constants"] = [
                {"left": _class_key(a), "right": _class_key(b), "product": _fractions(coords)}
                for (a, b), coords in sorted(result.ring_constants.items())
            ]
            shaped["outside_truncation"] = [
                {"left": _class_key(a), "right": _class_key(b)} for a, b in result.outside_truncation
            ]
            shaped["r_module_structure"] = [
                {"r": r_name, "class": _class_key(key), "product": _fractions(coords)}
                for (r_name, key), coords in sorted(result.r_module_structure.items())
            ]
            shaped["ring_rank_table"] = [
                {"p": p, "q": q, "rank": rank} for (p, q), rank in sorted(result.ring_rank_table.items())
            ]
        if result.crosscheck is not None:
            shaped["crosscheck"] = self.transform_crosscheck(result.crosscheck)
        return shaped

    def transform_crosscheck(self, report: CrosscheckReport) -> Dict[str, Any]:
        details = {}
        for name, value in sorted(report.details.items()):
            if isinstance(value, dict) and all(isinstance(k, int) for k in value):
                details[name] = [value[n] for n in sorted(value)]
            elif isinstance(value, dict):
                details[name] = [{"p": p, "q": q, "rank": r} for (p, q), r in sorted(value.items())]
            else:
                details[name] = value
        return {
            "passed": report.passed,
            "checks": dict(report.checks),
            "first_divergent_degree": report.first_divergent_degree,
            "failures": list(report.failures),
            "details": details,
        }

    # ------------------------------------------------------------------ cdga

    def transform_cohomology(self, table: CohomologyTable, ring: GradedRing, minimal: bool) -> Dict[str, Any]:
        generators = [
            {"degree": n, "index": i, "representative": ring.to_string(rep), "terms": element_terms(ring, rep)}
            for n in range(table.max_degree + 1)
            for i, rep in enumerate(table.representatives.get(n, []))
        ]
        return {
            "betti": table.poincare_coefficients(),
            "chain_dimensions": _degree_list(table.chain_dimensions, table.max_degree),
            "euler_characteristic": table.euler_characteristic(),
            "chain_euler_characteristic": table.chain_euler_characteristic(),
            "is_minimal": minimal,
            "generators": generators,
            "ring_constants": [
                {"left": _class_key(a), "right": _class_key(b), "product": _fractions(coords)}
                for (a, b), coords in sorted(table.ring_constants.items())
            ],
        }

    def transform_massey(self, massey: MasseyResult, ring: GradedRing, triple: Sequence[str]) -> Dict[str, Any]:
        shaped: Dict[str, Any] = {
            "triple": list(triple),
            "defined": massey.defined,
            "degree": massey.degree,
        }
        if not massey.defined:
            shaped["reason"] = massey.reason
            return shaped
        shaped["representative"] = ring.to_string(massey.representative)
        shaped["class_coordinates"] = _fractions(massey.class_coordinates)
        shaped["indeterminacy_dim"] = massey.indeterminacy_dim
        shaped["indeterminacy_basis"] = [_fractions(v) for v in massey.indeterminacy.dense_basis()] \
            if massey.indeterminacy is not None else []
        shaped["contains_zero"] = massey.contains_zero
        shaped["lifts"] = [ring.to_string(y) if y is not None else None for y in massey.lifts]
        return shaped

    def transform_homotopy(self, tables: Sequence[HomotopyTable], minimal: bool) -> Dict[str, Any]:
        return {
            "is_minimal": minimal,
            "targets": [
                {
                    "target": table.target,
                    "dimensions": table.as_list(),
                    "indecomposable_dimensions": [table.quotient_dimensions.get(n, 0)
                                                  for n in range(1, table.max_degree + 1)],
                    "induced_differential_zero": table.induced_differential_zero,
                }
                for table in tables
            ],
        }

    def transform_check(self, report: SuiteReport) -> Dict[str, Any]:
        return {"passed": True, "counts": dict(sorted(report.counts.items()))}

    # ------------------------------------------------------------------ errors

    def error_report(self, command: str, error: Exception) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "status": "error",
            "command": command,
            "version": REPORT_VERSION,
            "error_type": type(error).__name__,
            "reason": str(error),
        }
        if isinstance(error, PresentationError) and error.invariant:
            report["invariant"] = error.invariant
        if isinstance(error, ParseError):
            report["line"] = error.line
            report["column"] = error.column
        if isinstance(error, (InvariantError, TruncationError)) and error.degree is not None:
            report["degree"] = error.degree
        if not isinstance(error, (EngineError, FileNotFoundError)):
            logger.error(f"Unexpected {type(error).__name__} reported as error: {error}")
        return report

    # ------------------------------------------------------------------ human output

    def render_human(self, report: Dict[str, Any]) -> str:
        """Plain-text rendering of a report for the terminal"""
        if report["status"] == "error":
            lines = [f"error ({report['error_type']}): {report['reason']}"]
            if "invariant" in report:
                lines.append(f"  invariant: {report['invariant']}")
            return "\n".join(lines) + "\n"

        result = report["result"]
        lines = [f"{report['command']} {report['algebra']}  (max degree {report['max_degree']})", ""]
        if "betti" in result:
            lines.append("degree  " + " ".join(f"{n:>3}" for n in range(len(result["betti"]))))
            lines.append("betti   " + " ".join(f"{b:>3}" for b in result["betti"]))
        if "poincare_polynomial" in result:
            lines.append(f"Poincaré polynomial: {result['poincare_polynomial']}")
        if "generators" in result and result["generators"]:
            lines += ["", "generators:"]
            for g in result["generators"]:
                shown = g.get("display", g["representative"])
                lines.append(f"  [{g['degree']}.{g['index']}]  {shown}")
        for entry in result.get("ring_constants", []):
            if any(c != "0" for c in entry["product"]):
                if "ring:" not in lines:
                    lines += ["", "ring:"]
                left, right = entry["left"], entry["right"]
                lines.append(f"  [{left['degree']}.{left['index']}] * [{right['degree']}.{right['index']}]"
                             f" = ({', '.join(entry['product'])})")
        if result.get("outside_truncation"):
            lines.append(f"  {len(result['outside_truncation'])} products outside the truncation")
        if "crosscheck" in result:
            check = result["crosscheck"]
            verdict = "passed" if check["passed"] else "FAILED"
            lines += ["", f"cross-check {verdict}: " + ", ".join(
                f"{name}={'ok' if ok else 'fail'}" for name, ok in check["checks"].items())]
            lines += [f"  {failure}" for failure in check["failures"]]
            if result.get("crosscheck_degree", report["max_degree"]) < report["max_degree"]:
                lines.append(f"  over-k comparisons through degree {result['crosscheck_degree']}")
        if "defined" in result:
            lines.append(f"<{', '.join(result['triple'])}> in degree {result['degree']}")
            if result["defined"]:
                lines.append(f"  representative: {result['representative']}")
                lines.append(f"  class: ({', '.join(result['class_coordinates'])})")
                lines.append(f"  indeterminacy dimension: {result['indeterminacy_dim']}")
                lines.append(f"  contains zero: {result['contains_zero']}")
            else:
                lines.append(f"  undefined: {result['reason']}")
        for target in result.get("targets", []):
            lines.append(f"{target['target']:>8}: " + " ".join(str(d) for d in target["dimensions"]))
        if "counts" in result:
            lines += [f"  {name}: {count}" for name, count in result["counts"].items()]
            lines.append("all invariants hold")
        if "timing" in report:
            lines += ["", "timing: " + ", ".join(f"{k}={v:.3f}s" for k, v in report["timing"].items())]
        return "\n".join(lines) + "\n"
