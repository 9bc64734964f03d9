"""
Reader and writer for the line-oriented presentation format.

    algebra H
    generator x degree 2
    generator u degree 2
    rbase u
    relation x^2 - u^2
    augment x -> -u
    differential y -> u*x

Everything after ``#`` on a line is a comment. Generators must be declared before any line
that mentions them.
"""

import hashlib
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from eqloop.algebra.expressions import parse_expression
from eqloop.algebra.graded_ring import GradedRing
from eqloop.algebra.monomials import FreePolynomial, polynomial_to_string
from eqloop.algebra.presentation import AlgebraPresentation, Generator
from eqloop.config.settings import EngineConfig
from eqloop.exceptions import ParseError, PresentationError

logger = logging.getLogger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_MAPPING = re.compile(r"(?P<name>\S+)\s*->\s*(?P<expr>.*)$")


@dataclass(frozen=True)
class PresentationDocument:
    text: str
    presentation: AlgebraPresentation

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


class _Pending:
    """An expression waiting for the full generator list"""

    def __init__(self, kind: str, target: Optional[str], text: str, line: int, column: int, declared: int):
        self.kind = kind
        self.target = target
        self.text = text
        self.line = line
        self.column = column
        self.declared = declared


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _check_name(name: str, line: int, column: int) -> None:
    if not _NAME.match(name):
        raise ParseError(f"invalid generator name {name!r}", line, column)


def _pad(poly: FreePolynomial, total: int) -> FreePolynomial:
    return {m + (0,) * (total - len(m)): c for m, c in poly.items()}


def parse_presentation(text: str, check_degree: Optional[int] = None) -> AlgebraPresentation:
    """
    Parse and fully validate a presentation document.

    Args:
        text: Document text
        check_degree: Degree through which d² = 0 is verified (defaults to the configured check degree)

    Raises:
        ParseError: syntax errors, with line and column
        PresentationError: semantic violations, naming the invariant
    """
    name = "H"
    generators: List[Generator] = []
    r_generators: List[str] = []
    pending: List[_Pending] = []
    seen_algebra = False

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        keyword, _, rest = line.strip().partition(" ")
        rest_column = indent + len(keyword) + 2 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        declared = [g.name for g in generators]

        if keyword == "algebra":
            if seen_algebra:
                raise ParseError("duplicate 'algebra' line", number, indent + 1)
            if not rest or " " in rest:
                raise ParseError("expected 'algebra NAME'", number, rest_column)
            name, seen_algebra = rest, True
        elif keyword == "generator":
            parts = rest.split()
            if len(parts) != 3 or parts[1] != "degree":
                raise ParseError("expected 'generator NAME degree N'", number, rest_column)
            _check_name(parts[0], number, rest_column)
            if parts[0] in declared:
                raise ParseError(f"generator {parts[0]!r} declared twice", number, rest_column)
            if not parts[2].lstrip("-").isdecimal():
                raise ParseError(f"degree must be an integer, got {parts[2]!r}", number, line.rfind(parts[2]) + 1)
            generators.append(Generator(parts[0], int(parts[2])))
        elif keyword == "rbase":
            if not rest:
                raise ParseError("expected 'rbase NAME ...'", number, rest_column)
            for r_name in rest.split():
                if r_name not in declared:
                    raise ParseError(f"undeclared generator {r_name!r}", number, line.find(r_name, rest_column - 1) + 1)
                if r_name not in r_generators:
                    r_generators.append(r_name)
        elif keyword == "relation":
            pending.append(_Pending("relation", None, rest, number, rest_column - 1, len(generators)))
        elif keyword in ("augment", "differential"):
            match = _MAPPING.match(rest)
            if not match:
                raise ParseError(f"expected '{keyword} NAME -> EXPRESSION'", number, rest_column)
            target = match.group("name")
            if target not in declared:
                raise ParseError(f"undeclared generator {target!r}", number, rest_column)
            pending.append(_Pending(keyword, target, match.group("expr"), number,
                                    rest_column - 1 + match.start("expr"), len(generators)))
        else:
            raise ParseError(f"unknown directive {keyword!r}", number, indent + 1)

    names = [g.name for g in generators]
    degrees = [g.degree for g in generators]
    relations: List[FreePolynomial] = []
    augmentation: Dict[str, FreePolynomial] = {}
    differential: Dict[str, FreePolynomial] = {}
    for item in pending:
        poly = parse_expression(item.text, names[:item.declared], degrees[:item.declared], item.line, item.column)
        poly = _pad(poly, len(names))
        if item.kind == "relation":
            if poly:
                relations.append(poly)
        elif item.kind == "augment":
            if poly:
                augmentation[item.target] = poly
        elif poly:
            differential[item.target] = poly

    presentation = AlgebraPresentation(
        name=name,
        generators=tuple(generators),
        relations=tuple(relations),
        r_generators=tuple(r_generators),
        augmentation=augmentation,
        differential=differential,
    )
    ring = GradedRing(presentation)
    ring.validate_augmentation()
    ring.validate_differential(EngineConfig.CHECK_DEGREE if check_degree is None else check_degree)
    logger.debug(f"Parsed presentation {presentation.describe()}")
    return presentation


def render_presentation(presentation: AlgebraPresentation) -> str:
    """Canonical document text; parsing it gives back an equal presentation"""
    names = presentation.generator_names
    lines = [f"algebra {presentation.name}"]
    lines += [f"generator {g.name} degree {g.degree}" for g in presentation.generators]
    if presentation.r_generators:
        lines.append("rbase " + " ".join(presentation.r_generators))
    lines += [f"relation {polynomial_to_string(r, names)}" for r in presentation.relations]
    for generator_name in names:
        image = presentation.augmentation.get(generator_name)
        if image:
            lines.append(f"augment {generator_name} -> {polynomial_to_string(image, names)}")
    for generator_name in names:
        image = presentation.differential.get(generator_name)
        if image:
            lines.append(f"differential {generator_name} -> {polynomial_to_string(image, names)}")
    return "\n".join(lines) + "\n"


class PresentationExtractor:
    """Reads a presentation file from disk"""

    def __init__(self, path: str):
        self.path = Path(path)
        if not self.path.is_file():
            raise FileNotFoundError(f"Presentation file not found: {path}")
        try:
            self.text = self.path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            logger.error(f"❌ {self.path} is not valid UTF-8: {e}")
            raise PresentationError(f"{path} is not valid UTF-8 text: {e.reason}", invariant="encoding") from e

    def extract(self, check_degree: Optional[int] = None) -> PresentationDocument:
        logger.info(f"Reading presentation {self.path}")
        return PresentationDocument(self.text, parse_presentation(self.text, check_degree))
