import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.exceptions import ParseError, PresentationError
from eqloop.extractors.presentation_extractor import (
    PresentationDocument,
    PresentationExtractor,
    parse_presentation,
    render_presentation,
)


class TestParsePresentation:
    """Reading the presentation format"""

    def test_s2_circle(self, s2_circle):
        assert s2_circle.name == "H"
        assert s2_circle.generator_names == ("x", "u")
        assert tuple(s2_circle.r_generators) == ("u",)
        assert len(s2_circle.relations) == 1
        assert "x" in s2_circle.augmentation
        assert not s2_circle.has_differential

    def test_model_with_differential(self, lambda_uxy):
        assert lambda_uxy.has_differential
        assert set(lambda_uxy.differential) == {"y"}
        assert tuple(lambda_uxy.r_generators) == ()

    def test_comments_and_blank_lines(self):
        text = "# header\n\nalgebra A   # trailing\n  generator u degree 2\nrbase u\n"
        algebra = parse_presentation(text)
        assert algebra.name == "A"
        assert tuple(algebra.r_generators) == ("u",)

    def test_zero_images_are_dropped(self):
        algebra = parse_presentation("generator a degree 2\ngenerator b degree 3\ndifferential b -> 0\n")
        assert not algebra.has_differential

    @pytest.mark.parametrize("name", ["s2-circle.alg", "lambda-uxy.alg", "point.alg",
                                      "s2-trivial.alg", "lambda-e1e2.alg"])
    def test_render_then_parse(self, presentation_dir, name):
        algebra = parse_presentation((presentation_dir / name).read_text(encoding="utf-8"))
        rendered = render_presentation(algebra)
        assert parse_presentation(rendered) == algebra
        assert render_presentation(parse_presentation(rendered)) == rendered


class TestParseErrors:
    """Syntax errors carry a line and a column"""

    def test_non_integer_degree(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("algebra A\ngenerator x degree two\n")
        assert excinfo.value.line == 2
        assert excinfo.value.column == 20
        assert excinfo.value.invariant == "syntax"

    def test_use_before_declaration(self):
        text = "generator x degree 2\nrelation x^2 - y\ngenerator y degree 4\n"
        with pytest.raises(ParseError) as excinfo:
            parse_presentation(text)
        assert excinfo.value.line == 2
        assert excinfo.value.column == 16

    def test_undeclared_rbase(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("generator x degree 2\nrbase u\n")
        assert excinfo.value.line == 2
        assert excinfo.value.column == 7

    def test_unknown_directive(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("generator x degree 2\nfrobnicate x\n")
        assert excinfo.value.line == 2
        assert excinfo.value.column == 1

    def test_duplicate_generator(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("generator x degree 2\ngenerator x degree 4\n")
        assert excinfo.value.line == 2

    def test_duplicate_algebra_line(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("algebra A\nalgebra B\n")
        assert excinfo.value.line == 2

    def test_malformed_mapping(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("generator x degree 2\naugment x = 0\n")
        assert excinfo.value.line == 2

    def test_juxtaposed_factors(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("generator x degree 2\ngenerator u degree 2\nrelation x u\n")
        assert excinfo.value.line == 3

    def test_zero_denominator(self):
        with pytest.raises(ParseError) as excinfo:
            parse_presentation("generator x degree 2\ngenerator u degree 2\nrelation x - 1/0*u\n")
        assert (excinfo.value.line, excinfo.value.column) == (3, 14)
        assert "zero denominator" in str(excinfo.value)


class TestSemanticErrors:
    """Well-formed documents describing an invalid algebra"""

    def test_differential_degree(self):
        with pytest.raises(PresentationError) as excinfo:
            parse_presentation("generator a degree 2\ngenerator b degree 2\ndifferential b -> a\n")
        assert excinfo.value.invariant == "differential-degree"

    def test_odd_r_generator(self):
        with pytest.raises(PresentationError) as excinfo:
            parse_presentation("generator e degree 1\nrbase e\n")
        assert excinfo.value.invariant == "r-even"

    def test_inhomogeneous_relation(self):
        with pytest.raises(PresentationError) as excinfo:
            parse_presentation("generator x degree 2\ngenerator u degree 2\nrelation x^2 - u\n")
        assert excinfo.value.invariant == "homogeneity"


class TestPresentationExtractor:
    """Reading presentation files"""

    def test_extract(self, presentation_dir):
        document = PresentationExtractor(str(presentation_dir / "s2-circle.alg")).extract()
        assert isinstance(document, PresentationDocument)
        assert document.presentation.name == "H"
        assert len(document.digest) == 64

    def test_digest_follows_text(self, presentation_dir):
        first = PresentationExtractor(str(presentation_dir / "point.alg")).extract()
        second = PresentationExtractor(str(presentation_dir / "point.alg")).extract()
        other = PresentationExtractor(str(presentation_dir / "s2-trivial.alg")).extract()
        assert first.digest == second.digest
        assert first.digest != other.digest

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            PresentationExtractor(str(tmp_path / "absent.alg"))

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "binary.alg"
        path.write_bytes(b"\xff\xfe generator x degree 2\n")
        with pytest.raises(PresentationError) as excinfo:
            PresentationExtractor(str(path))
        assert excinfo.value.invariant == "encoding"
