import importlib.util
import json
import sys
from io import StringIO
from pathlib import Path

import pytest
from jsonschema import Draft7Validator, ValidationError, validate

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.cdga.cdga_engine import CdgaEngine, CdgaInstance
from eqloop.exceptions import InvariantError, ParseError
from eqloop.loaders.basis_cache import BasisCache
from eqloop.loaders.report_writer import ReportWriter, load_schema
from eqloop.pipeline.tor_pipeline import TorPipeline, TorRequest
from eqloop.transformers.report_transformer import REPORT_VERSION, ReportTransformer

DIGEST = "0" * 64

# Load schema once
report_schema = load_schema()


def load_validate_script():
    spec = importlib.util.spec_from_file_location("validate_json", project_root / "scripts" / "validate_json.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture
def transformer():
    return ReportTransformer()


@pytest.fixture
def tor_report(transformer, s2_circle):
    pipeline = TorPipeline(TorRequest(s2_circle, 4, want_ring=True))
    result = pipeline.run()
    return transformer.envelope("tor", "H", DIGEST, 4, transformer.transform_tor(result, pipeline.complex))


@pytest.fixture
def cohomology_report(transformer, lambda_uxy):
    engine = CdgaEngine(CdgaInstance(lambda_uxy, 4))
    table = engine.cohomology()
    result = transformer.transform_cohomology(table, engine.ring, engine.is_minimal())
    return transformer.envelope("cohomology", "L", DIGEST, 4, result)


class TestReportSchema:
    """Reports built by the transformer match the bundled schema"""

    def test_tor_report(self, tor_report):
        validate(instance=tor_report, schema=report_schema)
        assert list(tor_report) == ["status", "command", "version", "algebra", "input_digest",
                                    "max_degree", "result"]
        assert tor_report["version"] == REPORT_VERSION

    def test_rationals_are_strings(self, tor_report):
        for entry in tor_report["result"]["ring_constants"]:
            assert all(isinstance(c, str) for c in entry["product"])

    def test_cohomology_report(self, cohomology_report):
        validate(instance=cohomology_report, schema=report_schema)
        assert cohomology_report["result"]["euler_characteristic"] == 1

    def test_error_report(self, transformer):
        report = transformer.error_report("tor", ParseError("bad degree", 2, 20))
        validate(instance=report, schema=report_schema)
        assert report["invariant"] == "syntax"
        assert (report["line"], report["column"]) == (2, 20)

    def test_missing_result_rejected(self, tor_report):
        del tor_report["result"]
        with pytest.raises(ValidationError):
            validate(instance=tor_report, schema=report_schema)

    def test_float_coefficient_rejected(self, tor_report):
        tor_report["result"]["ring_constants"][0]["product"] = [0.5]
        with pytest.raises(ValidationError):
            validate(instance=tor_report, schema=report_schema)

    def test_bad_digest_rejected(self, tor_report):
        tor_report["input_digest"] = "not-a-digest"
        with pytest.raises(ValidationError):
            validate(instance=tor_report, schema=report_schema)


class TestReportWriter:
    """Writing validated reports"""

    def test_json_is_stable(self, tor_report):
        first, second = StringIO(), StringIO()
        ReportWriter("json", first).write(tor_report)
        ReportWriter("json", second).write(tor_report)
        assert first.getvalue() == second.getvalue()
        assert json.loads(first.getvalue()) == tor_report

    def test_human(self, tor_report):
        stream = StringIO()
        ReportWriter("human", stream).write(tor_report)
        text = stream.getvalue()
        assert text.startswith("tor H")
        assert "Poincaré polynomial: 1 + t + t^2 + t^3 + t^4" in text

    def test_invalid_report_raises(self, tor_report):
        tor_report["status"] = "maybe"
        with pytest.raises(InvariantError):
            ReportWriter("json", StringIO()).write(tor_report)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            ReportWriter("xml")


class TestBasisCache:
    """On-disk memoization of degree bases"""

    def test_store_then_load(self, tmp_path):
        cache = BasisCache(tmp_path)
        cache.store(DIGEST, "slice-4", {"basis": [[2, 0]]})
        assert cache.load(DIGEST, "slice-4") == {"basis": [[2, 0]]}
        assert cache.stats["stored"] == 1
        assert cache.stats["hits"] == 1

    def test_miss(self, tmp_path):
        cache = BasisCache(tmp_path)
        assert cache.load(DIGEST, "absent") is None
        assert cache.stats["misses"] == 1

    def test_corrupt_entry_is_a_miss(self, tmp_path):
        cache = BasisCache(tmp_path)
        cache.store(DIGEST, "slice-2", {"basis": []})
        next((tmp_path / DIGEST).glob("*.json")).write_text("{not json", encoding="utf-8")
        assert cache.load(DIGEST, "slice-2") is None

    def test_cached_tor_matches(self, tmp_path, s2_circle):
        cache = BasisCache(tmp_path)
        first = TorPipeline(TorRequest(s2_circle, 6), cache).tor_betti()
        second = TorPipeline(TorRequest(s2_circle, 6), cache).tor_betti()
        assert first.betti == second.betti
        assert cache.stats["hits"] > 0


class TestValidateScript:
    """scripts/validate_json.py on saved reports"""

    @pytest.fixture
    def script(self):
        return load_validate_script()

    def save(self, tmp_path, name, report):
        path = tmp_path / name
        path.write_text(json.dumps(report), encoding="utf-8")
        return str(path)

    def test_valid_reports(self, script, tmp_path, tor_report, cohomology_report, capsys):
        files = [self.save(tmp_path, "tor.json", tor_report), self.save(tmp_path, "cohomology.json", cohomology_report)]
        assert script.main(["--file"] + files) == 0
        out = capsys.readouterr().out
        assert out.count("✅") == 2
        assert "(tor, status ok)" in out

    def test_every_violation_is_listed(self, script, tmp_path, tor_report, capsys):
        del tor_report["result"]
        tor_report["input_digest"] = "not-a-digest"
        assert script.main(["--file", self.save(tmp_path, "broken.json", tor_report)]) == 2
        out = capsys.readouterr().out
        assert "(2 errors)" in out
        assert "'result' is a required property" in out
        assert "input_digest:" in out

    def test_unreadable_file(self, script, tmp_path, capsys):
        path = tmp_path / "truncated.json"
        path.write_text("{\"status\": ", encoding="utf-8")
        assert script.main(["--file", str(path)]) == 1
        assert "Error loading JSON file" in capsys.readouterr().out

    def test_report_errors_sorted_by_path(self, script, tor_report):
        tor_report["version"] = 3
        tor_report["max_degree"] = "four"
        lines = script.report_errors(Draft7Validator(report_schema), tor_report)
        assert [line.split(":")[0] for line in lines] == ["max_degree", "version"]
