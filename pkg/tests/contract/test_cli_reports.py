"""Contract tests for command reports, text lines and exit codes."""

import json
from pathlib import Path
from unittest.mock import patch

import pytest

from genhamilton.__main__ import main
from genhamilton.cli.commands import (
    NO_CHARACTERS,
    OracleInconsistencyError,
    cmd_analyze_chartable,
    cmd_analyze_group,
    cmd_derive_chartable,
    cmd_l2q,
    cmd_oracle,
    exit_code_for,
    run_batch,
    run_one,
)
from genhamilton.core.models.reports import CycleSearchResult
from genhamilton.core.services.charbounds import CharacterError, DimensionMismatchError
from genhamilton.core.services.closurecrit import CriterionError
from genhamilton.core.services.gengraph import GraphError, OracleCapExceededError
from genhamilton.core.services.loader import LoaderError
from genhamilton.core.services.permcore import (
    NoFaithfulConstituentError,
    NotTransitiveError,
    OrderCapExceededError,
)
from tests.conftest import CHARTABLES, GROUPS

pytestmark = pytest.mark.contract

ANALYZE_GROUP_KEYS = {
    "command",
    "name",
    "order",
    "degree",
    "class_lengths",
    "element_orders",
    "representatives",
    "matrix",
    "verdict",
    "posa_closure",
    "chvatal_closure",
    "iterations",
    "reports",
}


class TestAnalyzeGroupReport:
    """Test the analyze-group report."""

    def test_payload(self, config):
        """Test the analyze-group payload fields."""
        report = cmd_analyze_group(GROUPS / "S3.json", config)
        assert report.text == "S3: Posa for 0th closure"
        assert set(report.payload) == ANALYZE_GROUP_KEYS
        assert report.payload["order"] == 6
        assert report.payload["class_lengths"] == [1, 3, 2]
        assert report.payload["representatives"] == ["()", "(2,3)", "(1,2,3)"]
        assert report.payload["posa_closure"] == 0

    def test_reports_are_json_ready(self, config):
        """Test reports are JSON ready."""
        report = cmd_analyze_group(GROUPS / "S4.json", config)
        first = report.payload["reports"][0]
        assert set(first) == {"bad_for_posa", "bad_for_chvatal", "data", "closure_index"}
        assert all(set(interval) == {"low", "high"} for interval in first["bad_for_posa"])
        json.dumps(report.payload)

    def test_no_decision(self, config):
        """Test no decision."""
        report = cmd_analyze_group(GROUPS / "D8.json", config)
        assert report.text == "D8: no decision"
        assert report.payload["posa_closure"] is None


class TestChartableReports:
    """Test the reports read from character table files."""

    def test_analyze_chartable(self, config):
        """Test analyze chartable."""
        report = cmd_analyze_chartable(CHARTABLES / "A5.json", config)
        assert report.text == "A5: Posa for 0th closure"
        assert report.payload["order"] == 60
        assert report.payload["bounds"][0] == [0, 8, 8, 8]

    def test_analyze_chartable_no_decision(self, config):
        """Test analyze chartable no decision."""
        report = cmd_analyze_chartable(CHARTABLES / "A5.2.json", config)
        assert report.text == "A5.2: no decision"

    def test_without_characters(self, config):
        """Test without characters."""
        report = cmd_analyze_chartable(CHARTABLES / "S3_bare.yaml", config)
        assert report.text == f"S3: {NO_CHARACTERS}"
        assert report.payload["verdict"] == NO_CHARACTERS

    def test_l2q_text(self, config):
        """Test L2(q) text."""
        report = cmd_l2q(CHARTABLES / "A5.json", config)
        assert report.text.splitlines() == [
            "A5: large orders: pass",
            "A5: order 2: pass",
            "A5: orders 3..5: fail (classes 3, 4, 5)",
        ]
        assert report.payload["all_ok"] is False
        assert report.payload["order3to5_failures"] == [3, 4, 5]
        assert report.payload["field_size"] == 4

    def test_derive_chartable_round_trip(self, config, tmp_path):
        """Test derive chartable round trip."""
        report = cmd_derive_chartable(GROUPS / "A5.json", config)
        document = json.loads(report.text)
        assert document == json.loads((CHARTABLES / "A5.json").read_text())
        path = tmp_path / "derived.json"
        path.write_text(report.text)
        assert cmd_analyze_chartable(path, config).text == "A5: Posa for 0th closure"

    def test_derive_needs_maximal_subgroups(self, config):
        """Test derive needs maximal subgroups."""
        with pytest.raises(LoaderError, match="no maximal_subgroups"):
            cmd_derive_chartable(GROUPS / "PSL2_8.json", config)


class TestOracleReport:
    """Test the oracle report."""

    def test_witness(self, config):
        """Test witness."""
        report = cmd_oracle(GROUPS / "S3.json", config)
        assert report.text.startswith("S3: witness found (5 vertices, ")
        assert report.text.endswith("posa=true, chvatal=true, verdict: Posa for 0th closure")
        assert report.payload["status"] == "witness"
        assert len(report.payload["cycle"]) == 5
        assert report.payload["edges"] == 9

    def test_no_cycle(self, config):
        """Test no cycle."""
        report = cmd_oracle(GROUPS / "Q8.json", config)
        assert report.text == (
            "Q8: no Hamiltonian cycle (0 backtracks); posa=false, chvatal=false, "
            "verdict: no decision"
        )
        assert report.payload["cycle"] is None

    def test_budget_exhausted(self, config, mocker):
        """Test budget exhausted."""
        mocker.patch(
            "genhamilton.cli.commands.hamiltonian_cycle_search",
            return_value=CycleSearchResult(status="budget_exhausted", backtracks=2),
        )
        report = cmd_oracle(GROUPS / "S3.json", config)
        assert report.text.startswith("S3: search budget exhausted after 2 backtracks; ")
        assert report.payload["status"] == "budget_exhausted"

    def test_oracle_cap(self, config):
        """Test oracle cap."""
        config.oracle_cap = 10
        with pytest.raises(OracleCapExceededError):
            cmd_oracle(GROUPS / "S4.json", config)

    def test_inconsistent_matrix_is_reported(self, config, mocker):
        """Test inconsistent matrix is reported."""
        mocker.patch("genhamilton.cli.commands.check_degree_consistency", return_value=[2])
        with pytest.raises(OracleInconsistencyError):
            cmd_oracle(GROUPS / "S3.json", config)


class TestExitCodes:
    """Test the mapping from errors to exit codes."""

    @pytest.mark.parametrize(
        "error, code",
        [
            (LoaderError("x"), 2),
            (CharacterError("x"), 2),
            (DimensionMismatchError("x"), 2),
            (CriterionError("x"), 2),
            (OrderCapExceededError("x"), 3),
            (OracleCapExceededError("x"), 3),
            (NotTransitiveError("x"), 4),
            (NoFaithfulConstituentError("x"), 4),
            (GraphError("x"), 4),
            (OracleInconsistencyError("x"), 5),
            (RuntimeError("x"), 1),
        ],
    )
    def test_exit_code_for(self, error, code):
        """Test the exit code for each error type."""
        assert exit_code_for(error) == code

    def test_run_one_captures_errors(self, config, tmp_path):
        """Test run one captures errors."""
        outcome = run_one("analyze-group", str(tmp_path / "missing.json"), config)
        assert outcome.report is None
        assert outcome.exit_code == 2
        assert "Failed to read" in outcome.error

    def test_run_batch_in_parallel(self, config):
        """Test run batch in parallel."""
        config.jobs = 2
        paths = [str(GROUPS / "S3.json"), str(GROUPS / "A4.json")]
        outcomes = run_batch("analyze-group", paths, config)
        assert [o.path for o in outcomes] == paths
        assert [o.report.name for o in outcomes] == ["S3", "A4"]


class TestJsonOutput:
    """Test the CLI JSON document."""

    def run_json(self, capsys, *argv):
        with patch("genhamilton.core.utils.logger.setup_logging"):
            with pytest.raises(SystemExit):
                main([*argv, "--json"])
        return capsys.readouterr().out

    def test_output_is_deterministic(self, capsys):
        """Test output is deterministic."""
        files = [str(GROUPS / "S3.json"), str(GROUPS / "A4.json")]
        first = self.run_json(capsys, "analyze-group", *files)
        second = self.run_json(capsys, "analyze-group", *files)
        assert first == second
        payloads = json.loads(first)
        assert [p["name"] for p in payloads] == ["S3", "A4"]

    def test_keys_are_sorted(self, capsys):
        """Test keys are sorted."""
        out = self.run_json(capsys, "l2q", str(CHARTABLES / "L2_13.json"))
        payload = json.loads(out)[0]
        assert list(payload) == sorted(payload)
        assert payload["all_ok"] is True

    def test_errors_are_not_in_the_document(self, capsys, tmp_path):
        """Test errors are not in the document."""
        out = self.run_json(capsys, "l2q", str(Path(tmp_path) / "missing.json"))
        assert json.loads(out) == []
