import inspect
import json
import logging

import pytest
from pydantic import ValidationError

from src.core.config import Settings
from src.core.logging_config import setup_logging
from src.core.models import errors
from src.core.monitoring.json_formatter import JsonFormatter
from src.core.monitoring.service import RunMonitor
from src.core.utils.dimacs import from_dimacs, to_dimacs
from src.core.utils.serialization import read_json, to_json, write_json


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("SHIFTLAB_THREADS", "3")
    monkeypatch.setenv("SHIFTLAB_SOLVER_TIME_BUDGET", "7.5")
    monkeypatch.setenv("SHIFTLAB_LOG_JSON", "true")
    settings = Settings()
    assert settings.threads == 3
    assert settings.solver_time_budget == 7.5
    assert settings.log_json is True
    assert settings.canon_node_budget == 100_000
    assert settings.verify_window == 8


def test_settings_reject_out_of_range_values():
    with pytest.raises(ValidationError):
        Settings(threads=0)
    with pytest.raises(ValidationError):
        Settings(solver_time_budget=0)


def test_json_formatter_merges_extra_fields():
    record = logging.LogRecord("shiftlab", logging.INFO, __file__, 1, "SHIFTLAB_EVENT: %s", ("job",), None)
    record.exit_code = 3
    payload = json.loads(JsonFormatter().format(record))
    assert payload["message"] == "SHIFTLAB_EVENT: job"
    assert payload["level"] == "INFO"
    assert payload["exit_code"] == 3
    assert "args" not in payload


def test_setup_logging_writes_json_lines_to_file(tmp_path):
    log_file = tmp_path / "run.log"
    setup_logging("DEBUG", str(log_file), json_output=True)
    RunMonitor().log_event("job", {"subcommand": "gen", "exit_code": 0})
    for handler in logging.getLogger().handlers:
        handler.flush()

    lines = [json.loads(line) for line in log_file.read_text(encoding="utf-8").splitlines()]
    events = [line for line in lines if line["message"] == "SHIFTLAB_EVENT: job"]
    assert events and events[0]["subcommand"] == "gen"
    setup_logging("WARNING")


def test_monitor_events_carry_their_fields(caplog):
    """Tests that solver runs and verifications are logged as structured events."""
    # Arrange
    monitor = RunMonitor()

    # Act
    with caplog.at_level(logging.INFO, logger="src.core.monitoring.service"):
        monitor.log_solver_run("branch_and_bound", 5, 5, True, {"nodes": 12})
        monitor.log_verification("bounded", False, {"edges_checked": 4})

    # Assert
    solver, verification = [r for r in caplog.records if r.message.startswith("SHIFTLAB_EVENT")]
    assert solver.message == "SHIFTLAB_EVENT: solver_run"
    assert (solver.method, solver.vertices, solver.chi, solver.exact, solver.nodes) == ("branch_and_bound", 5, 5, True, 12)
    assert verification.construction == "bounded"
    assert verification.passed is False
    assert verification.edges_checked == 4


def test_json_documents_are_byte_stable(tmp_path):
    first = to_json({"b": [1, 2], "a": {"y": 1, "x": 0}})
    second = to_json({"a": {"x": 0, "y": 1}, "b": [1, 2]})
    assert first == second
    path = write_json(tmp_path / "nested" / "doc.json", {"a": 1})
    assert read_json(path) == {"a": 1}


def test_dimacs_parses_what_it_writes():
    text = to_dimacs(4, [(0, 1), (2, 3)], comment="two edges")
    assert text.splitlines()[0] == "c two edges"
    assert from_dimacs(text) == (4, [(0, 1), (2, 3)])


def test_dimacs_normalizes_and_deduplicates_edges():
    assert from_dimacs("p edge 3 2\ne 3 1\ne 1 3\n") == (3, [(0, 2)])


@pytest.mark.parametrize(
    "text",
    [
        "e 1 2\n",
        "p edge 3 1\ne 1 4\n",
        "p edge 3 1\ne 2 2\n",
        "p graph 3 1\n",
        "p edge 3 0\nx 1 2\n",
        "c only a comment\n",
    ],
)
def test_dimacs_rejects_malformed_input(text):
    with pytest.raises(ValueError):
        from_dimacs(text)


def test_every_domain_error_documents_itself():
    classes = [c for _, c in inspect.getmembers(errors, inspect.isclass) if issubclass(c, errors.ShiftLabError)]
    assert len(classes) > 20
    for cls in classes:
        assert (vars(cls).get("__doc__") or "").strip(), cls.__name__
