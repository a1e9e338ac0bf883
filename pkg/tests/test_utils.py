import io
import json

import pytest

from app.models.schemas import OutputFormat
from app.utils.error_handlers import (EXIT_ORACLE_MISMATCH, EXIT_RESOURCE, EXIT_USAGE,
                                      EXIT_VERIFICATION_FAILED, DomainError, OracleMismatchError,
                                      PrecisionError, ResourceBudgetError, SequenceExhaustedError,
                                      VerificationFailure, exit_code_for, handle_cli_error)
from app.utils.file_utils import append_ndjson, read_ndjson
from app.utils.formatters import RecordWriter


@pytest.mark.parametrize("exc, code", [
    (OracleMismatchError("x"), EXIT_ORACLE_MISMATCH),
    (ResourceBudgetError("x"), EXIT_RESOURCE),
    (SequenceExhaustedError("x"), EXIT_RESOURCE),
    (PrecisionError("x"), EXIT_RESOURCE),
    (VerificationFailure("x"), EXIT_VERIFICATION_FAILED),
    (DomainError("x"), EXIT_USAGE),
])
def test_exit_codes(exc, code):
    assert exit_code_for(exc) == code


def test_domain_error_is_a_value_error():
    assert isinstance(DomainError("x"), ValueError)


def test_handle_cli_error_prints_one_line():
    stream = io.StringIO()
    assert handle_cli_error(PrecisionError("ceiling reached"), stream) == EXIT_RESOURCE
    assert stream.getvalue() == "error: ceiling reached\n"


def test_ndjson_appends(tmp_path):
    path = str(tmp_path / "logs" / "run.ndjson")
    assert append_ndjson(path, [{"n": 1}, {"n": 2}]) == 2
    append_ndjson(path, [{"n": 3}])
    assert [r["n"] for r in read_ndjson(path)] == [1, 2, 3]


def test_writer_json_lines():
    stream = io.StringIO()
    writer = RecordWriter(stream, OutputFormat.JSON, ["n"])
    writer.write({"n": 1, "theta_lo": ["169", -10]}, display={"theta": "ignored"})
    assert json.loads(stream.getvalue()) == {"n": 1, "theta_lo": ["169", -10]}


def test_writer_csv_header_once():
    stream = io.StringIO()
    writer = RecordWriter(stream, "csv", ["n", "lo"])
    writer.write({"n": 1, "lo": ["169", -10]})
    writer.write({"n": 2, "lo": None})
    lines = stream.getvalue().splitlines()
    assert lines[0] == "n,lo"
    assert len(lines) == 3
    assert lines[1].startswith("1,")


def test_writer_plain_abbreviates_and_summarizes():
    stream = io.StringIO()
    writer = RecordWriter(stream, OutputFormat.PLAIN, ["n", "theta"])
    writer.write({"n": 8, "theta_num": "1"}, display={"theta": "9" * 200})
    writer.summary("1/1 checks passed")
    first, second = stream.getvalue().splitlines()
    assert first.startswith("n=8  theta=999")
    assert "(200 chars)" in first
    assert second == "1/1 checks passed"
    assert writer.written == [{"n": 8, "theta_num": "1"}]
