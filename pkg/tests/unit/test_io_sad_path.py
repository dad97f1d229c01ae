"""Sad path tests for spec and log documents."""

from typing import NamedTuple

import pytest

from pcmeter.errors import (
    DocumentIOError,
    DuplicateTraceIdError,
    MalformedDocumentError,
    SpecInvalidError,
)
from pcmeter.io import dump_log, load_log, load_spec
from pcmeter.payment import generate_log, random_scenarios


class InvalidSpecParams(NamedTuple):
    file: str
    codes: set[str]


invalid_spec_params = [
    InvalidSpecParams("non_monotone.spec.json", {"NON_MONOTONE_BANDS"}),
    InvalidSpecParams("cutoff_exceeds.spec.json", {"CUTOFF_PLUS_THRESHOLD_EXCEEDS_ONE"}),
    InvalidSpecParams("unresolved_rule.spec.json", {"UNRESOLVED_RULE"}),
]


@pytest.mark.parametrize("param", invalid_spec_params)
def test_invalid_specs_are_rejected(param, data_dir):
    with pytest.raises(SpecInvalidError) as exc_info:
        load_spec(data_dir / param.file)

    assert {f.code for f in exc_info.value.findings} == param.codes
    assert str(exc_info.value).startswith("SPEC_INVALID: ")


def test_string_cutoff(data_dir):
    with pytest.raises(MalformedDocumentError) as exc_info:
        load_spec(data_dir / "string_cutoff.spec.json")

    assert exc_info.value.path == "$.dimensions.temporal.cutoff"


def test_bad_rule(data_dir):
    with pytest.raises(MalformedDocumentError) as exc_info:
        load_spec(data_dir / "bad_rule.spec.json")

    assert exc_info.value.path == "$.rules.broken"
    assert "PARSE_ERROR" in str(exc_info.value)


def test_truncated_log(data_dir):
    with pytest.raises(MalformedDocumentError) as exc_info:
        load_log(data_dir / "truncated.jsonl")

    assert exc_info.value.line == 2


def test_duplicate_trace_ids(data_dir):
    with pytest.raises(DuplicateTraceIdError):
        load_log(data_dir / "duplicate.jsonl")


def test_missing_file(tmp_path):
    with pytest.raises(DocumentIOError):
        load_spec(tmp_path / "missing.spec.json")
    with pytest.raises(DocumentIOError):
        load_log(tmp_path / "missing.jsonl")


def test_unwritable_target(tmp_path):
    with pytest.raises(DocumentIOError):
        dump_log(generate_log(random_scenarios(1)), tmp_path / "missing" / "log.jsonl")


class MalformedLogParams(NamedTuple):
    content: str
    suffix: str = "jsonl"


malformed_log_params = [
    MalformedLogParams('{"traceId": "t", "events": []}\n'),
    MalformedLogParams('{"traceId": "t", "events": [{"task": "A", "attrs": {"x": true}}]}\n'),
    MalformedLogParams('{"traceId": "t", "events": [{"task": "A"}], "extra": 1}\n'),
    MalformedLogParams("traceId,position,task\nt,0,A\n", "csv"),
    MalformedLogParams(
        "traceId,position,task,attrName,attrValue,attrKind\nt,0,A,x,1,weird\n", "csv"
    ),
    MalformedLogParams(
        "traceId,position,task,attrName,attrValue,attrKind\nt,0,A,x,abc,number\n", "csv"
    ),
    MalformedLogParams(
        "traceId,position,task,attrName,attrValue,attrKind\nt,0,A,x,1,number\nt,0,B,y,1,number\n",
        "csv",
    ),
    MalformedLogParams(
        "traceId,position,task,attrName,attrValue,attrKind\nt,1,A,x,1,number\n", "csv"
    ),
]


@pytest.mark.parametrize("param", malformed_log_params)
def test_malformed_logs(param, tmp_path):
    path = tmp_path / f"log.{param.suffix}"
    path.write_text(param.content, encoding="utf-8")

    with pytest.raises(MalformedDocumentError):
        load_log(path)
