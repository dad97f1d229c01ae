"""Unit tests for spec and log documents and report emission."""

import datetime
import json
import math

from hypothesis import HealthCheck, given, settings
import pytest

from pcmeter.io import (
    dump_log,
    emit_report,
    load_log,
    load_spec,
    log_format_of,
    read_spec,
    render_report,
    report_format_of,
)
from pcmeter.metrics import p_measure, tau_measure
from pcmeter.model import AggregatorChoice, AttributeValue, Level, ProcessLog, Quantity, Trace
from pcmeter.payment import PAYMENT_SPEC, generate_log, random_scenarios
from pcmeter.projection import CategoricalMap, NumericBands, RuleRef
from utils import random_case


def test_load_payment_spec(spec):
    assert load_spec(PAYMENT_SPEC) == spec
    assert spec.spec_id == "payment-process"
    assert set(spec.dimension_defaults) == {"temporal", "monetary"}


def test_null_bounds_become_open_bands(spec):
    pay_in_days = next(a for a in spec.attribute_specs if a.task_selector == "T2")
    payment_received = next(
        a for a in spec.attribute_specs if a.attribute_name == "paymentReceived"
    )

    assert pay_in_days.projection.bands[-1] == (math.inf, 0.0)
    assert payment_received.projection.bands[-1] == (-math.inf, 0.0)
    assert payment_received.projection.relative_to == "amountDue"


def test_rules_spec(data_dir):
    spec = load_spec(data_dir / "rules.spec.json")
    projections = {a.attribute_name: a.projection for a in spec.attribute_specs}

    assert isinstance(projections["a1"], NumericBands)
    assert isinstance(projections["rating"], CategoricalMap)
    assert projections["rating"].default_scheme
    assert projections["verdict"] == RuleRef("bothLow")
    assert spec.trace_aggregator == AggregatorChoice("weighted-average")
    assert spec.dimension_weight("quality") == 2.0
    assert "bothLow" in spec.rules


def test_rules_spec_evaluation(data_dir, tmp_path):
    spec = load_spec(data_dir / "rules.spec.json")
    log_path = tmp_path / "rules.jsonl"
    log_path.write_text(
        json.dumps(
            {
                "traceId": "r1",
                "events": [
                    {
                        "task": "A",
                        "attrs": {"a1": 3, "a2": 7, "rating": {"level": "high"}, "verdict": 0},
                    }
                ],
            }
        )
        + "\n",
        encoding="utf-8",
    )
    result = tau_measure(load_log(log_path).traces[0], spec)

    assert result.tau_measure == pytest.approx(0.85)


def test_load_jsonl_log(data_dir):
    log = load_log(data_dir / "payment.jsonl")
    first = log.traces[0].events[0]

    assert log.process_id == "payment"
    assert [trace.trace_id for trace in log.traces] == ["full", "partial", "non"]
    assert first.attributes[0].value == Quantity(500.0, "currency")
    assert first.attributes[1].value == datetime.date(2019, 4, 1)
    assert log.traces[2].events[-1].attributes[0].value == Level("terminated")


def test_jsonl_and_csv_logs_agree(data_dir):
    assert load_log(data_dir / "payment.jsonl") == load_log(data_dir / "payment.csv")


def test_load_log_overrides(data_dir):
    log = load_log(data_dir / "payment.jsonl", format="jsonl", process_id="invoices")
    assert log.process_id == "invoices"


def test_loaded_scenarios_evaluate(spec, data_dir):
    result = p_measure(load_log(data_dir / "payment.csv"), spec)

    assert [t.tau_measure for t in result.trace_results] == pytest.approx([1.0, 0.8, 0.0])
    assert result.p_measure == pytest.approx(0.6)


def test_empty_log_file(data_dir):
    assert load_log(data_dir / "empty.jsonl").traces == ()


@pytest.mark.parametrize("suffix", ["jsonl", "csv"])
def test_dump_log_round_trip(suffix, tmp_path):
    log = generate_log(random_scenarios(25, seed=3))
    path = tmp_path / f"payment.{suffix}"

    size = dump_log(log, path)

    assert size == len(path.read_bytes())
    assert load_log(path) == log


@settings(max_examples=50, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(case=random_case())
def test_dump_log_preserves_random_traces(case, tmp_path):
    log = ProcessLog("random", (case.trace,))
    path = tmp_path / "random.jsonl"
    dump_log(log, path)

    assert load_log(path) == log


@pytest.mark.parametrize("suffix", ["jsonl", "csv"])
def test_dump_log_keeps_date_shaped_text(suffix, tmp_path):
    trace = Trace.from_tasks(
        "t",
        [
            (
                "T1",
                [
                    AttributeValue.of("reference", "2019-04-01"),
                    AttributeValue.of("invoiceDate", datetime.date(2019, 4, 1)),
                ],
            )
        ],
    )
    log = ProcessLog("dates", (trace,))
    path = tmp_path / f"dates.{suffix}"
    dump_log(log, path)

    loaded = load_log(path)
    values = {a.name: a.value for a in loaded.traces[0].events[0].attributes}

    assert loaded == log
    assert values == {"reference": "2019-04-01", "invoiceDate": datetime.date(2019, 4, 1)}


def test_explicit_text_document(tmp_path):
    path = tmp_path / "text.jsonl"
    path.write_text(
        '{"traceId": "t", "events": [{"task": "T1", "attrs": '
        '{"reference": {"text": "2019-04-01"}, "invoiceDate": "2019-04-01"}}]}\n',
        encoding="utf-8",
    )
    reference, invoice_date = load_log(path).traces[0].events[0].attributes

    assert reference.value == "2019-04-01"
    assert invoice_date.value == datetime.date(2019, 4, 1)


def test_json_report(spec, scenario_log, tmp_path):
    path = tmp_path / "report.json"
    size = emit_report(p_measure(scenario_log, spec), path)
    report = json.loads(path.read_text(encoding="utf-8"))

    assert size == len(path.read_bytes())
    assert list(report) == ["specId", "processId", "pMeasure", "traces"]
    assert report["pMeasure"] == 0.6
    assert [t["tauMeasure"] for t in report["traces"]] == [1, 0.8, 0]
    assert [t["class"] for t in report["traces"]] == ["full", "non", "non"]
    assert report["traces"][1]["dimensionMinima"] == {"monetary": 1, "temporal": 0.6}
    assert report["traces"][0]["tasks"][0] == {
        "task": "T1",
        "tMeasure": None,
        "class": None,
        "dimensions": [],
    }


def test_single_full_trace_report(spec, data_dir):
    report = json.loads(render_report(p_measure(load_log(data_dir / "full.jsonl"), spec)))
    trace = report["traces"][0]

    assert trace["tauMeasure"] == 1
    assert trace["class"] == "full"


def test_csv_report(spec, scenario_log, tmp_path):
    path = tmp_path / "report.csv"
    emit_report(p_measure(scenario_log, spec), path)
    lines = path.read_text(encoding="utf-8").splitlines()

    assert lines[0].split(",")[:3] == ["specId", "processId", "pMeasure"]
    assert lines[1].startswith("payment-process,payment,0.6,payment-0001,1,full,0,T1,,,,")
    assert "payment-process,payment,0.6,payment-0001,1,full,1,T2,1,full,monetary,1,full,paymentReceived=1" in lines


def test_reports_are_deterministic(spec, scenario_log):
    result = p_measure(scenario_log, spec)
    for format in ("json", "csv"):
        assert render_report(result, format) == render_report(
            p_measure(scenario_log, spec), format
        )


@pytest.mark.parametrize(
    ("path", "log_format", "report_format"),
    [("a.jsonl", "jsonl", "json"), ("a.CSV", "csv", "csv"), ("a.json", "jsonl", "json")],
)
def test_formats_by_suffix(path, log_format, report_format):
    assert log_format_of(path) == log_format
    assert report_format_of(path) == report_format


def test_read_spec_skips_validation(data_dir):
    spec = read_spec(data_dir / "non_monotone.spec.json")
    assert spec.spec_id == "non-monotone"
