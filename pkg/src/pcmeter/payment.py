"""Invoice payment process used as reference scenario.

Tasks: T1 issue invoice, T2 pay within the grace period, T3 pay with interest,
T4 pay with interest and penalty, T5 terminate the contract, T6 deliver equipment.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
import datetime
from pathlib import Path
import random
from typing import NamedTuple

from pcmeter.io import load_spec
from pcmeter.model import (
    AttributeValue,
    ComplianceSpec,
    Level,
    ProcessLog,
    Quantity,
    Trace,
)

__all__ = (
    "PAYMENT_SPEC",
    "PAYMENT_TASKS",
    "TRACE_CATALOG",
    "PaymentScenario",
    "Payable",
    "TraceCatalog",
    "compute_payable",
    "payment_sequence",
    "payment_spec",
    "scenario_trace",
    "generate_log",
    "random_scenarios",
)

PAYMENT_SPEC: Path = Path(__file__).parent / "data" / "payment.spec.json"

PAYMENT_TASKS: tuple[str, ...] = ("T2", "T3", "T4")


@dataclass(frozen=True, slots=True)
class PaymentScenario:
    principal: float
    pay_in_days: int
    equipment_delivery_days: int = 2
    interest_rate_per_day: float = 0.03
    penalty_rate_per_day: float = 0.025
    grace_days: int = 15
    interest_window_days: int = 7
    penalty_window_days: int = 10
    invoice_date: datetime.date = datetime.date(2019, 4, 1)

    def __post_init__(self) -> None:
        if self.principal < 0:
            raise ValueError(f"Principal must be non-negative, got {self.principal}.")
        if self.pay_in_days < 0 or self.equipment_delivery_days < 0:
            raise ValueError("Day counts must be non-negative.")
        if self.interest_rate_per_day < 0 or self.penalty_rate_per_day < 0:
            raise ValueError("Daily rates must be non-negative.")
        if min(self.grace_days, self.interest_window_days, self.penalty_window_days) <= 0:
            raise ValueError("Payment windows must be positive.")

    @property
    def interest_deadline(self) -> int:
        return self.grace_days + self.interest_window_days

    @property
    def penalty_deadline(self) -> int:
        return self.interest_deadline + self.penalty_window_days


class Payable(NamedTuple):
    amount: float
    interest: float
    penalty: float
    terminated: bool


def compute_payable(scenario: PaymentScenario) -> Payable:
    """Amount due on the day of payment.

    Interest accrues daily after the grace period, the penalty after the
    interest window. Past the penalty window the contract is terminated and
    the amount is the obligation accrued up to the last day of that window.
    """
    principal = scenario.principal
    terminated = scenario.pay_in_days > scenario.penalty_deadline
    accrual_day = min(scenario.pay_in_days, scenario.penalty_deadline)

    interest = (
        scenario.interest_rate_per_day
        * principal
        * max(0, accrual_day - scenario.grace_days)
    )
    penalty = (
        scenario.penalty_rate_per_day
        * principal
        * max(0, accrual_day - scenario.interest_deadline)
    )
    return Payable(
        amount=principal + interest + penalty,
        interest=interest,
        penalty=penalty,
        terminated=terminated,
    )


@dataclass(frozen=True, slots=True)
class TraceCatalog:
    """Admissible task sequences of the payment process."""

    sequences: tuple[tuple[str, ...], ...]
    _labels: dict[tuple[str, ...], str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "_labels",
            {sequence: f"tau{i}" for i, sequence in enumerate(self.sequences, start=1)},
        )

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[tuple[str, ...]]:
        return iter(self.sequences)

    def __contains__(self, sequence: object) -> bool:
        return isinstance(sequence, Sequence) and tuple(sequence) in self._labels

    def label(self, sequence: Iterable[str]) -> str | None:
        return self._labels.get(tuple(sequence))


TRACE_CATALOG = TraceCatalog(
    sequences=tuple(
        tuple(sequence.split(","))
        for sequence in (
            "T1,T2,T3,T4,T5",
            "T1,T3,T2,T6",
            "T1,T2,T3,T4,T6",
            "T1,T3,T4,T2,T5",
            "T1,T2,T3,T6",
            "T1,T3,T4,T2,T6",
            "T1,T2,T6",
            "T1,T3,T4,T5,T2",
            "T1,T3,T2,T4,T5",
            "T1,T3,T4,T6,T2",
            "T1,T3,T2,T4,T6",
            "T1,T3,T6,T2",
            "T1,T6,T2",
        )
    )
)


def payment_sequence(scenario: PaymentScenario) -> tuple[str, ...]:
    """Task sequence of a scenario: one payment task per elapsed window."""
    days = scenario.pay_in_days
    if days <= scenario.grace_days:
        return ("T1", "T2", "T6")
    if days <= scenario.interest_deadline:
        return ("T1", "T2", "T3", "T6")
    if days <= scenario.penalty_deadline:
        return ("T1", "T2", "T3", "T4", "T6")
    return ("T1", "T2", "T3", "T4", "T5")


def _task_attributes(
    task: str, scenario: PaymentScenario, payable: Payable, settling_task: str | None
) -> list[AttributeValue]:
    match task:
        case "T1":
            return [
                AttributeValue("invoiceValue", Quantity(scenario.principal, "currency")),
                AttributeValue("invoiceDate", scenario.invoice_date),
            ]
        case "T2" | "T3" | "T4":
            interest_rate = 0.0 if task == "T2" else scenario.interest_rate_per_day * 100
            penalty_rate = scenario.penalty_rate_per_day * 100 if task == "T4" else 0.0
            received = payable.amount if task == settling_task else 0.0
            return [
                AttributeValue("payInDays", Quantity(float(scenario.pay_in_days), "days")),
                AttributeValue("paymentReceived", Quantity(received, "currency")),
                AttributeValue("amountDue", Quantity(payable.amount, "currency")),
                AttributeValue("interest", Quantity(interest_rate, "percent")),
                AttributeValue("penalty", Quantity(penalty_rate, "percent")),
            ]
        case "T5":
            return [AttributeValue("contractStatus", Level("terminated"))]
        case "T6":
            return [
                AttributeValue(
                    "equipmentDeliveryDays",
                    Quantity(float(scenario.equipment_delivery_days), "days"),
                )
            ]
        case _:  # pragma: no cover
            assert False, "This should never happen."


def scenario_trace(scenario: PaymentScenario, trace_id: str) -> Trace:
    """Build the trace of a scenario; the last payment task receives the payment."""
    payable = compute_payable(scenario)
    sequence = payment_sequence(scenario)
    settling_task = (
        None
        if payable.terminated
        else [task for task in sequence if task in PAYMENT_TASKS][-1]
    )
    return Trace.from_tasks(
        trace_id,
        ((task, _task_attributes(task, scenario, payable, settling_task)) for task in sequence),
    )


def generate_log(
    scenarios: Iterable[PaymentScenario], process_id: str = "payment"
) -> ProcessLog:
    return ProcessLog(
        process_id=process_id,
        traces=tuple(
            scenario_trace(scenario, f"{process_id}-{i:04d}")
            for i, scenario in enumerate(scenarios, start=1)
        ),
    )


def random_scenarios(count: int, seed: int = 0) -> list[PaymentScenario]:
    rng = random.Random(seed)
    return [
        PaymentScenario(
            principal=float(rng.randint(100, 1000)),
            pay_in_days=rng.randint(1, 40),
            equipment_delivery_days=rng.randint(1, 10),
        )
        for _ in range(count)
    ]


def payment_spec() -> ComplianceSpec:
    return load_spec(PAYMENT_SPEC)
