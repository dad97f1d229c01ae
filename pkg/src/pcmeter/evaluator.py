"""ComplianceEvaluator: sync and async evaluation of traces and process logs."""

import asyncio
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import overload

from pcmeter.errors import ComplianceError, EmptyLogError, SpecInvalidError
from pcmeter.metrics import (
    ProcessResult,
    TraceResult,
    assemble_process_result,
    p_measure,
    tau_measure,
)
from pcmeter.model import ComplianceSpec, ProcessLog, Trace
from pcmeter.utils.utils import default_jobs
from pcmeter.validation import errors_of, validate_spec


class ComplianceEvaluator:
    """Evaluates traces and process logs against a ComplianceSpec.

    The class provides both sync and async interfaces. Traces of a process log
    are evaluated concurrently with at most `jobs` workers;
    results are always assembled in log order.
    """

    def __init__(self, spec: ComplianceSpec, jobs: int | None = None) -> None:
        if jobs is not None and jobs < 1:
            raise ValueError(
                "Invalid ComplianceEvaluator configuration: "
                "'jobs' must be a positive integer."
            )
        if errors := errors_of(validate_spec(spec)):
            raise SpecInvalidError(errors)

        self._spec = spec
        self._jobs = jobs or default_jobs()

    @property
    def spec(self) -> ComplianceSpec:
        return self._spec

    @property
    def jobs(self) -> int:
        return self._jobs

    @overload
    def evaluate(self, target: Trace) -> TraceResult: ...

    @overload
    def evaluate(self, target: ProcessLog) -> ProcessResult: ...

    def evaluate(self, target: Trace | ProcessLog) -> TraceResult | ProcessResult:
        match target:
            case Trace():
                return tau_measure(target, self._spec)
            case ProcessLog() if self._jobs == 1:
                return p_measure(target, self._spec)
            case ProcessLog():
                return self._evaluate_log(target)
            case _:  # pragma: no cover
                assert False, "This should never happen."

    @overload
    async def aevaluate(self, target: Trace) -> TraceResult: ...

    @overload
    async def aevaluate(self, target: ProcessLog) -> ProcessResult: ...

    async def aevaluate(self, target: Trace | ProcessLog) -> TraceResult | ProcessResult:
        match target:
            case Trace():
                return await asyncio.to_thread(tau_measure, target, self._spec)
            case ProcessLog():
                return await self._aevaluate_log(target)
            case _:  # pragma: no cover
                assert False, "This should never happen."

    def _evaluate_log(self, log: ProcessLog) -> ProcessResult:
        if not log.traces:
            raise EmptyLogError(f"Process log '{log.process_id}' has no traces.")

        with ThreadPoolExecutor(max_workers=self._jobs) as executor:
            # map yields in log order and re-raises the earliest failure
            trace_results = list(
                executor.map(partial(tau_measure, spec=self._spec), log.traces)
            )

        return assemble_process_result(log, self._spec, trace_results)

    async def _aevaluate_log(self, log: ProcessLog) -> ProcessResult:
        if not log.traces:
            raise EmptyLogError(f"Process log '{log.process_id}' has no traces.")

        semaphore = asyncio.Semaphore(self._jobs)

        async def _evaluate_trace(trace: Trace) -> TraceResult | ComplianceError:
            async with semaphore:
                try:
                    return await asyncio.to_thread(tau_measure, trace, self._spec)
                except ComplianceError as error:
                    return error

        async with asyncio.TaskGroup() as tg:
            tasks = [tg.create_task(_evaluate_trace(trace)) for trace in log.traces]

        trace_results: list[TraceResult] = []
        for outcome in map(asyncio.Task.result, tasks):
            match outcome:
                case ComplianceError():
                    # the earliest failing trace in log order wins
                    raise outcome
                case _:
                    trace_results.append(outcome)

        return assemble_process_result(log, self._spec, trace_results)
