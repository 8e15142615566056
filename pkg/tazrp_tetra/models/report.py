import time
from typing import Dict, Iterable, List, Optional, Sequence

from pydantic import validator

from .base import BaseModel
from .constants import Status


def location_key(location: Sequence[str]) -> tuple:
    """Sort key ordering numeric location components numerically."""
    key = []
    for part in location:
        try:
            key.append((0, int(part), ''))
        except ValueError:
            key.append((1, 0, part))
    return tuple(key)


class Failure(BaseModel):
    location: List[str]
    expected: str
    actual: str
    residual: Optional[str] = None

    @validator('location', pre=True)
    def _listify(cls, value):
        if isinstance(value, (str, int)):
            return [str(value)]
        return [str(part) for part in value]

    @classmethod
    def of(cls, location: Iterable, expected, actual) -> 'Failure':
        try:
            residual = str(actual - expected)
        except TypeError:
            residual = None
        return cls(
            location=[str(part) for part in location],
            expected=str(expected),
            actual=str(actual),
            residual=residual,
        )


class Report(BaseModel):
    suite: str
    parameters: Dict[str, str] = {}
    status: Status = Status.passed
    checked: int = 0
    failures: List[Failure] = []
    timing_ms: float = 0.0

    class XmlTemplate:
        stable = {'exclude': {'timing_ms'}}
        full = {}

    @validator('parameters', pre=True)
    def _parameters(cls, value):
        if value is None:
            return {}
        return {str(k): str(v) for k, v in value.items()}

    @validator('failures', pre=True)
    def _failures(cls, value):
        if value is None:
            return []
        if isinstance(value, dict):
            return [value]
        return value

    @property
    def passed(self) -> bool:
        return self.status == Status.passed

    @classmethod
    def build(
        cls,
        suite: str,
        parameters: Dict,
        failures: List[Failure],
        checked: int,
        started: float,
    ) -> 'Report':
        """Assemble a report; `started` is a `time.perf_counter()` value."""
        return cls(
            suite=suite,
            parameters=parameters,
            status=Status.failed if failures else Status.passed,
            checked=checked,
            failures=sorted(failures, key=lambda f: location_key(f.location)),
            timing_ms=(time.perf_counter() - started) * 1000.0,
        )

    @classmethod
    def merge(
        cls, suite: str, parameters: Dict, reports: Iterable['Report']
    ) -> 'Report':
        reports = list(reports)
        failures = [f for report in reports for f in report.failures]
        return cls(
            suite=suite,
            parameters=parameters,
            status=Status.failed if failures else Status.passed,
            checked=sum(report.checked for report in reports),
            failures=sorted(failures, key=lambda f: location_key(f.location)),
            timing_ms=sum(report.timing_ms for report in reports),
        )


class SteadyStateRow(BaseModel):
    config: str
    probability: int
