from typing import Dict, List, Optional
import csv
import io
import json

import xmltodict

from .models import OutputFormat, Report, SteadyStateRow


class ReportWriter:
    """Abstract base class that renders verification reports and steady
    state tables for output.
    """
    def __init__(self, timing: bool = False) -> None:
        self.timing = timing

    @property
    def mode(self) -> str:
        return 'full' if self.timing else 'stable'

    def write_report(self, report: Report) -> str:
        """Render a single report

        Args:
            report (Report): merged report of a suite

        Returns:
            str: document to print
        """
        raise NotImplementedError

    def write_table(
        self, rows: List[SteadyStateRow], summary: Dict[str, str]
    ) -> str:
        """Render a steady state table

        Args:
            rows (List[SteadyStateRow]): one row per configuration
            summary (Dict[str, str]): cutoff, sum and cross-check outcome

        Returns:
            str: document to print
        """
        raise NotImplementedError


class TextWriter(ReportWriter):
    def write_report(self, report: Report) -> str:
        lines = [
            f'suite: {report.suite}',
            f'status: {report.status}',
            f'checked: {report.checked}',
        ]
        if report.parameters:
            lines.append('parameters: ' + ' '.join(
                f'{key}={value}' for key, value in report.parameters.items()
            ))
        for failure in report.failures:
            line = (
                f'FAIL [{" ".join(failure.location)}] expected '
                f'{failure.expected} actual {failure.actual}'
            )
            if failure.residual is not None:
                line += f' residual {failure.residual}'
            lines.append(line)
        if self.timing:
            lines.append(f'timing_ms: {report.timing_ms:.1f}')
        return '\n'.join(lines)

    def write_table(
        self, rows: List[SteadyStateRow], summary: Dict[str, str]
    ) -> str:
        width = max([len(row.config) for row in rows] + [13])
        lines = [f'{"configuration":<{width}}  probability']
        lines += [f'{row.config:<{width}}  {row.probability}' for row in rows]
        lines += [f'{key}: {value}' for key, value in summary.items()]
        return '\n'.join(lines)


class JsonWriter(ReportWriter):
    def write_report(self, report: Report) -> str:
        return report.json(mode=self.mode, sort_keys=True)

    def write_table(
        self, rows: List[SteadyStateRow], summary: Dict[str, str]
    ) -> str:
        # one object per configuration, then the summary object
        lines = [row.json(sort_keys=True) for row in rows]
        lines.append(json.dumps({'summary': summary}, sort_keys=True))
        return '\n'.join(lines)


class CsvWriter(ReportWriter):
    def write_report(self, report: Report) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['suite', 'location', 'expected', 'actual',
                         'residual'])
        for failure in report.failures:
            writer.writerow([
                report.suite, ' '.join(failure.location), failure.expected,
                failure.actual, failure.residual or '',
            ])
        return buffer.getvalue().rstrip('\n')

    def write_table(
        self, rows: List[SteadyStateRow], summary: Dict[str, str]
    ) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['configuration', 'probability'])
        for row in rows:
            writer.writerow([row.config, row.probability])
        # summary rows follow, keyed by name
        for key, value in summary.items():
            writer.writerow([key, value])
        return buffer.getvalue().rstrip('\n')


class XmlWriter(ReportWriter):
    def write_report(self, report: Report) -> str:
        return report.to_xml(mode=self.mode, pretty=True)

    def write_table(
        self, rows: List[SteadyStateRow], summary: Dict[str, str]
    ) -> str:
        document = {
            'SteadyStateTable': {
                **summary,
                'SteadyStateRow': [row.dict() for row in rows],
            }
        }
        return xmltodict.unparse(document, full_document=False, pretty=True)


_WRITERS = {
    OutputFormat.text: TextWriter,
    OutputFormat.json: JsonWriter,
    OutputFormat.csv: CsvWriter,
    OutputFormat.xml: XmlWriter,
}


def writer_for(
    output_format: OutputFormat, timing: Optional[bool] = False
) -> ReportWriter:
    return _WRITERS[OutputFormat(output_format)](timing=bool(timing))
