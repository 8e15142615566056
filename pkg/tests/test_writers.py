import json

import pytest
import xmltodict

from tazrp_tetra.models import Failure, OutputFormat, Report, SteadyStateRow
from tazrp_tetra.writers import (
    CsvWriter, JsonWriter, TextWriter, XmlWriter, writer_for,
)

ROWS = [
    SteadyStateRow(config='0,0|0,0|2,1', probability=3),
    SteadyStateRow(config='1,0|1,0|0,1', probability=1),
]
SUMMARY = {'cutoff': '6', 'sum': '4'}


def _failed_report() -> Report:
    return Report.build(
        'r-properties', {'max_index': 1},
        [Failure.of(['involution', 1, 0], 1, 3)], 9, 0.0,
    )


def test_writer_for():
    assert isinstance(writer_for(OutputFormat.csv), CsvWriter)
    assert isinstance(writer_for('xml'), XmlWriter)
    assert writer_for('json', timing=True).mode == 'full'
    assert writer_for('text').mode == 'stable'
    with pytest.raises(ValueError):
        writer_for('yaml')


def test_text_table():
    lines = TextWriter().write_table(ROWS, SUMMARY).splitlines()
    assert lines[0].split() == ['configuration', 'probability']
    assert lines[2].split() == ['1,0|1,0|0,1', '1']
    assert lines[-2:] == ['cutoff: 6', 'sum: 4']


def test_text_report():
    text = TextWriter().write_report(_failed_report())
    assert 'status: fail' in text
    assert 'FAIL [involution 1 0] expected 1 actual 3 residual 2' in text
    assert 'timing_ms' not in text
    assert 'timing_ms' in TextWriter(timing=True).write_report(
        _failed_report())


def test_json_table_lines():
    lines = JsonWriter().write_table(ROWS, SUMMARY).splitlines()
    assert [json.loads(line) for line in lines] == [
        {'config': '0,0|0,0|2,1', 'probability': 3},
        {'config': '1,0|1,0|0,1', 'probability': 1},
        {'summary': {'cutoff': '6', 'sum': '4'}},
    ]


def test_json_report_is_stable():
    first = JsonWriter().write_report(_failed_report())
    second = JsonWriter().write_report(_failed_report())
    assert first == second
    document = json.loads(first)
    assert document['status'] == 'fail'
    assert document['failures'][0]['residual'] == '2'


def test_csv_outputs():
    table = CsvWriter().write_table(ROWS, SUMMARY).splitlines()
    assert table == [
        'configuration,probability', '"0,0|0,0|2,1",3', '"1,0|1,0|0,1",1',
        'cutoff,6', 'sum,4',
    ]
    report = CsvWriter().write_report(_failed_report()).splitlines()
    assert report[0] == 'suite,location,expected,actual,residual'
    assert report[1] == 'r-properties,involution 1 0,1,3,2'


def test_xml_outputs():
    table = xmltodict.parse(XmlWriter().write_table(ROWS, SUMMARY))
    assert table['SteadyStateTable']['cutoff'] == '6'
    rows = table['SteadyStateTable']['SteadyStateRow']
    assert [row['probability'] for row in rows] == ['3', '1']
    report = xmltodict.parse(XmlWriter().write_report(_failed_report()))
    assert report['Report']['status'] == 'fail'
    assert 'timing_ms' not in report['Report']
