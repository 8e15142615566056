import json
from pathlib import Path

import pytest
import xmltodict

from tazrp_tetra.models import (
    Failure, FockSpace, LocalState, QMode, Report, Sector, Settings,
    SteadyStateRow, parse_configuration, render_configuration,
)
from tazrp_tetra.qscalar import QPoly

SCHEMAS = Path(__file__).resolve().parent.parent / 'schemas'

_JSON_TYPES = {
    'string': str, 'integer': int, 'number': (int, float), 'array': list,
    'object': dict, 'null': type(None),
}


def _matches_schema(document: dict, schema: dict) -> bool:
    """Required keys and JSON types of the top-level properties."""
    if any(key not in document for key in schema['required']):
        return False
    for key, value in document.items():
        prop = schema['properties'].get(key)
        if prop is None:
            return False
        types = prop['type'] if isinstance(prop['type'], list) \
            else [prop['type']]
        if not isinstance(value, tuple(_JSON_TYPES[t] for t in types)):
            return False
    return True


def test_sector():
    sector = Sector(n=1, L=3, multiplicity=(2,))
    assert len(sector.configurations()) == 6 == sector.normalization
    assert sector.ell == (2,)
    two = Sector(n=2, L=3, multiplicity=(2, 1))
    assert two.ell == (3, 1)
    assert two.normalization == 30
    assert len(two.configurations()) == 18
    assert not Sector(n=2, L=3, multiplicity=(0, 1)).is_basic


def test_sector_validation():
    with pytest.raises(ValueError):
        Sector(n=2, L=3, multiplicity=(2,))
    with pytest.raises(ValueError):
        Sector(n=1, L=3, multiplicity=(-1,))
    with pytest.raises(ValueError):
        Sector(n=1, L=0, multiplicity=(1,))


def test_configuration_text():
    config = ((1, 0), (1, 0), (0, 1))
    assert render_configuration(config) == '1,0|1,0|0,1'
    assert parse_configuration('1,0|1,0|0,1') == config


def test_local_state():
    state = LocalState.parse('2,0,1')
    assert state.n == 3
    assert state.size == 3
    assert str(state) == '2,0,1'
    with pytest.raises(ValueError):
        LocalState(counts=(1, -1))


def test_fock_space():
    space = FockSpace(cutoff=3, q_mode=QMode.zero)
    assert space.is_zero_mode
    assert space.pairing(2) == 1
    assert space.with_cutoff(5).cutoff == 5
    assert not FockSpace(cutoff=3).is_zero_mode
    with pytest.raises(ValueError):
        FockSpace(cutoff=-1)


def test_failure_residual():
    q = QPoly.monomial(1)
    failure = Failure.of(('weight', 1, 0), 1 - q, 1 + q)
    assert failure.location == ['weight', '1', '0']
    assert failure.residual == '2*q'
    assert Failure.of(['x'], 'comparable', 'incomparable').residual is None


def test_report_merge_is_ordered():
    late = Report.build('oracle', {}, [Failure.of(['10'], 1, 2)], 3, 0.0)
    early = Report.build('oracle', {}, [Failure.of(['9'], 1, 2)], 4, 0.0)
    merged = Report.merge('oracle', {'max_L': 4}, [late, early])
    assert merged.checked == 7
    assert [f.location for f in merged.failures] == [['9'], ['10']]
    assert not merged.passed
    assert merged.parameters == {'max_L': '4'}


def test_report_stable_mode_drops_timing():
    report = Report(suite='markov', status='pass', checked=2, timing_ms=12.5)
    assert 'timing_ms' not in json.loads(report.json(mode='stable'))
    assert json.loads(report.json(mode='full'))['timing_ms'] == 12.5
    document = xmltodict.parse(report.to_xml())
    assert document['Report']['status'] == 'pass'
    assert 'timing_ms' not in document['Report']


def test_report_json_schema():
    schema = json.loads((SCHEMAS / 'report.schema.json').read_text())
    report = Report.build(
        'r-properties', {'max_index': 1}, [Failure.of(['a'], 0, 1)], 1, 0.0,
    )
    document = json.loads(report.json(mode='full'))
    assert _matches_schema(document, schema)
    failure_schema = schema['definitions']['Failure']
    assert _matches_schema(document['failures'][0], failure_schema)


def test_steady_state_row_schema():
    schema = json.loads(
        (SCHEMAS / 'steady_state_row.schema.json').read_text()
    )
    row = SteadyStateRow(config='1,0|1,0|0,1', probability=1)
    assert _matches_schema(json.loads(row.json()), schema)
    assert set(schema['properties']) == set(SteadyStateRow.__fields__)


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv('TAZRP_WORKERS', '3')
    monkeypatch.setenv('TAZRP_STABILITY_LIMIT', '12')
    settings = Settings()
    assert settings.workers == 3
    assert settings.stability_limit == 12
    assert settings.stability_start is None
    assert settings.exploration_bound == 64


def test_steady_state_summary_schema():
    schema = json.loads(
        (SCHEMAS / 'steady_state_summary.schema.json').read_text()
    )
    line = {'summary': {'cutoff': '6', 'sum': '30', 'cross_check': 'pass'}}
    assert _matches_schema(line, schema)
    inner = schema['properties']['summary']
    assert _matches_schema(line['summary'], inner)
    assert not _matches_schema({'sum': '30'}, inner)
