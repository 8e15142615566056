import pytest

from tazrp_tetra.errors import Unstable
from tazrp_tetra.interface import VerificationInterface
from tazrp_tetra.models import Sector, Settings

two_species = Sector(n=2, L=3, multiplicity=(2, 1))


def test_merged_report_ignores_worker_count():
    serial = VerificationInterface(Settings(workers=1))
    parallel = VerificationInterface(Settings(workers=2))
    first = serial.verify_tetrahedron(max_mode=1)
    second = parallel.verify_tetrahedron(max_mode=1)
    assert first.passed
    assert first.json(mode='stable') == second.json(mode='stable')


def test_mutated_r_properties():
    interface = VerificationInterface()
    assert interface.verify_r_properties(max_index=1).passed
    report = interface.verify_r_properties(max_index=1, mutate=True)
    assert not report.passed
    assert report.parameters['mutate'] == 'True'


def test_markov_suite():
    report = VerificationInterface().verify_markov(max_size=2)
    assert report.passed
    assert report.parameters['m'] == '(2, 1)'


def test_steady_state_with_cross_check():
    rows, summary = VerificationInterface().steady_state(
        two_species, cutoff=6, cross_check=True
    )
    assert summary == {'cutoff': '6', 'sum': '30', 'cross_check': 'pass'}
    assert len(rows) == 18
    probabilities = {row.config: row.probability for row in rows}
    assert probabilities['1,0|1,0|0,1'] == 1


def test_steady_state_sweep_uses_settings():
    interface = VerificationInterface(
        Settings(stability_start=4, stability_limit=3)
    )
    with pytest.raises(Unstable):
        interface.steady_state(two_species)


def test_steady_state_rejects_non_basic_sector():
    with pytest.raises(ValueError):
        VerificationInterface().steady_state(
            Sector(n=2, L=3, multiplicity=(2, 0))
        )


def test_pair_suites_check_species_count():
    interface = VerificationInterface()
    with pytest.raises(ValueError):
        interface.verify_hat_relation(n=3, alpha=(1, 0), beta=(0, 1))
    with pytest.raises(ValueError):
        interface.verify_bilinear_x(n=2, alpha=(1, 0), beta=(0, 0, 1))
