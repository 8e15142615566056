from itertools import product

import pytest

from tazrp_tetra.errors import Unstable
from tazrp_tetra.models import LocalState, Sector, parse_configuration
from tazrp_tetra.qscalar import LaurentScalar, monomial
from tazrp_tetra.tazrp import (
    basic_sectors, check_bilinear_X, check_embedding, check_hat_derivative,
    check_hat_relation, check_markov_property, check_oracle,
    check_sector_oracle, check_total_order, is_greater, local_h,
    markov_matrix, mp_probability,
    predecessors, stable_cutoff, staircase_order, steady_state_oracle,
    transitions, x_element, x_operator,
)

z = monomial(z=1)
two_species = Sector(n=2, L=3, multiplicity=(2, 1))


def _z(power, coeff=1):
    return LaurentScalar.from_monomial(monomial(z=power), coeff)


def test_transitions():
    assert transitions((1, 0), (0, 1)) == [((1, 1), (0, 0))]
    assert transitions((0, 0), (2, 1)) == [
        ((1, 0), (1, 1)), ((2, 0), (0, 1)), ((2, 1), (0, 0)),
    ]
    assert transitions((3, 1), (0, 0)) == []
    assert transitions(LocalState.parse('0,1'), LocalState.parse('0,1')) == \
        [((0, 2), (0, 0))]


def test_transitions_reject_mismatched_species():
    with pytest.raises(ValueError):
        transitions((1,), (0, 1))


def test_predecessors():
    found = predecessors((1, 2), (0, 0))
    assert len(found) == 5
    assert ((0, 2), (1, 0)) in found
    assert ((1, 0), (0, 2)) in found
    for pair in found:
        assert ((1, 2), (0, 0)) in transitions(*pair)
    # nothing can have hopped into an empty left site
    assert predecessors((0, 0), (1, 0)) == []


def test_order_and_h():
    assert is_greater(((0, 0), (2, 1)), ((2, 1), (0, 0)))
    assert not is_greater(((2, 1), (0, 0)), ((0, 0), (2, 1)))
    assert local_h((0, 0), (2, 1), (0, 0), (2, 1)) == -3
    assert local_h((0, 0), (2, 1), (2, 0), (0, 1)) == 1
    assert local_h((0, 0), (2, 1), (0, 1), (2, 0)) == 0


def test_total_order():
    assert check_total_order(3, 2).passed


def test_markov_matrix_single_species():
    configs, matrix = markov_matrix(Sector(n=1, L=2, multiplicity=(1,)))
    assert configs == [((0,), (1,)), ((1,), (0,))]
    assert matrix.tolist() == [[-1, 1], [1, -1]]


def test_markov_property():
    assert check_markov_property(two_species).passed
    three = Sector(n=3, L=2, multiplicity=(1, 1, 1))
    assert check_markov_property(three).passed


def test_oracle_example_values():
    table = steady_state_oracle(two_species)
    assert table[parse_configuration('1,0|1,0|0,1')] == 1
    assert table[parse_configuration('0,0|2,0|0,1')] == 2
    assert sum(table.values()) == 30 == two_species.normalization


def test_oracle_single_site():
    sector = Sector(n=2, L=1, multiplicity=(1, 2))
    assert steady_state_oracle(sector) == {((1, 2),): 1}


def test_oracle_rejects_non_basic():
    with pytest.raises(ValueError):
        steady_state_oracle(Sector(n=2, L=3, multiplicity=(2, 0)))


def test_staircase_order():
    assert staircase_order(2) == ((1, 1),)
    assert staircase_order(3) == ((1, 1), (2, 1), (1, 2))
    assert staircase_order(1) == ()


def test_x_single_species():
    assert x_element((3,), (), ()) == _z(3)
    op = x_operator((2,), 4)
    assert op.body.shape == ()
    assert op.drop_bound == 0


@pytest.mark.parametrize('alpha, out, inn, expected', [
    ((1, 0), (2,), (0,), _z(3)),
    ((1, 0), (0,), (0,), _z(1)),
    ((0, 1), (1,), (1,), _z(2)),
    ((0, 1), (2,), (2,), _z(2)),
    ((1, 1), (1,), (1,), _z(3)),
    ((1, 1), (1,), (2,), LaurentScalar()),
    ((1, 0), (1,), (1,), LaurentScalar()),
])
def test_x_two_species(alpha, out, inn, expected):
    assert x_element(alpha, out, inn) == expected


def test_hatted_x():
    assert x_element((1, 0), (2,), (0,), hatted=True) == _z(3, 3)
    assert x_element((0, 0), (0,), (0,), hatted=True).is_zero


def test_hat_derivative():
    assert check_hat_derivative((1, 1), 4).passed
    assert check_hat_derivative((1, 0, 1), 2).passed


@pytest.mark.parametrize('alpha, beta', [
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((1, 1), (0, 1)),
    ((0, 0), (2, 0)),
])
def test_hat_relation_two_species(alpha, beta):
    report = check_hat_relation(alpha, beta, 6)
    assert report.passed
    assert report.checked > 0


def test_hat_relation_three_species():
    assert check_hat_relation((1, 0, 0), (0, 0, 1), 3).passed


@pytest.mark.parametrize('alpha, beta', [((1, 0), (0, 1)), ((0, 1), (1, 1))])
def test_bilinear_X(alpha, beta):
    assert check_bilinear_X(alpha, beta, 6).passed


@pytest.mark.parametrize('r', [0, 1, 2])
def test_embedding_two_species(r):
    assert check_embedding(2, r, 2).passed


@pytest.mark.slow
@pytest.mark.parametrize('r', [0, 1, 2])
def test_embedding_three_species(r):
    assert check_embedding(3, r, 2).passed


def test_mp_probability_example_values():
    assert mp_probability(
        two_species, parse_configuration('1,0|1,0|0,1'), 6) == 1
    assert mp_probability(
        two_species, parse_configuration('0,0|2,0|0,1'), 6) == 2


def test_mp_probability_rejects_foreign_configuration():
    with pytest.raises(ValueError):
        mp_probability(two_species, parse_configuration('1,0|1,0|1,0'), 4)
    with pytest.raises(ValueError):
        mp_probability(two_species, parse_configuration('2,0|0,1'), 4)


def test_stable_cutoff_table():
    cutoff, table = stable_cutoff(two_species)
    assert cutoff >= 6
    assert sum(table.values()) == 30
    assert table == steady_state_oracle(two_species)


def test_stable_cutoff_limit():
    with pytest.raises(Unstable) as info:
        stable_cutoff(two_species, start=4, limit=3)
    assert info.value.cutoff == 3


def test_sector_oracle():
    assert check_sector_oracle(Sector(n=2, L=2, multiplicity=(1, 1))).passed
    assert check_sector_oracle(Sector(n=1, L=3, multiplicity=(2,))).passed


def test_basic_sectors():
    sectors = basic_sectors(2, 2, 3)
    multiplicities = {(s.n, s.L, s.multiplicity) for s in sectors}
    assert (2, 2, (1, 2)) in multiplicities
    assert (2, 1, (2, 1)) in multiplicities
    assert all(s.is_basic for s in sectors)


@pytest.mark.slow
def test_three_species_oracle():
    three = Sector(n=3, L=3, multiplicity=(1, 1, 1))
    assert check_sector_oracle(three).passed


def test_oracle_sweep():
    report = check_oracle(2, 2, 3)
    assert report.passed
    assert report.parameters['extra'] == '0'


def _zero_word_apply(f, e, g, m):
    """(a+)^f k^e (a-)^g |m> at q=0, as an output mode or None."""
    if m < g or (e and m != g):
        return None
    return m - g + f


def _three_species_closed_form(alpha, out, inn, hatted):
    """Summand (a+)^j k^(a1+i-k) (a-)^k (x) (a+)^k k^a2 (a-)^a3
    (x) (a+)^i k^a1 (a-)^(a2+a3), weighted z^(|alpha|+i+j)."""
    a1, a2, a3 = alpha
    i = out[2] - inn[2] + a2 + a3
    k = out[1] - inn[1] + a3
    j = out[0] - inn[0] + k
    if min(i, j, k) < 0 or k > a1 + i:
        return LaurentScalar()
    words = ((j, a1 + i - k, k), (k, a2, a3), (i, a1, a2 + a3))
    for word, m, o in zip(words, inn, out):
        if _zero_word_apply(*word, m) != o:
            return LaurentScalar()
    total = sum(alpha) + i + j
    return _z(total, total if hatted else 1)


@pytest.mark.parametrize('hatted', [False, True])
@pytest.mark.parametrize('alpha', [
    (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1),
    (2, 0, 1),
])
def test_x_three_species_closed_form(alpha, hatted):
    states = list(product(range(3), repeat=3))
    for inn, out in product(states, states):
        assert x_element(alpha, out, inn, hatted=hatted) == \
            _three_species_closed_form(alpha, out, inn, hatted), (inn, out)


def test_x_three_species_lowest_terms():
    # X_{1,0,0}|0,0,0> = sum z^(1+i+j) |j,0,i>
    assert x_element((1, 0, 0), (2, 0, 1), (0, 0, 0)) == _z(4)
    assert x_element((1, 0, 0), (0, 1, 0), (0, 0, 0)).is_zero


def test_mp_probability_is_stable_past_the_cutoff():
    for config in two_species.configurations():
        assert mp_probability(two_species, config, 6) == \
            mp_probability(two_species, config, 8), config
