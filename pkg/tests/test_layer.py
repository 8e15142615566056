from itertools import product

import pytest

from tazrp_tetra.errors import UnboundedSum
from tazrp_tetra.layer import (
    bbT_apply, bbT_element, check_bilinear, check_f_symmetry,
    check_intertwining, check_q0_layer, commuting_pair_coefficient, f_rst,
    t_apply, t_element, t_fixed, vertex_order,
)
from tazrp_tetra.models import FockSpace, LayerBoundary, QMode
from tazrp_tetra.qscalar import (
    LaurentScalar, QPoly, QRat, chi, chi_prime, monomial, q_factorial,
    q_power,
)

q = QPoly.monomial(1)
z = monomial(z=1)
generic = FockSpace(cutoff=3)
zero = FockSpace(cutoff=3, q_mode=QMode.zero)


def test_vertex_order():
    assert vertex_order(2, 2) == ((1, 1), (2, 1), (1, 2), (2, 2))
    assert vertex_order(1, 3) == ((1, 1), (1, 2), (1, 3))
    assert vertex_order(2, 3)[-1] == (2, 3)


def test_boundary_validation():
    with pytest.raises(ValueError):
        LayerBoundary(m=2, n=1, a=(0,), b=(0,), i=(0, 0), j=(0,))
    free = LayerBoundary(m=1, n=1, b=(0,), i=(0,))
    assert not free.is_fixed
    with pytest.raises(ValueError):
        t_apply(free, (0,), z, generic)


def test_single_vertex_layer():
    boundary = LayerBoundary(m=1, n=1, a=(1,), b=(0,), i=(0,), j=(1,))
    assert t_apply(boundary, (0,), z, generic) == {
        (1,): LaurentScalar.from_monomial(z)
    }
    assert t_element(boundary, (1,), (0,), z, zero) == \
        LaurentScalar.from_monomial(z)
    op = t_fixed(boundary, z, generic)
    assert op.element((3,), (2,)) == LaurentScalar.from_monomial(z)
    assert op.column((3,)) == {}


def test_layer_without_conservation_vanishes():
    boundary = LayerBoundary(m=1, n=2, a=(1,), b=(0, 0), i=(0,), j=(0, 0))
    assert t_apply(boundary, (0, 0), z, generic) == {}


def test_bbT_element_chi_weights():
    expected = LaurentScalar.from_monomial(z, QRat(1 + q, 1 - q))
    assert bbT_element(1, 1, (0,), (0,), (0,), (1,), z, generic) == expected
    assert bbT_element(1, 1, (0,), (0,), (0,), (1,), z, zero) == \
        LaurentScalar.from_monomial(z)
    # the pinned right label would be negative
    assert bbT_element(1, 1, (1,), (0,), (1,), (0,), z, generic).is_zero


def test_bbT_exploration_bound():
    with pytest.raises(UnboundedSum):
        bbT_element(1, 1, (0,), (0,), (0,), (3,), z, generic,
                    exploration_bound=2)


def test_bbT_apply_is_graded():
    vector = bbT_apply(1, 2, (0, 0), (0,), (0, 0), z, generic, 2)
    assert set(vector) == {(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)}
    assert vector[(0, 0)] == LaurentScalar.constant(1)


@pytest.mark.parametrize('r, s, t, expected', [
    (1, 1, 1, QRat(1 + q, (1 - q) * (1 - q))),
    (2, 1, 4, QRat(0)),
    (1, 0, 0, QRat(1, 1 - q)),
    (0, 0, 0, QRat(1)),
])
def test_f_rst(r, s, t, expected):
    assert f_rst(r, s, t) == expected


def test_f_rst_symmetry():
    assert f_rst(3, 1, 2) == f_rst(1, 3, 2)
    # (1 - q^s) f(r-1, s, t) = (1 - q^r) f(s-1, r, t) at r=2, s=3, t=2
    assert (1 - q ** 3) * f_rst(1, 3, 2) == (1 - q ** 2) * f_rst(2, 2, 2)
    assert f_rst(1, 1, 0) == QRat(1, q_factorial(1) * q_factorial(1))


@pytest.mark.parametrize('r, s, t', [(1, 1, 1), (2, 1, 1), (1, 2, 2),
                                     (2, 2, 3)])
def test_commuting_pair_coefficient(r, s, t):
    assert commuting_pair_coefficient(r, s, t) == \
        chi_prime(r) * chi_prime(s) * f_rst(r, s, t)


def test_f_symmetry_suite():
    report = check_f_symmetry(3)
    assert report.passed
    assert report.parameters == {'max': '3'}


def test_bilinear_generic():
    report = check_bilinear(1, 1, (1,), (0,), 2, generic)
    assert report.passed
    assert report.checked > 0


def test_bilinear_zero_mode():
    space = FockSpace(cutoff=2, q_mode=QMode.zero)
    assert check_bilinear(1, 2, (0, 1), (0,), 2, space).passed


def test_bilinear_shape_check():
    with pytest.raises(ValueError):
        check_bilinear(1, 2, (0,), (0,), 2, generic)


def test_intertwining():
    report = check_intertwining(1, 1, 1)
    assert report.passed
    assert report.checked > 0


def test_q0_layer_rectangular():
    assert check_q0_layer(1, 2, 1, 2).passed


@pytest.mark.slow
def test_q0_layer_square():
    assert check_q0_layer(2, 2, 1, 2, max_r=1).passed


def _plain_weight(m_in, m_out):
    """<m_out| (a+)^j2 k^j1 (x) (a+)^j1 |m_in> summand of TT^{0,0}_0."""
    j2, j1 = m_out[0] - m_in[0], m_out[1] - m_in[1]
    if min(j1, j2) < 0:
        return LaurentScalar()
    coefficient = (
        chi_prime(j1 + j2) * chi(j1) * chi(j2) * q_power(j1 * m_in[0])
    )
    return LaurentScalar.from_monomial(monomial(z=j1 + j2), coefficient)


def _raised_weight(m_in, m_out):
    """The same for TT^{1,0}_0, whose summand is (a+)^j2 k^(j1-1) (x)
    (a+)^(j1-1) k with prefactor -z^-1 (1+q) q."""
    j2, j1 = m_out[0] - m_in[0], m_out[1] - m_in[1] + 1
    if j2 < 0 or j1 < 1:
        return LaurentScalar()
    coefficient = (
        QRat((1 + q) * (q ** (2 * j1) - 1), 1 - q ** 2)
        * q_power(1 + m_in[1] + (j1 - 1) * m_in[0])
        * chi_prime(j1 + j2 - 1) * chi(j1) * chi(j2)
    )
    return LaurentScalar.from_monomial(monomial(z=j1 + j2 - 1), coefficient)


@pytest.mark.parametrize('b, closed_form', [
    ((0, 0), _plain_weight),
    ((1, 0), _raised_weight),
])
def test_bbT_row_closed_forms(b, closed_form):
    states = list(product(range(3), repeat=2))
    for m_in, m_out in product(states, states):
        assert bbT_element(1, 2, b, (0,), m_in, m_out, z, generic) == \
            closed_form(m_in, m_out), (m_in, m_out)


def test_bbT_raised_row_lowest_term():
    # only j1 = 1, j2 = 0 reaches |0,0>
    assert bbT_element(1, 2, (1, 0), (0,), (0, 0), (0, 0), z, generic) == \
        LaurentScalar.constant(QRat(-q * (1 + q), 1 - q))


def test_row_layer_fixed_boundary():
    # the left bottom label is carried to the right edge by k
    carried = t_fixed(
        LayerBoundary(m=1, n=2, a=(1,), b=(0, 0), i=(0,), j=(1, 0)),
        z, generic,
    )
    assert carried.column((1, 0)) == {
        (1, 1): LaurentScalar.from_monomial(z, q)}
    assert carried.element((2, 3), (2, 2)) == \
        LaurentScalar.from_monomial(z, q ** 2)
    # |m, 4> lies outside the truncation
    assert carried.column((0, 3)) == {}
    direct = t_fixed(
        LayerBoundary(m=1, n=2, a=(1,), b=(0, 0), i=(0,), j=(0, 1)),
        z, generic,
    )
    assert direct.column((0, 2)) == {(1, 2): LaurentScalar.from_monomial(z)}
    assert direct.element((3, 0), (2, 0)) == \
        LaurentScalar.from_monomial(z)


def test_row_layer_commuting_family():
    report = check_bilinear(1, 2, (0, 0), (0,), 3, generic)
    assert report.passed
    assert report.checked == 100


@pytest.mark.slow
def test_row_layer_intertwining():
    report = check_intertwining(1, 2, 1)
    assert report.passed
    assert report.checked > 0
