from itertools import product

import pytest

from tazrp_tetra.errors import Divergent, ShapeMismatch
from tazrp_tetra.fock import (
    FockOp, OscWord, dual_generator, normalize_word, osc_generator,
    osc_power, states_up_to, tensor, word_matrix, word_multiply,
    word_trace_zero,
)
from tazrp_tetra.models import FockSpace, Generator, QMode
from tazrp_tetra.qscalar import LaurentScalar, ONE, q_power

zero_space = FockSpace(cutoff=4, q_mode=QMode.zero)
generic_space = FockSpace(cutoff=4)


def _total(words, space):
    total = FockOp.zero((space.cutoff,), space.q_mode)
    for word in words:
        total = total + word_matrix(word, space)
    return total


def test_states_up_to():
    assert states_up_to(2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert states_up_to(0, 3) == [()]
    assert len(states_up_to(6, 3)) == 84


def test_generic_generators():
    a_plus = osc_generator(Generator.a_plus, generic_space)
    a_minus = osc_generator(Generator.a_minus, generic_space)
    k = osc_generator(Generator.k, generic_space)
    assert a_plus.element((3,), (2,)) == LaurentScalar.constant(1)
    assert a_plus.column((4,)) == {}
    assert a_minus.element((1,), (2,)) == \
        LaurentScalar.constant(ONE - q_power(4))
    # k a+ = q a+ k
    lhs = k @ a_plus
    rhs = (a_plus @ k).scale(LaurentScalar.constant(q_power(1)))
    assert lhs.differences(rhs) == []
    # a+ a- = 1 - k^2
    one = FockOp.identity((4,))
    assert (a_plus @ a_minus).differences(one - k @ k) == []


def test_zero_mode_generators():
    a_plus = osc_generator(Generator.a_plus, zero_space)
    a_minus = osc_generator(Generator.a_minus, zero_space)
    k = osc_generator(Generator.k, zero_space)
    one = FockOp.identity((4,), QMode.zero)
    assert (a_plus @ a_minus).differences(one - k) == []
    assert (k @ a_plus).is_zero
    assert (a_minus @ k).is_zero
    safe = a_minus @ a_plus
    assert all(
        safe.element((m,), (m,)) == LaurentScalar.constant(1)
        for m in range(4)
    )


def test_dual_generator_pairs_with_ket_action():
    # <2| a+ = (1 - q^4) <1|
    bra = dual_generator(Generator.a_plus, generic_space)
    assert bra.element((1,), (2,)) == LaurentScalar.constant(ONE - q_power(4))


@pytest.mark.parametrize('f, g', [(2, 1), (1, 3), (3, 3), (1, 1)])
def test_normal_form(f, g):
    words = normalize_word(f, 0, g, LaurentScalar.constant(1))
    assert len(words) == min(f, g) + 1
    assert all(w.e == 1 or min(w.f, w.g) == 0 for w in words)
    assert word_matrix(OscWord(f, 0, g), zero_space).differences(
        _total(words, zero_space)) == []


def test_word_multiply():
    a_plus, a_minus = OscWord(1, 0, 0), OscWord(0, 0, 1)
    assert [w.key for w in word_multiply(a_minus, a_plus)] == [(0, 0, 0)]
    assert word_multiply(OscWord(0, 1, 0), a_plus) == []
    assert word_multiply(a_minus, OscWord(0, 1, 0)) == []
    assert [w.key for w in word_multiply(a_plus, a_minus)] == \
        [(0, 0, 0), (0, 1, 0)]


def test_word_trace():
    assert word_trace_zero(OscWord(2, 1, 2)) == LaurentScalar.constant(1)
    assert word_trace_zero(OscWord(2, 1, 1)).is_zero
    with pytest.raises(Divergent):
        word_trace_zero(OscWord(1, 0, 1))
    with pytest.raises(ValueError):
        OscWord(1, 2, 0)


def test_tensor_and_partial_trace():
    k = osc_generator(Generator.k, zero_space)
    a_plus = osc_generator(Generator.a_plus, zero_space)
    op = tensor([k, a_plus])
    assert op.shape == (4, 4)
    assert op.element((0, 2), (0, 1)) == LaurentScalar.constant(1)
    assert op.element((1, 2), (1, 1)).is_zero
    # Tr_1 (k x a+) = Tr(k) a+ = a+
    assert op.partial_trace([0]).differences(a_plus) == []
    assert tensor([k, k]).full_trace() == LaurentScalar.constant(1)


def test_transpose():
    a_plus = osc_power(Generator.a_plus, 2, zero_space)
    assert a_plus.transpose().element((0,), (2,)) == \
        LaurentScalar.constant(1)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        FockOp.identity((2,)) @ FockOp.identity((2, 2))
    with pytest.raises(ShapeMismatch):
        FockOp.identity((2,)).apply({(0, 0): LaurentScalar.constant(1)})


def test_trace_needs_zero_mode():
    with pytest.raises(ValueError):
        FockOp.identity((2,)).full_trace()


@pytest.mark.parametrize('space', [generic_space, zero_space])
@pytest.mark.parametrize('gen', list(Generator))
def test_bra_and_ket_actions_pair(space, gen):
    # (<m| X) |n> = <m| (X |n>)
    bra, ket = dual_generator(gen, space), osc_generator(gen, space)
    for m, n in product(range(space.cutoff + 1), repeat=2):
        left = bra.element((n,), (m,)) * LaurentScalar.constant(
            space.pairing(n))
        right = ket.element((m,), (n,)) * LaurentScalar.constant(
            space.pairing(m))
        assert left == right, (gen, m, n)


def test_word_multiply_matches_composition():
    space = FockSpace(cutoff=6, q_mode=QMode.zero)
    words = [OscWord(f, e, g)
             for f, e, g in product(range(4), range(2), range(4))]
    for w1, w2 in product(words, words):
        expected = word_matrix(w1, space) @ word_matrix(w2, space)
        assert expected.differences(
            _total(word_multiply(w1, w2), space)) == [], (w1.key, w2.key)


def test_word_multiply_term_count():
    # (a+)^2 (a-)^2 = 1 - k - a+ k a-
    words = word_multiply(OscWord(2, 0, 0), OscWord(0, 0, 2))
    assert len(words) == 3
    assert sorted(w.key for w in words) == [(0, 0, 0), (0, 1, 0), (1, 1, 1)]
    assert len(word_multiply(OscWord(0, 0, 1), OscWord(1, 0, 0))) == 1
