import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from branching import (BranchingError, BranchingExponents, BranchingLaw, MonoidPairE, gelfand_tsetlin_patterns,
                       pattern_weight)
from padic_arith import PadicScalar
from padic_groups import GroupToolkit
from weights import Weight


@pytest.fixture
def law(toolkit):
    return BranchingLaw(toolkit)


def pair(*row, c0=0):
    return MonoidPairE(Weight.from_tau0(len(row) // 2, 1, row, c0))


def test_generators_for_rank_two(law):
    gens = dict(law.generator_set())
    assert list(gens) == ['a0', 'aw', 'a[1,0]', 'a[2,0]', 'a[3,0]']
    assert gens['a0'].kappa.c0 == 1
    assert gens['aw'].kappa.grid == ((0, 0, -1, -1),)
    assert gens['a[2,0]'].kappa.grid == ((0, 1, 0, -1),)
    assert gens['a[3,0]'].kappa.grid == ((0, 1, -1, -1),)


def test_generators_with_extra_embeddings(toolkit_d2):
    labels = [label for label, _ in BranchingLaw(toolkit_d2).generator_set()]
    assert labels[-3:] == ['a[1,1]', 'a[2,1]', 'b[1]']


def test_decompose_example(law):
    exponents = law.decompose_pair(pair(5, 1, -2, -3))
    assert exponents.labelled() == {'a0': 0, 'aw': 2, 'a[1,0]': 5, 'a[2,0]': 1, 'a[3,0]': 0}
    assert law.reconstruct(exponents) == pair(5, 1, -2, -3)


def test_decompose_rejects_pairs_outside_the_monoid(law):
    with pytest.raises(BranchingError):
        law.decompose_pair(pair(5, 1, 2, -3))
    with pytest.raises(BranchingError):
        law.decompose_pair(MonoidPairE(Weight.zero(2, 2)))


def test_rank_one_has_no_generators():
    with pytest.raises(BranchingError):
        BranchingLaw(GroupToolkit(1, 1, 3, 4)).generator_set()


def test_j_length_is_checked():
    with pytest.raises(BranchingError):
        MonoidPairE(Weight.zero(2, 2), (1, 2))


def test_exponents_from_labels():
    exponents = BranchingExponents.from_labelled({'a0': 1, 'aw': 2, 'a[2,1]': 3, 'b[1]': 4})
    assert exponents.a == {(2, 1): 3}
    assert exponents.b == {1: 4}
    assert exponents.to_json()['b[1]'] == 4


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_random_pairs_round_trip(seed):
    law = BranchingLaw(GroupToolkit(2, 2, 3, 6))
    x = law.random_pair(random.Random(seed))
    assert x.is_valid()
    assert law.reconstruct(law.decompose_pair(x)) == x


def test_box_evaluation_at_identity(law):
    one = PadicScalar.from_int(3, 6, 1)
    assert law.eval_branching_vector(pair(5, 1, -2, -3), law.groups.identity(), 1) == one


def test_evaluation_is_multiplicative_in_the_pair(toolkit_d2, rng):
    law = BranchingLaw(toolkit_d2)
    for _ in range(5):
        x, y = law.random_pair(rng), law.random_pair(rng)
        g = toolkit_d2.random_msquare(rng, 1)
        assert law.eval_branching_vector(x + y, g, 1) == \
            law.eval_branching_vector(x, g, 1) * law.eval_branching_vector(y, g, 1)


def test_algebraic_coefficients_recover_the_vector(toolkit_d2, rng):
    law = BranchingLaw(toolkit_d2)
    for _ in range(3):
        x = law.random_pair(rng)
        g = toolkit_d2.random_msquare(rng, 1)
        coeffs = law.algebraic_coefficients(law.decompose_pair(x))
        assert law.eval_family_vector(coeffs, g, 1) == law.eval_branching_vector(x, g, 1)


def test_gelfand_tsetlin_patterns():
    patterns = list(gelfand_tsetlin_patterns((2, 0, 0)))
    assert len(patterns) == 6
    assert pattern_weight([(1, -1), (0,)]) == (0, 0)


@pytest.mark.parametrize('a', [0, 1, 3])
def test_classical_multiplicity(a):
    for j in range(-a - 2, a + 3):
        assert BranchingLaw.classical_multiplicity(a, j) == (1 if abs(j) <= a else 0)


def test_classical_multiplicity_needs_dominant_weight():
    with pytest.raises(BranchingError):
        BranchingLaw.classical_multiplicity(-1, 0)
