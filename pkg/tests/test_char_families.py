import random

import pytest

from char_families import FamilyCharacter, FamilyDecomposer, FamilyError, GeneratorCoefficients
from padic_arith import AnalyticCharacter
from weights import Weight

P, N = 5, 4


@pytest.fixture
def decomposer():
    return FamilyDecomposer(2, 1, P, N)


def same_character(left, right):
    return (left.c0.same_as(right.c0)
            and all(left.alpha[key].same_as(right.alpha[key]) for key in left.alpha)
            and all(left.beta[tau].same_as(right.beta[tau]) for tau in left.beta))


def test_torus_decomposition_reconstructs(decomposer):
    rng = random.Random(3)
    for _ in range(5):
        character = decomposer.random_trivial_on_T0(rng)
        coeffs = decomposer.decompose_family(character)
        assert sorted(coeffs.values) == ['xi[1,0]', 'xi[2,0]']
        assert same_character(decomposer.reconstruct_family(coeffs), character)


def test_pair_decomposition_reconstructs():
    decomposer = FamilyDecomposer(2, 2, P, N)
    rng = random.Random(4)
    for _ in range(5):
        character = decomposer.random_pure(rng)
        coeffs = decomposer.decompose_family_pair(character)
        assert coeffs.kind == 'pair'
        assert same_character(decomposer.reconstruct_family(coeffs), character)


def test_coefficients_evaluate_like_the_character(decomposer):
    rng = random.Random(5)
    character = decomposer.random_trivial_on_T0(rng)
    coeffs = decomposer.decompose_family(character)
    for _ in range(5):
        point = decomposer.random_torus_point(rng)
        assert decomposer.evaluate_coefficients(coeffs, point) == character.evaluate(point)


def test_decomposition_preconditions(decomposer):
    shifted = FamilyCharacter.from_weight(P, N, Weight.from_tau0(2, 1, (3, 1, -1, -2)))
    with pytest.raises(FamilyError):
        decomposer.decompose_family(shifted)
    with pytest.raises(FamilyError):
        FamilyDecomposer(1, 1, P, N).decompose_family_pair(FamilyCharacter.from_weight(P, N, Weight.zero(1, 1)))
    with pytest.raises(FamilyError):
        decomposer.generators('levi')


def test_specialize_algebraic_family(decomposer, lam):
    coeffs = decomposer.decompose_family(FamilyCharacter.from_weight(P, N, lam))
    assert coeffs.values['xi[1,0]'].as_algebraic() == 2
    assert coeffs.values['xi[2,0]'].as_algebraic() == 1
    assert decomposer.specialize_family(coeffs) == (lam, ())


def test_specialize_pair_family(decomposer):
    kappa = Weight.from_tau0(2, 1, (5, 1, -2, -3))
    coeffs = decomposer.decompose_family_pair(FamilyCharacter.from_weight(P, N, kappa))
    assert decomposer.specialize_family(coeffs) == (kappa, ())


def test_specialize_needs_algebraic_coefficients(decomposer):
    twisted = GeneratorCoefficients('torus', {'xi[1,0]': AnalyticCharacter.teichmuller_twist(P, N, 1, 0)})
    with pytest.raises(FamilyError):
        decomposer.specialize_family(twisted)


def test_perturb(decomposer):
    chi = AnalyticCharacter.teichmuller_twist(P, N, 1, 3)
    coeffs = GeneratorCoefficients('torus', {'xi[1,0]': AnalyticCharacter.algebraic(P, N, 2)})
    perturbed = decomposer.perturb(coeffs, 'xi[2,0]', chi)
    assert perturbed.values['xi[2,0]'].same_as(chi)
    assert perturbed.values['xi[1,0]'].same_as(coeffs.values['xi[1,0]'])
    assert 'xi[2,0]' not in coeffs.values


def test_uniqueness_witness(decomposer, lam):
    rng = random.Random(6)
    coeffs = decomposer.decompose_family(FamilyCharacter.from_weight(P, N, lam))
    points = [decomposer.random_torus_point(rng) for _ in range(20)]
    chi = AnalyticCharacter.teichmuller_twist(P, N, 1, 0)
    assert decomposer.uniqueness_witness(coeffs, 'xi[1,0]', chi, points) is not None
    trivial = AnalyticCharacter.trivial(P, N)
    assert decomposer.uniqueness_witness(coeffs, 'xi[1,0]', trivial, points) is None


def test_family_character_json(decomposer):
    character = decomposer.random_pure(random.Random(7))
    restored = FamilyCharacter.from_json(character.to_json())
    assert same_character(restored, character)
