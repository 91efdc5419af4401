import random

import pytest

from flag_geometry import FlagGeometry, FlagPoint, TubeSpec, enumerate_projective_points
from padic_arith import PadicScalar, PrecisionError
from padic_groups import BudgetExceededError, PreconditionError


def test_projective_point_counts():
    assert len(enumerate_projective_points(2, 3)) == 4
    assert len(enumerate_projective_points(3, 2)) == 7
    assert enumerate_projective_points(1, 5) == [(1,)]


def test_flag_point_normalization():
    x = FlagPoint.from_ints(3, 4, [3, 6, 0])
    assert x.normalized().residues == (14, 1, 0)
    assert x.same_point(FlagPoint.from_ints(3, 4, [6, 12, 0]))
    with pytest.raises(PrecisionError):
        FlagPoint.from_ints(3, 4, [0, 0]).normalized()


def test_mixed_contexts_rejected():
    with pytest.raises(ValueError):
        FlagPoint((PadicScalar.from_int(3, 4, 1), PadicScalar.from_int(5, 4, 1)))


def test_iota_hat_examples():
    line = FlagGeometry(1, 1, 3, 4)
    assert line.iota_hat(line.point([1])).residues == (0, 1)

    plane = FlagGeometry(2, 1, 3, 4)
    assert plane.iota_hat(plane.point([1, 0])).residues == (0, 0, 1, 0)
    assert plane.iota_hat(plane.point([0, 1])).residues == (1, 0, 80, 80)


def test_iota_hat_matches_gamma_translate(geometry, rng):
    for _ in range(20):
        assert geometry.verify_iota_hat(geometry.random_h_point(rng, 3))


def test_bruhat_cell(geometry):
    assert geometry.bruhat_cell(geometry.point([3, 1, 9, 1])) == 3
    assert geometry.bruhat_cell(geometry.point([1, 0, 0, 0])) == 0
    assert geometry.bruhat_cell(geometry.point([1, 3, 1, 0])) == 2


@pytest.mark.parametrize('n, p, expected', [(2, 3, 4), (3, 2, 7), (1, 2, 1), (3, 3, 13)])
def test_cell_preimages(n, p, expected):
    result = FlagGeometry(n, 1, p, 4).verify_cell_preimages(1000)
    assert result == {'checked': expected, 'failures': []}


def test_cell_preimages_budget():
    with pytest.raises(BudgetExceededError):
        FlagGeometry(3, 1, 3, 4).verify_cell_preimages(5)


def test_tube_membership():
    line = FlagGeometry(1, 1, 3, 6)
    assert line.tube_member(line.point([3, 1]), TubeSpec(1, 2, 1))
    assert not line.tube_member(line.point([1, 9]), TubeSpec(1, 2, 1))
    assert line.tube_member(line.point([1, 9]), TubeSpec(0, 1, 0))
    with pytest.raises(PrecisionError):
        line.tube_member(line.point([3, 1]), TubeSpec(1, 5, 1))


def test_tube_spec_validation():
    with pytest.raises(ValueError):
        TubeSpec(1, 1, 2)
    with pytest.raises(ValueError):
        TubeSpec(1, 2, 1, side='M')


def test_star_translate_is_right_action(geometry, toolkit, rng):
    for _ in range(10):
        x = geometry.random_h_point(rng, 2)
        x = geometry.iota_hat(x)
        g = toolkit.random_iwahori_G(rng, 1)
        h = toolkit.random_iwahori_G(rng, 1)
        once = geometry.star_translate(x, g * h)
        twice = geometry.star_translate(geometry.star_translate(x, g), h)
        assert once.same_point(twice)


def test_star_translate_by_identity(geometry):
    x = geometry.point([3, 1, 9, 1])
    assert geometry.star_translate(x, geometry.groups.identity()).same_point(x)


def test_hecke_contract():
    plane = FlagGeometry(2, 1, 3, 6)
    image = plane.hecke_contract(plane.point([9, 3, 1, 0]))
    assert (image.residues, image.N) == ((1, 1, 1, 0), 4)


def test_hecke_contract_preconditions():
    plane = FlagGeometry(2, 1, 3, 6)
    with pytest.raises(PreconditionError):
        plane.hecke_contract(plane.point([1, 0, 0, 1]))
    with pytest.raises(PreconditionError):
        plane.hecke_contract(plane.point([1, 0, 1, 0]))
    with pytest.raises(PrecisionError):
        plane.hecke_contract(FlagPoint.from_ints(3, 2, [0, 0, 1, 0]))


def test_contraction_sample():
    line = FlagGeometry(1, 1, 3, 6)
    result = line.contraction_sample(1, 1, 10, random.Random(5))
    assert result['checked'] == 10
    assert result['failures'] == []
    with pytest.raises(ValueError):
        FlagGeometry(2, 1, 3, 8).contraction_sample(2, 1, 1, random.Random(5))


@pytest.mark.parametrize('n, N', [(2, 8), (3, 10)])
def test_contraction_sample_higher_rank(n, N):
    result = FlagGeometry(n, 1, 3, N).contraction_sample(n, n, 20, random.Random(n))
    assert result['checked'] == 20
    assert result['failures'] == []


def test_cartesian_sample(geometry):
    result = geometry.cartesian_sample(1, 0, 3, 5, random.Random(11), 1000)
    assert result['checked'] == 30
    assert result['failures'] == []


def test_cartesian_sample_arguments(geometry, rng):
    with pytest.raises(ValueError):
        geometry.cartesian_sample(2, 3, 4, 1, rng, 100)
    with pytest.raises(PrecisionError):
        geometry.cartesian_sample(1, 0, 6, 1, rng, 100)
    with pytest.raises(BudgetExceededError):
        geometry.cartesian_sample(1, 0, 3, 50, rng, 10)
