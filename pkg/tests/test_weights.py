import pytest
from hypothesis import given
import hypothesis.strategies as st

from weights import KostantElement, Weight, WeylCombinatorics, parity_condition


def weight(*row, c0=0):
    return Weight.from_tau0(len(row) // 2, 1, row, c0)


def test_rho_values():
    weyl = WeylCombinatorics(2, 1)
    assert weyl.two_rho.grid == ((3, 1, -1, -3),)
    assert weyl.two_rho_c.grid == ((0, 2, 0, -2),)
    assert weyl.two_rho_nc.grid == ((3, -1, -1, -1),)
    assert weyl.two_rho_c + weyl.two_rho_nc == weyl.two_rho


def test_classify():
    result = weight(0, -1, -2, -3).classify()
    assert result.dominant
    assert result.levi_dominant
    assert not result.trivial_on_T0
    assert weight(3, 1, -1, -3).classify().trivial_on_T0
    assert weight(-5, 1, 0, -1).classify().to_json()['M_G_dominant']


def test_pure_weight_and_monoid():
    kappa = weight(5, 1, -2, -3)
    assert kappa.pure_weight() == -2
    assert kappa.in_monoid_C()
    assert not weight(5, 1, 2, -3).in_monoid_C()


def test_parity():
    assert parity_condition(weight(1, 1, 0, 0))
    assert not parity_condition(weight(1, 0, 0, 0))
    assert parity_condition(weight(1, 0, 0, 0, c0=1))


def test_kostant_shuffle():
    w2 = KostantElement(2, 2)
    assert w2.shuffle((10, 20, 30, 40)) == (30, 10, 20, 40)
    assert w2.unshuffle(w2.shuffle((10, 20, 30, 40))) == (10, 20, 30, 40)
    with pytest.raises(ValueError):
        KostantElement(4, 2)


def test_star_action_example(lam):
    weyl = WeylCombinatorics(2, 1)
    assert weyl.star_action(weyl.kostant(2), lam).grid == ((-3, 4, 2, -3),)
    assert weyl.star_action(weyl.kostant(0), lam) == lam


def test_dual_and_serre_dual(lam):
    weyl = WeylCombinatorics(2, 1)
    assert weyl.dual(weight(5, 1, 0, -2)).grid == ((2, 0, -1, -5),)
    assert weyl.dual(lam) == lam
    kappa = weight(0, 0, 0, 0)
    assert weyl.serre_dual(kappa).grid == ((-3, 1, 1, 1),)


def test_wedge_weights():
    weyl = WeylCombinatorics(2, 1)
    assert weyl.wedge_weight_alpha(0) == Weight.zero(2, 1)
    assert [r.grid for r in weyl.opposite_parabolic_roots()] == [((-1, 1, 0, 0),), ((-1, 0, 1, 0),), ((-1, 0, 0, 1),)]
    assert len(WeylCombinatorics(1, 2).opposite_parabolic_roots()) == 1
    with pytest.raises(ValueError):
        weyl.wedge_weight_alpha(4)


def test_parameter_dictionary_at_zero():
    weyl = WeylCombinatorics(2, 1)
    entries = weyl.parameter_dictionary(Weight.zero(2, 1))
    assert [entry.i for entry in entries] == [0, 1, 2, 3]
    assert entries[0].nu.grid == ((3, -1, -1, -1),)
    assert entries[1].nu.grid == ((1, 1, -1, -1),)


def test_parameter_dictionary_needs_dominance():
    with pytest.raises(ValueError):
        WeylCombinatorics(2, 1).parameter_dictionary(weight(0, 1, 0, 0))


dominant_rows = st.lists(st.integers(-12, 12), min_size=4, max_size=4).map(lambda v: sorted(v, reverse=True))


@given(row=dominant_rows, c0=st.integers(-5, 5))
def test_dictionary_identity(row, c0):
    weyl = WeylCombinatorics(2, 1)
    lam = weight(*row, c0=c0)
    entries = weyl.parameter_dictionary(lam)
    for entry in entries:
        alpha = weyl.wedge_weight_alpha(entry.i)
        assert entry.nu == alpha - weyl.w_M_max(entries[3 - entry.i].kappa)


@given(row=dominant_rows, i=st.integers(0, 3))
def test_unique_dominant_dot_member(row, i):
    weyl = WeylCombinatorics(2, 1)
    lam = weight(*row)
    w = weyl.kostant(i)
    assert weyl.dot_orbit_dominant_members(w, lam) == [weyl.star_action(w, lam)]


@given(row=dominant_rows, i=st.integers(0, 3))
def test_star_action_is_invertible(row, i):
    weyl = WeylCombinatorics(2, 1)
    lam = weight(*row)
    w = weyl.kostant(i)
    assert weyl.inverse_star_action(w, weyl.star_action(w, lam)) == lam


def test_serre_dual_on_torus_levi():
    weyl = WeylCombinatorics(1, 1)
    assert weyl.serre_dual(weight(4, -7)).grid == ((-5, 8),)


@given(row=st.lists(st.integers(-12, 12), min_size=3, max_size=3).map(lambda v: sorted(v, reverse=True)),
       head=st.integers(-12, 12))
def test_serre_dual_is_involution(row, head):
    weyl = WeylCombinatorics(2, 1)
    kappa = weight(head, *row)
    assert weyl.serre_dual(weyl.serre_dual(kappa)) == kappa
