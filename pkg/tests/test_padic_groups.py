import pytest

from padic_arith import PrecisionError
from padic_groups import (GroupElement, GroupToolkit, PivotError, PreconditionError, SingularMatrixError,
                          SubgroupMembershipError, SubgroupSpec, antidiagonal, identity, lu_factor, mat_add, mat_det,
                          mat_inv, mat_mul, transpose)

Q = 3 ** 6


def is_upper(a):
    return all(a[i][j] == 0 for i in range(len(a)) for j in range(i))


def congruent_to_one(a, modulus):
    one = identity(len(a))
    return all((a[i][j] - one[i][j]) % modulus == 0 for i in range(len(a)) for j in range(len(a)))


class TestMatrixHelpers:
    def test_inverse(self):
        a = ((2, 3, 0), (1, 1, 0), (5, 0, 1))
        assert mat_mul(a, mat_inv(a, 3, Q), Q) == identity(3)

    def test_singular_inverse(self):
        with pytest.raises(SingularMatrixError):
            mat_inv(((3, 0), (0, 1)), 3, Q)

    def test_lu_factor(self):
        a = ((1, 4, 2), (3, 5, 7), (6, 1, 9))
        lower, upper = lu_factor(a, 3, Q)
        assert mat_mul(lower, upper, Q) == a
        assert all(lower[i][i] == 1 for i in range(3))
        assert all(upper[i][j] == 0 for i in range(3) for j in range(i))

    def test_lu_needs_unit_pivots(self):
        with pytest.raises(PivotError):
            lu_factor(((0, 1), (1, 0)), 3, Q)

    def test_determinant(self):
        assert mat_det(((2, 1), (1, 1)), Q) == 1
        assert mat_det(((0, 1), (1, 0)), Q) == Q - 1


class TestDistinguishedElements:
    def test_u_is_lower_unipotent(self, toolkit):
        head = toolkit.u.blocks[0]
        assert head[3][1] == 1
        assert all(head[i][j] == 0 for i in range(4) for j in range(i + 1, 4))

    def test_gamma_projects_to_u(self, toolkit_d2):
        assert toolkit_d2.gamma.levi_projection() == toolkit_d2.u

    def test_w_n_moves_first_coordinate(self, toolkit):
        assert toolkit.w_n.blocks[0][0] == (0, 0, 1, 0)
        assert toolkit.gamma_hat == toolkit.gamma * toolkit.w_n

    def test_element_arithmetic(self, toolkit_d2, rng):
        g = toolkit_d2.random_iwahori_G(rng, 1)
        assert (g * g.inverse()).is_identity()
        assert GroupElement.from_json(g.to_json()) == g


class TestSubgroups:
    def test_parse(self):
        spec = SubgroupSpec.parse("Msquare(2)")
        assert (spec.kind, spec.depth) == ('Msquare', 2)
        assert str(SubgroupSpec.parse("BorelLevi")) == 'BorelLevi'
        with pytest.raises(ValueError):
            SubgroupSpec.parse("Parahoric(1)")

    def test_identity_is_everywhere(self, toolkit):
        for kind in ('IwahoriG', 'IwahoriH', 'DiamondH', 'G1kk', 'Msquare', 'Mclub', 'Mdiamond', 'BorelLevi'):
            assert toolkit.subgroup_member(toolkit.identity(), SubgroupSpec(kind, 1))

    def test_depth_beyond_precision(self, toolkit):
        with pytest.raises(PrecisionError):
            toolkit.subgroup_member(toolkit.identity(), SubgroupSpec('IwahoriG', 6))

    def test_depth_zero_needs_unit_determinant(self, toolkit):
        singular = toolkit.element([[[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]])
        assert not toolkit.subgroup_member(singular, SubgroupSpec('IwahoriG', 0))
        assert not toolkit.subgroup_member(singular, SubgroupSpec('IwahoriH', 0))
        folded = toolkit.element([[[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]])
        assert not toolkit.subgroup_member(folded, SubgroupSpec('Msquare', 0))
        invertible = toolkit.element([[[1, 1, 0, 0], [2, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]])
        assert toolkit.subgroup_member(invertible, SubgroupSpec('IwahoriG', 0))

    def test_diamond_torus(self):
        groups = GroupToolkit(2, 1, 5, 4)
        distinct = groups.element([[[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]]])
        scalar = groups.element([[[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]])
        assert not groups.subgroup_member(distinct, SubgroupSpec('DiamondH', 1))
        assert groups.subgroup_member(scalar, SubgroupSpec('DiamondH', 1))
        assert groups.subgroup_member(scalar, SubgroupSpec('Mdiamond', 1))

    def test_samplers_land_in_their_subgroups(self, toolkit_d2, rng):
        for _ in range(10):
            assert toolkit_d2.subgroup_member(toolkit_d2.random_borel_levi(rng), SubgroupSpec('BorelLevi'))
            assert toolkit_d2.subgroup_member(toolkit_d2.random_msquare(rng, 2), SubgroupSpec('Msquare', 2))
            assert toolkit_d2.subgroup_member(toolkit_d2.random_mclub(rng, 1), SubgroupSpec('Mclub', 1))
            assert toolkit_d2.subgroup_member(toolkit_d2.random_mclub(rng, 1, diamond=True),
                                              SubgroupSpec('Mdiamond', 1))
            assert toolkit_d2.subgroup_member(toolkit_d2.random_iwahori_G(rng, 2), SubgroupSpec('IwahoriG', 2))

    def test_diamond_sampler(self, toolkit, rng):
        for _ in range(10):
            h = toolkit.random_diamond_H(rng, 2)
            assert toolkit.subgroup_member(h, SubgroupSpec('DiamondH', 2))
            assert toolkit.subgroup_member(h, SubgroupSpec('IwahoriH', 2))

    def test_require_member(self, toolkit):
        swap = toolkit.weyl_representative(1)
        with pytest.raises(SubgroupMembershipError):
            toolkit.require_member(swap, SubgroupSpec('IwahoriG', 1))


class TestFactorizations:
    def test_iwahori_factor_examples(self, small_toolkit):
        upper = ((1, 9), (0, 1))
        assert small_toolkit.iwahori_factor(upper, 1) == (upper, identity(2))
        diagonal = ((1, 0), (0, 10))
        assert small_toolkit.iwahori_factor(diagonal, 1) == (identity(2), diagonal)

    def test_iwahori_factor_precondition(self, small_toolkit):
        with pytest.raises(PreconditionError):
            small_toolkit.iwahori_factor(((1, 1), (0, 1)), 1)

    def test_xi_factor_examples(self, small_toolkit):
        R, S = small_toolkit.xi_factor(((9, 0), (0, 0)), 1)
        assert (R, S) == (((1, 9), (0, 1)), identity(2))
        R, S = small_toolkit.xi_factor(((0, 0), (9, 0)), 1)
        assert (R, S) == (identity(2), ((10, 0), (0, 1)))

    def test_xi_factor_depth(self, small_toolkit):
        with pytest.raises(PreconditionError):
            small_toolkit.xi_factor(((3, 0), (0, 0)), 1)
        R, S = small_toolkit.xi_factor(((3, 0), (0, 0)), 1, closed=True)
        xi = ((0, 1), (1, 0))
        assert mat_mul(mat_mul(R, xi, 81), S, 81) == ((3, 1), (1, 0))

    def test_rectangular_xi_factor(self, toolkit, rng):
        assert toolkit.xi_rect == ((0,), (1,))
        Y = ((9, ), (18, ))
        R, S = toolkit.xi_factor(Y, 1, 'rect')
        assert mat_mul(mat_mul(R, toolkit.xi_rect, Q), S, Q) == ((9,), (19,))

    @pytest.mark.parametrize('d', [1, 2])
    def test_box_decomposition(self, d, rng):
        groups = GroupToolkit(2, d, 3, 6)
        for r in (1, 2):
            for _ in range(10):
                g = groups.random_msquare(rng, r)
                box = groups.box_decompose(g, r)
                assert groups.twisted(box.h) * box.b == g
                assert groups.subgroup_member(box.h, SubgroupSpec('Mclub', r))
                assert box.h.is_congruent_to_one(r)
                assert groups.subgroup_member(box.b, SubgroupSpec('BorelLevi'))

    def test_box_of_borel_element(self, toolkit_d2, rng):
        b = toolkit_d2.random_borel_levi(rng)
        box = toolkit_d2.box_decompose(b, 1)
        assert box.h.is_identity()
        assert box.b == b

    @pytest.mark.parametrize('p, N, r', [(3, 6, 1), (5, 4, 1), (3, 6, 2)])
    @pytest.mark.parametrize('size', [1, 2, 3, 4, 5])
    def test_square_factorizations_reconstruct(self, p, N, r, size, rng):
        groups = GroupToolkit(1, 1, p, N)
        q, modulus = p ** N, p ** r
        xi = antidiagonal(size)
        for _ in range(5):
            M = mat_add(identity(size), groups.random_congruence_matrix(rng, size, r), q)
            R, S = groups.iwahori_factor(M, r)
            assert mat_mul(R, S, q) == M
            assert is_upper(R) and is_upper(transpose(S))
            assert all(R[i][i] == 1 for i in range(size))
            assert congruent_to_one(R, modulus) and congruent_to_one(S, modulus)

            Y = groups.random_congruence_matrix(rng, size, r + 1)
            R, S = groups.xi_factor(Y, r)
            assert mat_mul(mat_mul(R, xi, q), S, q) == mat_add(xi, Y, q)
            assert is_upper(R) and is_upper(S)
            assert congruent_to_one(R, modulus) and congruent_to_one(S, modulus)

    @pytest.mark.parametrize('d', [1, 2])
    def test_box_of_twisted_mclub_element(self, d, rng):
        groups = GroupToolkit(2, d, 3, 6)
        for _ in range(10):
            h = groups.random_mclub(rng, 1)
            box = groups.box_decompose(groups.twisted(h), 1)
            s = box.b
            assert all(block[i][j] == 0 for block in s.blocks for i in range(4) for j in range(4) if i != j)
            assert groups.twisted(s) == s
            assert box.h * s == h

    def test_box_of_club_torus(self, toolkit_d2, rng):
        s = toolkit_d2.random_club_torus(rng)
        box = toolkit_d2.box_decompose(toolkit_d2.twisted(s), 1)
        assert box.h.is_identity()
        assert box.b == s

    def test_box_needs_msquare(self, toolkit):
        with pytest.raises(SubgroupMembershipError):
            toolkit.box_decompose(toolkit.u, 1)


class TestOrbitsAndIndices:
    def test_hand_checked_stabilizers(self, toolkit_d2):
        levi = toolkit_d2.stabilizer_dimension('levi')
        full = toolkit_d2.stabilizer_dimension('full')
        assert (levi['dim_acting'], levi['dim_stab'], levi['dim_flag']) == (15, 6, 9)
        assert (full['dim_acting'], full['dim_stab'], full['dim_flag']) == (17, 5, 12)
        assert levi['open'] and full['open']

    @pytest.mark.parametrize('n', [1, 2, 3])
    @pytest.mark.parametrize('d', [1, 2, 3])
    def test_orbits_are_open(self, n, d):
        groups = GroupToolkit(n, d, 3, 4)
        assert groups.stabilizer_dimension('levi')['open']
        assert groups.stabilizer_dimension('full')['open']

    @pytest.mark.parametrize('p, n, d, expected', [(2, 1, 1, 2), (3, 1, 2, 9)])
    def test_level_index(self, p, n, d, expected):
        result = GroupToolkit(n, d, p, 4).level_index(1, 10000, 'enumeration')
        assert result['count'] == expected
        assert result['formula_value'] == expected
        assert result['match']

    def test_level_index_by_rank(self, toolkit):
        result = toolkit.level_index(3, 10, 'congruence-rank')
        assert result['count'] == 3 ** 6
        assert result['enumeration'] is None

    def test_level_index_precision(self, toolkit):
        with pytest.raises(PrecisionError):
            toolkit.level_index(5, 10)
