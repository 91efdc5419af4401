import itertools
import logging
import random
import re
from dataclasses import dataclass
from functools import reduce
from math import lcm
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from sympy import Matrix
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from padic_arith import PrecisionError, int_valuation

Matrix_ = Tuple[Tuple[int, ...], ...]


class GroupError(ValueError):
    pass


class PivotError(GroupError):
    pass


class SubgroupMembershipError(GroupError):
    pass


class PreconditionError(GroupError):
    pass


class SingularMatrixError(GroupError):
    pass


class BudgetExceededError(RuntimeError):
    pass


# residue matrices: tuples of tuples of ints reduced mod q = p^N

def identity(k: int) -> Matrix_:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def zeros(rows: int, cols: int) -> Matrix_:
    return tuple((0,) * cols for _ in range(rows))


def reduce_matrix(rows: Sequence[Sequence[int]], q: int) -> Matrix_:
    return tuple(tuple(int(v) % q for v in row) for row in rows)


def transpose(a: Matrix_) -> Matrix_:
    return tuple(zip(*a)) if a else a


def mat_mul(a: Matrix_, b: Matrix_, q: int) -> Matrix_:
    product = np.dot(np.array(a, dtype=object), np.array(b, dtype=object)) % q
    return tuple(tuple(int(v) for v in row) for row in product)


def mat_add(a: Matrix_, b: Matrix_, q: int) -> Matrix_:
    return tuple(tuple((x + y) % q for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix_, b: Matrix_, q: int) -> Matrix_:
    return tuple(tuple((x - y) % q for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix_, c: int, q: int) -> Matrix_:
    return tuple(tuple((c * x) % q for x in row) for row in a)


def mat_inv(a: Matrix_, p: int, q: int) -> Matrix_:
    try:
        inverse = Matrix(a).inv_mod(q)
    except ValueError:
        raise SingularMatrixError(f"matrix is not invertible mod {p}")
    return tuple(tuple(int(inverse[i, j]) for j in range(len(a))) for i in range(len(a)))


def mat_det(a: Matrix_, q: int) -> int:
    if not a:
        return 1
    return int(Matrix(a).det(method='bareiss')) % q


def lu_factor(a: Matrix_, p: int, q: int) -> Tuple[Matrix_, Matrix_]:
    """Doolittle a = L U with L unit lower and U upper; no row exchanges."""
    size = len(a)
    lower = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    upper = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            upper[i][j] = (a[i][j] - sum(lower[i][k] * upper[k][j] for k in range(i))) % q
        if upper[i][i] % p == 0:
            raise PivotError(f"pivot {i} is not a unit mod {p}")
        inv = pow(upper[i][i], -1, q)
        for j in range(i + 1, size):
            lower[j][i] = ((a[j][i] - sum(lower[j][k] * upper[k][i] for k in range(i))) * inv) % q
    return tuple(map(tuple, lower)), tuple(map(tuple, upper))


def block_diag(*blocks: Matrix_) -> Matrix_:
    size = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (size - offset - len(row)))
        offset += len(b)
    return tuple(rows)


def sub_matrix(a: Matrix_, rows: range, cols: range) -> Matrix_:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def antidiagonal(k: int) -> Matrix_:
    return tuple(tuple(1 if i + j == k - 1 else 0 for j in range(k)) for i in range(k))


def min_valuation(a: Matrix_, p: int, cap: int) -> int:
    values = [int_valuation(v, p) for row in a for v in row if v]
    return min(values) if values else cap


def is_strictly_lower_zero(a: Matrix_, modulus: int) -> bool:
    return all(a[i][j] % modulus == 0 for i in range(len(a)) for j in range(i))


@dataclass(frozen=True)
class GroupElement:
    """Element (sim; g_tau) of GL1 x prod_tau GL_2n with residue entries mod p^N."""
    n: int
    d: int
    p: int
    N: int
    sim: int
    blocks: Tuple[Matrix_, ...]

    def __post_init__(self):
        size = 2 * self.n
        if len(self.blocks) != self.d or any(len(b) != size or any(len(r) != size for r in b) for b in self.blocks):
            raise ValueError(f"expected {self.d} blocks of size {size}")

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @classmethod
    def build(cls, n: int, d: int, p: int, N: int, blocks: Sequence[Sequence[Sequence[int]]],
              sim: int = 1) -> 'GroupElement':
        q = p ** N
        return cls(n, d, p, N, sim % q, tuple(reduce_matrix(b, q) for b in blocks))

    @classmethod
    def identity(cls, n: int, d: int, p: int, N: int) -> 'GroupElement':
        return cls(n, d, p, N, 1, (identity(2 * n),) * d)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'GroupElement':
        return cls.build(int(data['n']), int(data['d']), int(data['p']), int(data['N']),
                         data['blocks'], int(data.get('sim', 1)))

    def to_json(self) -> Dict[str, Any]:
        return {'p': self.p, 'N': self.N, 'n': self.n, 'd': self.d, 'sim': self.sim,
                'blocks': [[list(row) for row in b] for b in self.blocks]}

    def _same_context(self, other: 'GroupElement'):
        if (self.n, self.d, self.p, self.N) != (other.n, other.d, other.p, other.N):
            raise ValueError("group elements from different contexts")

    def __mul__(self, other: 'GroupElement') -> 'GroupElement':
        self._same_context(other)
        q = self.modulus
        blocks = tuple(mat_mul(a, b, q) for a, b in zip(self.blocks, other.blocks))
        return GroupElement(self.n, self.d, self.p, self.N, (self.sim * other.sim) % q, blocks)

    def inverse(self) -> 'GroupElement':
        if self.sim % self.p == 0:
            raise SingularMatrixError("similitude factor is not a unit")
        q = self.modulus
        blocks = tuple(mat_inv(b, self.p, q) for b in self.blocks)
        return GroupElement(self.n, self.d, self.p, self.N, pow(self.sim, -1, q), blocks)

    def conjugated_by(self, g: 'GroupElement') -> 'GroupElement':
        return g.inverse() * self * g

    def replace_block(self, tau: int, block: Matrix_) -> 'GroupElement':
        blocks = list(self.blocks)
        blocks[tau] = reduce_matrix(block, self.modulus)
        return GroupElement(self.n, self.d, self.p, self.N, self.sim, tuple(blocks))

    def h_blocks(self, tau: int) -> Tuple[Matrix_, Matrix_]:
        n = self.n
        block = self.blocks[tau]
        return sub_matrix(block, range(n), range(n)), sub_matrix(block, range(n, 2 * n), range(n, 2 * n))

    def diagonal(self, tau: int) -> Tuple[int, ...]:
        block = self.blocks[tau]
        return tuple(block[i][i] for i in range(2 * self.n))

    def is_identity(self) -> bool:
        return self == GroupElement.identity(self.n, self.d, self.p, self.N)

    def is_H_shaped(self) -> bool:
        n = self.n
        return all(b[i][j] == 0 for b in self.blocks for i in range(2 * n) for j in range(2 * n)
                   if (i < n) != (j < n))

    def is_MG_shaped(self) -> bool:
        head = self.blocks[0]
        return all(head[0][j] == 0 and head[j][0] == 0 for j in range(1, 2 * self.n))

    def is_MH_shaped(self) -> bool:
        return self.is_H_shaped() and self.is_MG_shaped()

    def has_unit_diagonal(self) -> bool:
        return self.sim % self.p != 0 and all(v % self.p != 0 for tau in range(self.d) for v in self.diagonal(tau))

    def has_unit_determinant(self) -> bool:
        return self.sim % self.p != 0 and all(mat_det(b, self.p) != 0 for b in self.blocks)

    def is_congruent_to_one(self, r: int) -> bool:
        modulus = self.p ** r
        one = identity(2 * self.n)
        return (self.sim - 1) % modulus == 0 and all(
            (b[i][j] - one[i][j]) % modulus == 0 for b in self.blocks for i in range(2 * self.n) for j in range(2 * self.n))

    def levi_projection(self) -> 'GroupElement':
        head = [list(row) for row in self.blocks[0]]
        for j in range(1, 2 * self.n):
            head[0][j] = 0
            head[j][0] = 0
        return self.replace_block(0, head)


SUBGROUP_KINDS = ('IwahoriG', 'IwahoriH', 'DiamondH', 'G1kk', 'Msquare', 'Mclub', 'Mdiamond', 'BorelLevi')


@dataclass(frozen=True)
class SubgroupSpec:
    kind: str
    depth: int = 0

    def __post_init__(self):
        if self.kind not in SUBGROUP_KINDS:
            raise ValueError(f"unknown subgroup kind {self.kind!r}; expected one of {', '.join(SUBGROUP_KINDS)}")
        if self.depth < 0:
            raise ValueError("subgroup depth must be non-negative")

    @classmethod
    def parse(cls, text: str) -> 'SubgroupSpec':
        match = re.fullmatch(r"\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*", text)
        if not match:
            raise ValueError(f"cannot parse subgroup {text!r}")
        return cls(match.group(1), int(match.group(2) or 0))

    def __str__(self):
        return self.kind if self.kind == 'BorelLevi' else f"{self.kind}({self.depth})"


@dataclass
class BoxDecomposition:
    h: GroupElement
    b: GroupElement

    def to_json(self) -> Dict[str, Any]:
        return {'h': self.h.to_json(), 'b': self.b.to_json()}


class GroupToolkit:
    def __init__(self, n: int, d: int, p: int, N: int):
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        self.n = n
        self.d = d
        self.p = p
        self.N = N
        self.q = p ** N
        self.logger = logging.getLogger(__name__)

        self.u = self._build_u()
        self.gamma = self._build_gamma()
        self.w_n = self.weyl_representative(n)
        self.gamma_hat = self.gamma * self.w_n
        self.u_inv = self.u.inverse()
        self.gamma_hat_inv = self.gamma_hat.inverse()
        self.xi_rect = self._rectangular_xi()
        self._stabilizer_cache: Dict[str, List[List[Matrix_]]] = {}

    # distinguished elements

    def _u_blocks(self) -> List[Matrix_]:
        n = self.n
        size = 2 * n
        head = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
        # lower unipotent u' inside GL_{2n-1}: extra 1s at (i, 2n-i) for n < i < 2n
        for i in range(n + 1, 2 * n):
            head[i][2 * n - i] = 1
        other = block_diag(identity(n), identity(n))
        other = [list(row) for row in other]
        for i in range(n):
            other[n + i][n - 1 - i] = 1
        return [tuple(map(tuple, head))] + [tuple(map(tuple, other))] * (self.d - 1)

    def _build_u(self) -> GroupElement:
        return GroupElement.build(self.n, self.d, self.p, self.N, self._u_blocks())

    def _build_gamma(self) -> GroupElement:
        n = self.n
        upper = [[1 if i == j else 0 for j in range(2 * n)] for i in range(2 * n)]
        for j in range(1, n + 1):
            upper[0][j] = 1
        blocks = list(self._u_blocks())
        blocks[0] = mat_mul(blocks[0], tuple(map(tuple, upper)), self.q)
        return GroupElement.build(n, self.d, self.p, self.N, blocks)

    def weyl_representative(self, i: int) -> GroupElement:
        """Permutation representative of w_i at tau_0, moving coordinate 0 of a row vector to position i."""
        size = 2 * self.n
        if not 0 <= i < size:
            raise ValueError(f"Weyl index must lie in [0, {size - 1}], got {i}")
        head = [[0] * size for _ in range(size)]
        head[0][i] = 1
        for row in range(1, i + 1):
            head[row][row - 1] = 1
        for row in range(i + 1, size):
            head[row][row] = 1
        blocks = [tuple(map(tuple, head))] + [identity(size)] * (self.d - 1)
        return GroupElement.build(self.n, self.d, self.p, self.N, blocks)

    def distinguished_elements(self) -> Dict[str, GroupElement]:
        return {'u': self.u, 'gamma': self.gamma, 'w_n': self.w_n, 'gamma_hat': self.gamma_hat}

    def element(self, blocks: Sequence[Sequence[Sequence[int]]], sim: int = 1) -> GroupElement:
        return GroupElement.build(self.n, self.d, self.p, self.N, blocks, sim)

    def identity(self) -> GroupElement:
        return GroupElement.identity(self.n, self.d, self.p, self.N)

    # subgroup membership

    def _torus_relations(self, club_only: bool) -> List[Tuple[int, int, int]]:
        """Pairs (tau, i, j) of 0-indexed diagonal positions identified in T^club (or T^diamond)."""
        n = self.n
        relations = [(0, i - 1, 2 * n + 1 - i) for i in range(2, n + 1)]
        for tau in range(1, self.d):
            relations.extend((tau, i, 2 * n - 1 - i) for i in range(n))
        if not club_only:
            relations.append((0, 0, n))
        return relations

    def subgroup_member(self, g: GroupElement, spec: SubgroupSpec) -> bool:
        depth = spec.depth
        if depth >= self.N:
            raise PrecisionError(f"depth {depth} is not below the working precision {self.N}")
        kind = spec.kind
        if not g.has_unit_diagonal() and kind not in ('DiamondH', 'G1kk'):
            return False
        if depth == 0 and kind != 'BorelLevi' and not g.has_unit_determinant():
            return False
        modulus = self.p ** depth
        if kind == 'IwahoriG':
            return all(is_strictly_lower_zero(b, modulus) for b in g.blocks)
        if kind == 'IwahoriH':
            return g.is_H_shaped() and all(is_strictly_lower_zero(b, modulus) for b in g.blocks)
        if kind == 'DiamondH':
            if not g.is_H_shaped():
                return False
            conjugate = self.gamma_hat_inv * g * self.gamma_hat
            return self.subgroup_member(conjugate, SubgroupSpec('IwahoriG', depth))
        if kind == 'G1kk':
            upper_modulus = self.p ** min(depth + 1, self.N)
            return g.is_congruent_to_one(depth) and all(is_strictly_lower_zero(b, upper_modulus) for b in g.blocks)
        if kind == 'BorelLevi':
            return g.is_MG_shaped() and all(is_strictly_lower_zero(b, self.q) for b in g.blocks)
        if kind == 'Msquare':
            return g.is_MG_shaped() and all(is_strictly_lower_zero(b, modulus) for b in g.blocks)
        # Mclub / Mdiamond
        if not g.is_MH_shaped():
            return False
        size = 2 * self.n
        if any(b[i][j] % modulus for b in g.blocks for i in range(size) for j in range(size) if i != j):
            return False
        relations = self._torus_relations(club_only=(kind == 'Mclub'))
        return all((g.blocks[tau][i][i] - g.blocks[tau][j][j]) % modulus == 0 for tau, i, j in relations)

    def require_member(self, g: GroupElement, spec: SubgroupSpec):
        if not self.subgroup_member(g, spec):
            raise SubgroupMembershipError(f"element is not in {spec}")

    # factorizations

    def iwahori_factor(self, M: Matrix_, r: int) -> Tuple[Matrix_, Matrix_]:
        """M = R S with R unipotent upper and S lower triangular, both congruent to 1 mod p^r."""
        if not 1 <= r < self.N:
            raise PreconditionError(f"depth r must satisfy 1 <= r < {self.N}, got {r}")
        size = len(M)
        modulus = self.p ** r
        one = identity(size)
        if any((M[i][j] - one[i][j]) % modulus for i in range(size) for j in range(size)):
            raise PreconditionError(f"matrix is not congruent to 1 mod {self.p}^{r}")
        flip = antidiagonal(size)
        lower, upper = lu_factor(mat_mul(mat_mul(flip, M, self.q), flip, self.q), self.p, self.q)
        R = mat_mul(mat_mul(flip, lower, self.q), flip, self.q)
        S = mat_mul(mat_mul(flip, upper, self.q), flip, self.q)
        return R, S

    def xi_factor(self, Y: Matrix_, r: int, shape: str = 'square', closed: bool = False) -> Tuple[Matrix_, Matrix_]:
        """Factor xi + Y = R xi S with R unipotent upper and S upper Borel, both congruent to 1 mod p^r."""
        if shape not in ('square', 'rect'):
            raise ValueError(f"xi shape must be 'square' or 'rect', got {shape!r}")
        bound = r if closed else r + 1
        if min_valuation(Y, self.p, self.N) < bound:
            raise PreconditionError(f"entries of Y must have valuation >= {bound}")
        Y = reduce_matrix(Y, self.q)
        if shape == 'square':
            xi = antidiagonal(len(Y))
            M = mat_add(identity(len(Y)), mat_mul(Y, xi, self.q), self.q)
            R, S_bar = self.iwahori_factor(M, r)
            return R, mat_mul(mat_mul(xi, S_bar, self.q), xi, self.q)
        rows = len(Y)
        if rows < 2:
            raise PreconditionError("rectangular xi needs at least two rows")
        top = Y[:1]
        R_inner, S = self.xi_factor(Y[1:], r, 'square', closed=True)
        xi_inner = antidiagonal(rows - 1)
        shift = mat_mul(mat_mul(top, mat_inv(S, self.p, self.q), self.q), xi_inner, self.q)
        R = [[1] + list(shift[0])] + [[0] + list(row) for row in R_inner]
        return reduce_matrix(R, self.q), S

    def _rectangular_xi(self) -> Matrix_:
        n = self.n
        if n < 2:
            return ()
        return ((0,) * (n - 1),) + antidiagonal(n - 1)

    def _box_factor(self, block: Matrix_, a: int, xi: Matrix_, r: int, shape: str) -> Tuple[Matrix_, Matrix_]:
        q, p = self.q, self.p
        size = len(block)
        lower, upper = lu_factor(block, p, q)
        x1 = sub_matrix(lower, range(a), range(a))
        x2 = sub_matrix(lower, range(a, size), range(a))
        x3 = sub_matrix(lower, range(a, size), range(a, size))
        Y = mat_sub(mat_mul(mat_inv(x3, p, q), mat_add(mat_mul(xi, x1, q), x2, q), q), xi, q)
        R, S = self.xi_factor(Y, r, shape, closed=True)
        h = block_diag(mat_mul(x1, mat_inv(S, p, q), q), mat_mul(x3, R, q))
        b = mat_mul(block_diag(S, mat_inv(R, p, q)), upper, q)
        return h, b

    def box_decompose(self, g: GroupElement, r: int) -> BoxDecomposition:
        """g = u^-1 h u b with h in M^club_{H,r} (in fact congruent to 1 mod p^r) and b in the Borel of M_G.

        The pair is unique up to (h s, s^-1 b) with s in T^club. The torus part always goes to b, so
        twisted M^club inputs come back as (h s^-1, s) rather than (h, 1).
        """
        if r < 1:
            raise PreconditionError("box decomposition needs r >= 1")
        self.require_member(g, SubgroupSpec('Msquare', r))
        n = self.n
        h_blocks = []
        b_blocks = []
        head = g.blocks[0]
        if n == 1:
            h_blocks.append(identity(2))
            b_blocks.append(head)
        else:
            inner = sub_matrix(head, range(1, 2 * n), range(1, 2 * n))
            h_inner, b_inner = self._box_factor(inner, n - 1, self.xi_rect, r, 'rect')
            h_blocks.append(block_diag(((1,),), h_inner))
            b_blocks.append(block_diag(((head[0][0],),), b_inner))
        for tau in range(1, self.d):
            h_tau, b_tau = self._box_factor(g.blocks[tau], n, antidiagonal(n), r, 'square')
            h_blocks.append(h_tau)
            b_blocks.append(b_tau)
        h = GroupElement.build(n, self.d, self.p, self.N, h_blocks, 1)
        b = GroupElement.build(n, self.d, self.p, self.N, b_blocks, g.sim)
        self.logger.debug("box decomposition computed")
        return BoxDecomposition(h, b)

    def twisted(self, h: GroupElement) -> GroupElement:
        """u^-1 h u."""
        return self.u_inv * h * self.u

    # stabilizers

    def _lie_conditions(self, case: str, tau: int) -> Tuple[List[Tuple[int, int]], Matrix]:
        n = self.n
        size = 2 * n
        if case == 'levi':
            g = self.u.blocks[tau]
            if tau == 0:
                positions = [(0, 0)] + [(i, j) for i in range(1, size) for j in range(1, size) if (i < n) == (j < n)]
                rows_to_zero = [(i, j) for i in range(1, size) for j in range(1, i)]
            else:
                positions = [(i, j) for i in range(size) for j in range(size) if (i < n) == (j < n)]
                rows_to_zero = [(i, j) for i in range(size) for j in range(i)]
        elif case == 'full':
            g = self.gamma_hat.blocks[tau]
            positions = [(i, j) for i in range(size) for j in range(size) if (i < n) == (j < n)]
            rows_to_zero = [(i, j) for i in range(size) for j in range(i)]
        else:
            raise ValueError(f"stabilizer case must be 'levi' or 'full', got {case!r}")
        g_sym = Matrix([[self._signed(v) for v in row] for row in g])
        g_inv = g_sym.inv()
        columns = []
        for (i, j) in positions:
            unit = Matrix.zeros(size, size)
            unit[i, j] = 1
            image = g_inv * unit * g_sym
            columns.append([image[a, b] for (a, b) in rows_to_zero])
        condition = Matrix(columns).T if rows_to_zero else Matrix.zeros(0, len(positions))
        return positions, condition

    def _signed(self, v: int) -> int:
        return v - self.q if v > self.q // 2 else v

    def stabilizer_basis(self, case: str) -> List[List[Matrix_]]:
        """Per tau, an integral basis of the stabilizer Lie algebra as 2n x 2n integer matrices."""
        if case in self._stabilizer_cache:
            return self._stabilizer_cache[case]
        size = 2 * self.n
        bases = []
        for tau in range(self.d):
            positions, condition = self._lie_conditions(case, tau)
            vectors = condition.nullspace() if condition.rows else [Matrix.eye(len(positions))[:, k] for k in range(len(positions))]
            basis = []
            for vec in vectors:
                denominator = reduce(lcm, [int(v.q) for v in vec], 1)
                entries = [[0] * size for _ in range(size)]
                for (i, j), v in zip(positions, vec):
                    entries[i][j] = int(v * denominator)
                basis.append(tuple(map(tuple, entries)))
            bases.append(basis)
        self._stabilizer_cache[case] = bases
        return bases

    def stabilizer_dimension(self, case: str) -> Dict[str, Any]:
        n, d = self.n, self.d
        dim_stab = 1
        for tau in range(d):
            positions, condition = self._lie_conditions(case, tau)
            dim_stab += len(positions) - (condition.rank() if condition.rows else 0)
        if case == 'levi':
            dim_acting = 1 + (1 + (n - 1) ** 2 + n ** 2) + (d - 1) * 2 * n * n
            dim_flag = (2 * n - 1) * (2 * n - 2) // 2 + (d - 1) * n * (2 * n - 1)
        else:
            dim_acting = 1 + d * 2 * n * n
            dim_flag = d * n * (2 * n - 1)
        return {
            'case': case,
            'dim_acting': dim_acting,
            'dim_stab': dim_stab,
            'dim_flag': dim_flag,
            'open': dim_acting - dim_stab == dim_flag,
        }

    # level index

    def _diamond_count(self, tau: int, t: int, exponent: int, budget: int) -> int:
        """Residues mod p^exponent of H-shaped tau-blocks whose gamma_hat-conjugate is in the depth-t Iwahori."""
        n, p = self.n, self.p
        modulus = p ** exponent
        entries = 2 * n * n
        if modulus ** entries > budget:
            raise BudgetExceededError(f"enumerating {modulus}^{entries} residues exceeds budget {budget}")
        g = tuple(tuple(v % modulus for v in row) for row in self.gamma_hat.blocks[tau])
        g_inv = tuple(tuple(v % modulus for v in row) for row in mat_inv(self.gamma_hat.blocks[tau], p, self.q))
        depth_modulus = p ** t
        count = 0
        for values in itertools.product(range(modulus), repeat=entries):
            A = tuple(values[k * n:(k + 1) * n] for k in range(n))
            B = tuple(values[n * n + k * n:n * n + (k + 1) * n] for k in range(n))
            h = block_diag(A, B)
            conj = mat_mul(mat_mul(g_inv, h, modulus), g, modulus)
            if any(conj[i][i] % p == 0 for i in range(2 * n)):
                continue
            if is_strictly_lower_zero(conj, depth_modulus):
                count += 1
        return count

    def _index_by_enumeration(self, t: int, budget: int) -> int:
        total = 1
        for tau in range(self.d):
            coarse = self._diamond_count(tau, t, t + 1, budget)
            fine = self._diamond_count(tau, t + 1, t + 1, budget)
            total *= coarse // fine
        return total

    def _index_by_rank(self) -> int:
        K = GF(self.p)
        rank_total = 0
        for tau in range(self.d):
            _, condition = self._lie_conditions('full', tau)
            rows = [[K(int(v) % self.p) for v in condition.row(k)] for k in range(condition.rows)]
            rank_total += DomainMatrix(rows, (condition.rows, condition.cols), K).rank()
        return self.p ** rank_total

    def level_index(self, t: int, budget: int, method: str = 'auto') -> Dict[str, Any]:
        if t < 1 or t + 1 >= self.N:
            raise PrecisionError(f"level index at depth {t} needs precision above {t + 1}")
        formula_value = self.p ** (self.d * self.n * (2 * self.n - 1))
        result = {'p': self.p, 'n': self.n, 'd': self.d, 't': t, 'formula_value': formula_value}
        enumeration = None
        if method in ('auto', 'enumeration'):
            try:
                enumeration = self._index_by_enumeration(t, budget)
            except BudgetExceededError:
                if method == 'enumeration':
                    raise
                self.logger.info("level index enumeration over budget; using congruence rank")
        rank_value = self._index_by_rank() if method in ('auto', 'congruence-rank') else None
        result['enumeration'] = enumeration
        result['congruence_rank'] = rank_value
        result['count'] = enumeration if enumeration is not None else rank_value
        result['paths_agree'] = enumeration is None or rank_value is None or enumeration == rank_value
        result['match'] = result['count'] == formula_value and result['paths_agree']
        return result

    # samplers

    def random_unit(self, rng: random.Random) -> int:
        while True:
            value = rng.randrange(self.q)
            if value % self.p:
                return value

    def _random_upper(self, rng: random.Random, size: int) -> List[List[int]]:
        return [[self.random_unit(rng) if i == j else (rng.randrange(self.q) if j > i else 0)
                 for j in range(size)] for i in range(size)]

    def _congruence_block(self, rng: random.Random, size: int, r: int, mask) -> Matrix_:
        scale = self.p ** r
        return reduce_matrix([[(1 if i == j else 0) + (scale * rng.randrange(self.q) if mask(i, j) else 0)
                               for j in range(size)] for i in range(size)], self.q)

    def _mg_mask(self, tau: int):
        if tau == 0:
            return lambda i, j: (i == 0) == (j == 0)
        return lambda i, j: True

    def _mh_mask(self, tau: int):
        n = self.n
        if tau == 0:
            return lambda i, j: (i == 0 and j == 0) or (i > 0 and j > 0 and (i < n) == (j < n))
        return lambda i, j: (i < n) == (j < n)

    def random_borel_levi(self, rng: random.Random) -> GroupElement:
        blocks = []
        for tau in range(self.d):
            upper = self._random_upper(rng, 2 * self.n)
            if tau == 0:
                for j in range(1, 2 * self.n):
                    upper[0][j] = 0
            blocks.append(upper)
        return self.element(blocks, self.random_unit(rng))

    def random_msquare(self, rng: random.Random, r: int) -> GroupElement:
        size = 2 * self.n
        congruence = [self._congruence_block(rng, size, r, self._mg_mask(tau)) for tau in range(self.d)]
        sim = 1 + self.p ** r * rng.randrange(self.q)
        return self.element(congruence, sim) * self.random_borel_levi(rng)

    def random_club_torus(self, rng: random.Random, diamond: bool = False) -> GroupElement:
        size = 2 * self.n
        diagonals = [[self.random_unit(rng) for _ in range(size)] for _ in range(self.d)]
        for tau, i, j in self._torus_relations(club_only=not diamond):
            diagonals[tau][j] = diagonals[tau][i]
        blocks = [[[diag[i] if i == j else 0 for j in range(size)] for i in range(size)] for diag in diagonals]
        return self.element(blocks, 1)

    def random_mclub(self, rng: random.Random, r: int, diamond: bool = False) -> GroupElement:
        size = 2 * self.n
        congruence = [self._congruence_block(rng, size, r, self._mh_mask(tau)) for tau in range(self.d)]
        return self.element(congruence, 1) * self.random_club_torus(rng, diamond)

    def random_iwahori_G(self, rng: random.Random, t: int) -> GroupElement:
        size = 2 * self.n
        blocks = []
        for _ in range(self.d):
            upper = self._random_upper(rng, size)
            for i in range(size):
                for j in range(i):
                    upper[i][j] = self.p ** t * rng.randrange(self.q)
            blocks.append(upper)
        return self.element(blocks, self.random_unit(rng))

    def random_diamond_H(self, rng: random.Random, t: int) -> GroupElement:
        """Product of a gamma_hat-stabilizer element and a principal congruence element of level p^t."""
        size = 2 * self.n
        bases = self.stabilizer_basis('full')
        stab_blocks = []
        for tau, basis in enumerate(bases):
            conj = self.gamma_hat.blocks[tau]
            conj_inv = self.gamma_hat_inv.blocks[tau]
            for _ in range(1000):
                combo = [[0] * size for _ in range(size)]
                for element in basis:
                    c = rng.randrange(self.q)
                    for i in range(size):
                        for j in range(size):
                            combo[i][j] += c * element[i][j]
                candidate = reduce_matrix(combo, self.q)
                image = mat_mul(mat_mul(conj_inv, candidate, self.q), conj, self.q)
                if all(image[i][i] % self.p for i in range(size)):
                    stab_blocks.append(candidate)
                    break
            else:
                raise BudgetExceededError("no invertible stabilizer element found in 1000 draws")
        congruence = [self._congruence_block(rng, size, t, lambda i, j: (i < self.n) == (j < self.n))
                      for _ in range(self.d)]
        return self.element(stab_blocks, self.random_unit(rng)) * self.element(congruence, 1)

    def random_congruence_matrix(self, rng: random.Random, size: int, r: int) -> Matrix_:
        return reduce_matrix([[self.p ** r * rng.randrange(self.q) for _ in range(size)] for _ in range(size)], self.q)
