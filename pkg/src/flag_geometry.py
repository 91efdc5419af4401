import itertools
import logging
import random
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from padic_arith import INFINITE_VALUATION, DiscFlavor, PadicScalar, PrecisionError
from padic_groups import (BudgetExceededError, GroupElement, GroupToolkit, Matrix_, PreconditionError,
                          mat_inv, reduce_matrix, transpose)


@dataclass(frozen=True)
class FlagPoint:
    """Homogeneous row vector [x_0 : ... : x_{l-1}] with PadicScalar coordinates."""
    coords: Tuple[PadicScalar, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a flag point needs at least one coordinate")
        if len({(c.p, c.N) for c in self.coords}) != 1:
            raise ValueError("coordinates live in different p-adic contexts")

    @classmethod
    def from_ints(cls, p: int, N: int, values: Sequence[int]) -> 'FlagPoint':
        return cls(tuple(PadicScalar.from_int(p, N, v) for v in values))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'FlagPoint':
        return cls.from_ints(int(data['p']), int(data['N']), data['coords'])

    def to_json(self) -> Dict[str, Any]:
        return {'p': self.p, 'N': self.N, 'coords': list(self.residues)}

    @property
    def p(self) -> int:
        return self.coords[0].p

    @property
    def N(self) -> int:
        return self.coords[0].N

    @property
    def residues(self) -> Tuple[int, ...]:
        return tuple(c.residue for c in self.coords)

    def __len__(self):
        return len(self.coords)

    def min_valuation(self):
        return min(c.valuation() for c in self.coords)

    def is_unimodular(self) -> bool:
        return any(c.is_unit() for c in self.coords)

    def unit_index(self) -> int:
        """Last coordinate that is a unit."""
        return max(i for i, c in enumerate(self.coords) if c.is_unit())

    def scaled_at(self, i: int) -> 'FlagPoint':
        pivot = self.coords[i]
        if not pivot.is_unit():
            raise PreconditionError(f"coordinate {i} is not a unit")
        inv = pivot.inverse()
        return FlagPoint(tuple(c * inv for c in self.coords))

    def normalized(self) -> 'FlagPoint':
        v = self.min_valuation()
        if v == INFINITE_VALUATION:
            raise PrecisionError("all coordinates vanish at working precision")
        point = self
        if v > 0:
            point = FlagPoint(tuple(c.divide_by_p_power(v) for c in self.coords))
        return point.scaled_at(point.unit_index())

    def same_point(self, other: 'FlagPoint') -> bool:
        if len(self) != len(other):
            return False
        mine, theirs = self.normalized(), other.normalized()
        N = min(mine.N, theirs.N)
        return [c.with_precision(N) for c in mine.coords] == [c.with_precision(N) for c in theirs.coords]


@dataclass(frozen=True)
class TubeSpec:
    cell: int
    m: int
    k: int
    side: str = 'G'

    def __post_init__(self):
        if not 0 <= self.k <= self.m:
            raise ValueError(f"tube radii must satisfy 0 <= k <= m, got m={self.m}, k={self.k}")
        if self.side not in ('G', 'H'):
            raise ValueError(f"tube side must be 'G' or 'H', got {self.side!r}")


def enumerate_projective_points(length: int, p: int) -> List[Tuple[int, ...]]:
    """Points of P^{length-1}(F_p) in normal form: last nonzero coordinate equal to 1."""
    points = []
    for pivot in range(length):
        for head in itertools.product(range(p), repeat=pivot):
            points.append(tuple(head) + (1,) + (0,) * (length - pivot - 1))
    return points


class FlagGeometry:
    def __init__(self, n: int, d: int, p: int, N: int, toolkit: Optional[GroupToolkit] = None):
        self.n = n
        self.d = d
        self.p = p
        self.N = N
        self.groups = toolkit or GroupToolkit(n, d, p, N)
        self.logger = logging.getLogger(__name__)

    def point(self, values: Sequence[int]) -> FlagPoint:
        return FlagPoint.from_ints(self.p, self.N, values)

    def _translation_matrix(self, x: FlagPoint, g: Union[GroupElement, Matrix_]) -> Matrix_:
        if isinstance(g, GroupElement):
            if len(x) == 2 * self.n:
                return g.blocks[0]
            if len(x) == self.n:
                return g.h_blocks(0)[0]
            raise ValueError(f"flag point of length {len(x)} does not match n={self.n}")
        return g

    def star_translate(self, x: FlagPoint, g: Union[GroupElement, Matrix_]) -> FlagPoint:
        """x * g = x . (g^t)^-1, renormalized."""
        q = self.p ** x.N
        block = reduce_matrix(self._translation_matrix(x, g), q)
        if len(block) != len(x):
            raise ValueError("matrix size does not match the flag point")
        inv_t = transpose(mat_inv(block, self.p, q))
        row = [sum(x.coords[k].residue * inv_t[k][j] for k in range(len(x))) for j in range(len(x))]
        return FlagPoint.from_ints(self.p, x.N, row).normalized()

    def bruhat_cell(self, x: FlagPoint) -> int:
        return x.normalized().unit_index()

    def iota(self, y: FlagPoint) -> FlagPoint:
        if len(y) != self.n:
            raise ValueError(f"H-side points have {self.n} coordinates")
        return FlagPoint.from_ints(self.p, y.N, list(y.residues) + [0] * self.n)

    def iota_hat(self, y: FlagPoint) -> FlagPoint:
        if len(y) != self.n:
            raise ValueError(f"H-side points have {self.n} coordinates")
        values = y.residues
        tail = values[1:]
        coords = list(tail) + [0, values[0] - sum(tail)] + [-v for v in reversed(tail)]
        return FlagPoint.from_ints(self.p, y.N, coords)

    def tube_member(self, x: FlagPoint, tube: TubeSpec) -> bool:
        if tube.m + 1 >= x.N:
            raise PrecisionError(f"tube of radius {tube.m} needs precision above {tube.m + 1}, have {x.N}")
        x = x.normalized()
        i = tube.cell
        if not x.coords[i].is_unit():
            return False
        scaled = x.scaled_at(i)
        before = all(c.disc_member(DiscFlavor.CLOSED, tube.k) for c in scaled.coords[:i])
        after = all(c.disc_member(DiscFlavor.OPEN, tube.m) for c in scaled.coords[i + 1:])
        return before and after

    def _trailing_ratios_inside(self, x: FlagPoint, pivot: int, radius: int) -> bool:
        if radius + 1 >= x.N:
            raise PrecisionError(f"radius {radius} needs precision above {radius + 1}, have {x.N}")
        x = x.normalized()
        if not x.coords[pivot].is_unit():
            return False
        scaled = x.scaled_at(pivot)
        return all(c.disc_member(DiscFlavor.OPEN, radius) for c in scaled.coords[pivot + 1:])

    def in_G_level_tube(self, x: FlagPoint, m: int) -> bool:
        """Membership in ]C_{w_n}[_{m,k} . K^G_Iw(p^t) for t > m; the leading radius k drops out."""
        return self._trailing_ratios_inside(x, self.n, m)

    def in_G_neighbourhood(self, x: FlagPoint, k: int) -> bool:
        if k == 0:
            return self.bruhat_cell(x) >= self.n
        return self._trailing_ratios_inside(x, self.n, k)

    def in_H_tube(self, y: FlagPoint, m: int) -> bool:
        return self._trailing_ratios_inside(y, 0, m)

    def in_H_neighbourhood(self, y: FlagPoint, k: int) -> bool:
        if k == 0:
            return True
        return self._trailing_ratios_inside(y, 0, k)

    def hecke_contract(self, x: FlagPoint) -> FlagPoint:
        """x * diag(1, p, ..., p^{2n-1}) at tau_0, renormalized at coordinate n; precision drops by n."""
        n = self.n
        if x.N - n < 1:
            raise PrecisionError(f"contraction needs precision above {n}, have {x.N}")
        x = x.normalized()
        if not x.coords[n].is_unit():
            raise PreconditionError(f"coordinate {n} must be a unit")
        scaled = x.scaled_at(n)
        target = x.N - n
        coords = []
        for j, c in enumerate(scaled.coords):
            if j >= n:
                coords.append(PadicScalar.from_int(self.p, target, c.residue * self.p ** (j - n)))
            elif c.valuation() >= n - j:
                if c.residue == 0:
                    coords.append(PadicScalar.from_int(self.p, target, 0))
                else:
                    coords.append(c.divide_by_p_power(n - j).with_precision(target))
            else:
                raise PreconditionError(f"coordinate {j} must have valuation at least {n - j}")
        return FlagPoint(tuple(coords))

    def verify_iota_hat(self, y: FlagPoint) -> bool:
        return self.iota_hat(y).same_point(self.star_translate(self.iota(y), self.groups.gamma_hat))

    def verify_cell_preimages(self, budget: int) -> Dict[str, Any]:
        count = (self.p ** self.n - 1) // (self.p - 1)
        if count > budget:
            raise BudgetExceededError(f"{count} points of P^{self.n - 1}(F_{self.p}) exceed budget {budget}")
        failures = []
        checked = 0
        for values in enumerate_projective_points(self.n, self.p):
            y = self.point(values)
            cell = self.bruhat_cell(self.iota_hat(y))
            in_identity_cell = self.bruhat_cell(y) == 0
            checked += 1
            if cell < self.n or (cell == self.n) != in_identity_cell:
                failures.append({
                    'input': {'n': self.n, 'p': self.p, 'y': list(values)},
                    'expected': f"cell {self.n}" if in_identity_cell else f"cell > {self.n}",
                    'got': cell,
                })
        self.logger.info(f"cell preimages: {checked} points checked, {len(failures)} failures")
        return {'checked': checked, 'failures': failures}

    def random_h_point(self, rng: random.Random, spread: int) -> FlagPoint:
        values = []
        for i in range(self.n):
            exponent = 0 if (i == 0 and rng.random() < 0.75) else rng.randint(0, spread)
            values.append(self.p ** exponent * self.groups.random_unit(rng))
        point = self.point(values)
        if not point.is_unimodular():
            point = self.point(values[:-1] + [1])
        return point.normalized()

    def cartesian_sample(self, m: int, k: int, t: int, samples: int, rng: random.Random,
                         budget: int) -> Dict[str, Any]:
        if not 0 <= k <= m < t:
            raise ValueError(f"need 0 <= k <= m < t, got m={m}, k={k}, t={t}")
        if m + 1 >= self.N or t >= self.N:
            raise PrecisionError(f"radii (m={m}, t={t}) need precision above {max(m + 1, t)}")
        if samples > budget:
            raise BudgetExceededError(f"{samples} samples exceed budget {budget}")
        groups = self.groups
        failures = []
        checked = 0

        def record(label, y, h, expected, got):
            failures.append({
                'input': {'check': label, 'y': y.to_json(), 'h': h.to_json(), 'm': m, 'k': k, 't': t},
                'expected': expected,
                'got': got,
            })

        for _ in range(samples):
            y = self.random_h_point(rng, m + 2)
            h = groups.random_diamond_H(rng, t)
            g = groups.random_iwahori_G(rng, t)
            y_moved = self.star_translate(y, h)
            x_moved = self.iota_hat(y_moved)
            conj = groups.gamma_hat_inv * h * groups.gamma_hat

            comparisons = [
                ('U_k preimage', self.in_H_neighbourhood(y_moved, k), self.in_G_neighbourhood(x_moved, k)),
                ('Z_m preimage', self.in_H_tube(y_moved, m), self.in_G_level_tube(x_moved, m)),
                ('Z_m diamond stability', self.in_H_tube(y, m), self.in_H_tube(y_moved, m)),
                ('U_k diamond stability', self.in_H_neighbourhood(y, k), self.in_H_neighbourhood(y_moved, k)),
                ('I_mk Iwahori stability', self.in_G_level_tube(x_moved, m),
                 self.in_G_level_tube(self.star_translate(x_moved, g), m)),
                ('equivariance', True, x_moved.same_point(self.star_translate(self.iota_hat(y), conj))),
            ]
            for label, expected, got in comparisons:
                checked += 1
                if expected != got:
                    record(label, y, h, expected, got)
        self.logger.info(f"cartesian sample: {checked} checks, {len(failures)} failures")
        return {'checked': checked, 'failures': failures}

    def contraction_sample(self, m: int, k: int, samples: int, rng: random.Random) -> Dict[str, Any]:
        """Points of ]C_{w_n}[_{m,k} with k >= n land in ]C_{w_n}[_{m+1,k-n} after contraction."""
        n = self.n
        if k < n:
            raise ValueError(f"contraction needs k >= n, got k={k}")
        failures = []
        checked = 0
        for _ in range(samples):
            values = []
            for j in range(2 * n):
                if j < n:
                    values.append(self.p ** k * rng.randrange(self.p ** self.N))
                elif j == n:
                    values.append(1)
                else:
                    values.append(self.p ** (m + 1) * rng.randrange(self.p ** self.N))
            x = self.point(values)
            image = self.hecke_contract(x)
            checked += 1
            if not self.tube_member(image, TubeSpec(n, m + 1, k - n)):
                failures.append({'input': {'x': x.to_json(), 'm': m, 'k': k},
                                 'expected': f"in ]C_w{n}[_({m + 1},{k - n})", 'got': image.to_json()})
        return {'checked': checked, 'failures': failures}
