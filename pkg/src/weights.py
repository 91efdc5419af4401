import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.liealgebras.root_system import RootSystem

Grid = Tuple[Tuple[int, ...], ...]


def _freeze_grid(rows: Sequence[Sequence[int]]) -> Grid:
    return tuple(tuple(int(v) for v in row) for row in rows)


@dataclass(frozen=True)
class Weight:
    """Character (c0; c_{i,tau}) of the torus of GL1 x prod_tau GL_2n; tau = 0 is the distinguished embedding."""
    n: int
    d: int
    c0: int
    grid: Grid
    doubled: bool = False

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        object.__setattr__(self, 'grid', _freeze_grid(self.grid))
        if len(self.grid) != self.d or any(len(row) != 2 * self.n for row in self.grid):
            raise ValueError(f"grid must be {self.d} x {2 * self.n}")

    @classmethod
    def zero(cls, n: int, d: int, doubled: bool = False) -> 'Weight':
        return cls(n, d, 0, tuple((0,) * (2 * n) for _ in range(d)), doubled)

    @classmethod
    def from_tau0(cls, n: int, d: int, tau0: Sequence[int], c0: int = 0,
                  others: Optional[Sequence[Sequence[int]]] = None) -> 'Weight':
        rows = [tuple(tau0)]
        if others is None:
            rows.extend((0,) * (2 * n) for _ in range(d - 1))
        else:
            rows.extend(tuple(row) for row in others)
        return cls(n, d, c0, tuple(rows))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'Weight':
        return cls(int(data['n']), int(data['d']), int(data.get('c0', 0)),
                   _freeze_grid(data['grid']), bool(data.get('doubled', False)))

    def to_json(self) -> Dict[str, Any]:
        data = {'n': self.n, 'd': self.d, 'c0': self.c0, 'grid': [list(row) for row in self.grid]}
        if self.doubled:
            data['doubled'] = True
        return data

    def c(self, i: int, tau: int = 0) -> int:
        """Entry c_{i,tau}, with i counted from 1 as in the tuple notation."""
        return self.grid[tau][i - 1]

    def component(self, tau: int) -> Tuple[int, ...]:
        return self.grid[tau]

    def with_component(self, tau: int, values: Sequence[int]) -> 'Weight':
        rows = list(self.grid)
        rows[tau] = tuple(values)
        return Weight(self.n, self.d, self.c0, tuple(rows), self.doubled)

    def _check_shape(self, other: 'Weight'):
        if (self.n, self.d, self.doubled) != (other.n, other.d, other.doubled):
            raise ValueError("weights of different shape or scaling")

    def __add__(self, other: 'Weight') -> 'Weight':
        self._check_shape(other)
        rows = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.grid, other.grid))
        return Weight(self.n, self.d, self.c0 + other.c0, rows, self.doubled)

    def __neg__(self) -> 'Weight':
        return self.scale(-1)

    def __sub__(self, other: 'Weight') -> 'Weight':
        return self + (-other)

    def scale(self, a: int) -> 'Weight':
        rows = tuple(tuple(a * v for v in row) for row in self.grid)
        return Weight(self.n, self.d, a * self.c0, rows, self.doubled)

    def as_doubled(self) -> 'Weight':
        if self.doubled:
            return self
        twice = self.scale(2)
        return Weight(self.n, self.d, twice.c0, twice.grid, True)

    def halved(self) -> 'Weight':
        if not self.doubled:
            return self
        values = [self.c0] + [v for row in self.grid for v in row]
        if any(v % 2 for v in values):
            raise ValueError("doubled weight has odd entries and is not integral")
        rows = tuple(tuple(v // 2 for v in row) for row in self.grid)
        return Weight(self.n, self.d, self.c0 // 2, rows, False)

    def is_dominant(self) -> bool:
        return all(all(row[j] >= row[j + 1] for j in range(len(row) - 1)) for row in self.grid)

    def is_trivial_on_T0(self) -> bool:
        if self.c0 != 0:
            return False
        size = 2 * self.n
        return all(row[i] + row[size - 1 - i] == 0 for row in self.grid for i in range(size))

    def is_levi_dominant(self) -> bool:
        head = self.grid[0][1:]
        if any(head[j] < head[j + 1] for j in range(len(head) - 1)):
            return False
        return all(all(row[j] >= row[j + 1] for j in range(len(row) - 1)) for row in self.grid[1:])

    def pure_weight(self) -> Optional[int]:
        n = self.n
        w = self.c(2) + self.c(2 * n)
        if any(self.c(i) + self.c(2 * n + 2 - i) != w for i in range(2, n + 1)):
            return None
        for tau in range(1, self.d):
            if any(self.c(i, tau) + self.c(2 * n + 1 - i, tau) != 0 for i in range(1, n + 1)):
                return None
        return w

    def in_monoid_C(self) -> bool:
        w = self.pure_weight()
        return self.is_levi_dominant() and w is not None and w <= 0 and self.c(self.n + 1) <= w

    def satisfies_parity(self) -> bool:
        return (self.c0 - sum(v for row in self.grid for v in row)) % 2 == 0

    def classify(self) -> 'WeightClassification':
        return WeightClassification(
            dominant=self.is_dominant(),
            trivial_on_T0=self.is_trivial_on_T0(),
            levi_dominant=self.is_levi_dominant(),
            pure_weight=self.pure_weight(),
            in_C=self.in_monoid_C(),
        )


@dataclass(frozen=True)
class WeightClassification:
    dominant: bool
    trivial_on_T0: bool
    levi_dominant: bool
    pure_weight: Optional[int]
    in_C: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            'dominant': self.dominant,
            'trivial_on_T0': self.trivial_on_T0,
            'M_G_dominant': self.levi_dominant,
            'pure_weight': self.pure_weight,
            'in_C': self.in_C,
        }


@dataclass(frozen=True)
class KostantElement:
    """The shuffle w_i, a minimal representative of W_{M_G} \\ W_G."""
    length: int
    n: int

    def __post_init__(self):
        if not 0 <= self.length <= 2 * self.n - 1:
            raise ValueError(f"Kostant length must lie in [0, {2 * self.n - 1}], got {self.length}")

    def shuffle(self, values: Sequence[int]) -> Tuple[int, ...]:
        i = self.length
        values = tuple(values)
        return (values[i],) + values[:i] + values[i + 1:]

    def unshuffle(self, values: Sequence[int]) -> Tuple[int, ...]:
        i = self.length
        values = tuple(values)
        return values[1:i + 1] + (values[0],) + values[i + 1:]

    def act(self, weight: Weight) -> Weight:
        return weight.with_component(0, self.shuffle(weight.component(0)))

    def act_inverse(self, weight: Weight) -> Weight:
        return weight.with_component(0, self.unshuffle(weight.component(0)))


@dataclass
class DictionaryEntry:
    i: int
    xi: Weight
    nu: Weight
    kappa: Weight

    def to_json(self) -> Dict[str, Any]:
        return {'i': self.i, 'xi_doubled': self.xi.to_json(), 'nu': self.nu.to_json(),
                'kappa': self.kappa.to_json()}


class WeylCombinatorics:
    def __init__(self, n: int, d: int):
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        self.n = n
        self.d = d
        self.logger = logging.getLogger(__name__)
        self.two_rho, self.two_rho_c, self.two_rho_nc = self.build_rho()

    def kostant(self, i: int) -> KostantElement:
        return KostantElement(i, self.n)

    def kostant_elements(self) -> List[KostantElement]:
        return [self.kostant(i) for i in range(2 * self.n)]

    def build_rho(self) -> Tuple[Weight, Weight, Weight]:
        n, d = self.n, self.d
        rho_row = tuple(2 * n - 2 * i + 1 for i in range(1, 2 * n + 1))
        rho_c_tau0 = (0,) + tuple(2 * (n - 1) - 2 * j for j in range(2 * n - 1))
        rho_nc_tau0 = (2 * n - 1,) + (-1,) * (2 * n - 1)
        zero_row = (0,) * (2 * n)
        two_rho = Weight(n, d, 0, (rho_row,) * d, True)
        two_rho_c = Weight(n, d, 0, (rho_c_tau0,) + (rho_row,) * (d - 1), True)
        two_rho_nc = Weight(n, d, 0, (rho_nc_tau0,) + (zero_row,) * (d - 1), True)
        return two_rho, two_rho_c, two_rho_nc

    def _check(self, weight: Weight):
        if (weight.n, weight.d) != (self.n, self.d):
            raise ValueError(f"weight has shape (n={weight.n}, d={weight.d}), expected ({self.n}, {self.d})")

    def w_G_max(self, weight: Weight) -> Weight:
        rows = tuple(tuple(reversed(row)) for row in weight.grid)
        return Weight(weight.n, weight.d, weight.c0, rows, weight.doubled)

    def w_M_max(self, weight: Weight) -> Weight:
        head = weight.grid[0]
        rows = ((head[0],) + tuple(reversed(head[1:])),) + tuple(tuple(reversed(row)) for row in weight.grid[1:])
        return Weight(weight.n, weight.d, weight.c0, rows, weight.doubled)

    def dual(self, weight: Weight) -> Weight:
        return -self.w_G_max(weight)

    def weyl_shuffle(self, w: KostantElement, weight: Weight) -> Weight:
        self._check(weight)
        return w.act(weight)

    def star_action(self, w: KostantElement, weight: Weight) -> Weight:
        self._check(weight)
        if weight.doubled:
            raise ValueError("star action expects an integral weight")
        shifted = w.act(weight.as_doubled() + self.two_rho) - self.two_rho
        return shifted.halved()

    def inverse_star_action(self, w: KostantElement, weight: Weight) -> Weight:
        self._check(weight)
        shifted = w.act_inverse(weight.as_doubled() + self.two_rho) - self.two_rho
        return shifted.halved()

    def serre_dual(self, kappa: Weight) -> Weight:
        self._check(kappa)
        if not kappa.is_levi_dominant():
            self.logger.debug("Serre dual requested for a weight that is not M_G-dominant")
        two_rho_nc = Weight(self.n, self.d, 0, self.two_rho_nc.grid)
        return -self.w_M_max(kappa) - two_rho_nc

    def opposite_parabolic_roots(self) -> List[Weight]:
        """Negative roots -e_1 + e_j of A_{2n-1}, i.e. the opposite unipotent radical at tau_0."""
        roots = RootSystem(f"A{2 * self.n - 1}").all_roots().values()
        return [Weight.from_tau0(self.n, self.d, [int(v) for v in root]) for root in roots if root[0] == -1]

    def wedge_weight_alpha(self, i: int) -> Weight:
        if not 0 <= i <= 2 * self.n - 1:
            raise ValueError(f"wedge degree must lie in [0, {2 * self.n - 1}], got {i}")
        roots = self.opposite_parabolic_roots()
        candidates = []
        for subset in itertools.combinations(roots, i):
            total = Weight.zero(self.n, self.d)
            for root in subset:
                total = total + root
            if total.is_levi_dominant():
                candidates.append(total)
        # all M_G-dominant sums coincide
        return candidates[0]

    def parameter_dictionary(self, weight: Weight) -> List[DictionaryEntry]:
        self._check(weight)
        if not weight.is_dominant():
            raise ValueError("parameter dictionary needs a dominant weight")
        star = self.dual(weight)
        doubled = weight.as_doubled()
        entries = []
        for w in self.kostant_elements():
            xi = w.act(doubled + self.two_rho)
            nu = (w.act(doubled + self.two_rho.scale(2)) - self.two_rho_c.scale(2)).halved()
            kappa = self.star_action(w, star)
            entries.append(DictionaryEntry(w.length, xi, nu, kappa))
        return entries

    def dot_orbit_dominant_members(self, w: KostantElement, weight: Weight) -> List[Weight]:
        """M_G-dominant members of {v.(weight+rho) - rho : v in W_{M_G} at tau_0} after applying w."""
        shifted = w.act(weight.as_doubled() + self.two_rho)
        head = shifted.component(0)
        members = []
        for perm in itertools.permutations(head[1:]):
            candidate = (shifted.with_component(0, (head[0],) + perm) - self.two_rho).halved()
            if candidate.is_levi_dominant() and candidate not in members:
                members.append(candidate)
        return members


def parity_condition(weight: Weight) -> bool:
    return weight.satisfies_parity()
