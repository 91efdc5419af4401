import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Sequence, Tuple

from padic_arith import AnalyticCharacter, PadicScalar
from padic_groups import BoxDecomposition, GroupElement, GroupToolkit, mat_det, sub_matrix
from weights import Weight, WeylCombinatorics


class BranchingError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidPairE:
    """Pair (kappa, j): a pure M_G-dominant weight and a tuple j_tau over tau != tau_0."""
    kappa: Weight
    j: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'j', tuple(int(v) for v in self.j) or (0,) * (self.kappa.d - 1))
        if len(self.j) != self.kappa.d - 1:
            raise BranchingError(f"j needs {self.kappa.d - 1} entries, got {len(self.j)}")

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'MonoidPairE':
        return cls(Weight.from_json(data['kappa']), tuple(data.get('j', ())))

    def to_json(self) -> Dict[str, Any]:
        return {'kappa': self.kappa.to_json(), 'j': list(self.j)}

    def __add__(self, other: 'MonoidPairE') -> 'MonoidPairE':
        return MonoidPairE(self.kappa + other.kappa, tuple(a + b for a, b in zip(self.j, other.j)))

    def scale(self, a: int) -> 'MonoidPairE':
        return MonoidPairE(self.kappa.scale(a), tuple(a * v for v in self.j))

    def is_valid(self) -> bool:
        n = self.kappa.n
        return self.kappa.in_monoid_C() and all(0 <= jt <= self.kappa.c(n, tau + 1) for tau, jt in enumerate(self.j))


@dataclass
class BranchingExponents:
    a0: int
    aw: int
    a: Dict[Tuple[int, int], int] = field(default_factory=dict)
    b: Dict[int, int] = field(default_factory=dict)

    def labelled(self) -> Dict[str, int]:
        values = {'a0': self.a0, 'aw': self.aw}
        for (i, tau), v in sorted(self.a.items(), key=lambda item: (item[0][1], item[0][0])):
            values[f"a[{i},{tau}]"] = v
        for tau, v in sorted(self.b.items()):
            values[f"b[{tau}]"] = v
        return values

    @classmethod
    def from_labelled(cls, values: Dict[str, int]) -> 'BranchingExponents':
        exponents = cls(int(values.get('a0', 0)), int(values.get('aw', 0)))
        for label, v in values.items():
            if label.startswith('a['):
                i, tau = (int(part) for part in label[2:-1].split(','))
                exponents.a[(i, tau)] = int(v)
            elif label.startswith('b['):
                exponents.b[int(label[2:-1])] = int(v)
        return exponents

    def to_json(self) -> Dict[str, int]:
        return self.labelled()


def gelfand_tsetlin_patterns(top: Sequence[int]) -> Iterator[List[Tuple[int, ...]]]:
    """All interlacing patterns with the given top row, listed top row first."""
    top = tuple(top)
    if len(top) == 1:
        yield [top]
        return
    ranges = [range(top[i + 1], top[i] + 1) for i in range(len(top) - 1)]
    for below in itertools.product(*ranges):
        for rest in gelfand_tsetlin_patterns(below):
            yield [top] + rest


def pattern_weight(pattern: List[Tuple[int, ...]]) -> Tuple[int, ...]:
    sums = [sum(row) for row in reversed(pattern)]
    return tuple(sums[k] - (sums[k - 1] if k else 0) for k in range(len(sums)))


class BranchingLaw:
    def __init__(self, toolkit: GroupToolkit):
        self.groups = toolkit
        self.n = toolkit.n
        self.d = toolkit.d
        self.p = toolkit.p
        self.N = toolkit.N
        self.weyl = WeylCombinatorics(self.n, self.d)
        self.logger = logging.getLogger(__name__)

    def _require_rank(self):
        if self.n < 2:
            raise BranchingError("the generator decomposition needs n >= 2")

    def _tau0_weight(self, tau0: Sequence[int], c0: int = 0) -> Weight:
        return Weight.from_tau0(self.n, self.d, tau0, c0)

    def generator_set(self) -> List[Tuple[str, MonoidPairE]]:
        self._require_rank()
        n, d = self.n, self.d
        size = 2 * n
        zero_j = (0,) * (d - 1)
        gens = [('a0', MonoidPairE(self._tau0_weight((0,) * size, 1), zero_j)),
                ('aw', MonoidPairE(self._tau0_weight((0,) * n + (-1,) * n), zero_j)),
                ('a[1,0]', MonoidPairE(self._tau0_weight((1,) + (0,) * (size - 1)), zero_j))]
        for i in range(2, n + 1):
            row = (0,) + (1,) * (i - 1) + (0,) * (size - 2 * i + 1) + (-1,) * (i - 1)
            gens.append((f"a[{i},0]", MonoidPairE(self._tau0_weight(row), zero_j)))
        row = (0,) + (1,) * (n - 1) + (-1,) * n
        gens.append((f"a[{n + 1},0]", MonoidPairE(self._tau0_weight(row), zero_j)))
        for tau in range(1, d):
            for i in range(1, n + 1):
                row = (1,) * i + (0,) * (size - 2 * i) + (-1,) * i
                weight = Weight.zero(n, d).with_component(tau, row)
                gens.append((f"a[{i},{tau}]", MonoidPairE(weight, zero_j)))
        for tau in range(1, d):
            row = (1,) * n + (-1,) * n
            j = tuple(1 if t == tau else 0 for t in range(1, d))
            gens.append((f"b[{tau}]", MonoidPairE(Weight.zero(n, d).with_component(tau, row), j)))
        return gens

    def _require_valid(self, x: MonoidPairE):
        if (x.kappa.n, x.kappa.d) != (self.n, self.d):
            raise BranchingError(f"weight has shape (n={x.kappa.n}, d={x.kappa.d}), expected ({self.n}, {self.d})")
        if not x.is_valid():
            raise BranchingError("pair is not in the monoid E (pure, M_G-dominant, weight <= 0, 0 <= j <= kappa_n)")

    def decompose_pair(self, x: MonoidPairE) -> BranchingExponents:
        self._require_rank()
        self._require_valid(x)
        n = self.n
        k = x.kappa
        exponents = BranchingExponents(a0=k.c0, aw=-(k.c(2) + k.c(2 * n)))
        exponents.a[(1, 0)] = k.c(1)
        for i in range(2, n):
            exponents.a[(i, 0)] = k.c(i) - k.c(i + 1)
        exponents.a[(n, 0)] = k.c(n + 1) - k.c(n + 2)
        exponents.a[(n + 1, 0)] = k.c(n) + k.c(n + 2) - k.c(n + 1)
        for tau in range(1, self.d):
            for i in range(1, n):
                exponents.a[(i, tau)] = k.c(i, tau) - k.c(i + 1, tau)
            exponents.a[(n, tau)] = k.c(n, tau) - x.j[tau - 1]
            exponents.b[tau] = x.j[tau - 1]
        return exponents

    def reconstruct(self, exponents: BranchingExponents) -> MonoidPairE:
        values = exponents.labelled()
        total = MonoidPairE(Weight.zero(self.n, self.d), (0,) * (self.d - 1))
        for label, gen in self.generator_set():
            total = total + gen.scale(values.get(label, 0))
        return total

    def sigma_character(self, x: MonoidPairE, h: GroupElement) -> PadicScalar:
        n = self.n
        q = h.modulus
        k = x.kappa
        w = k.c(2) + k.c(2 * n) if n >= 2 else 2 * k.c(2)

        def scalar(v: int) -> PadicScalar:
            return PadicScalar.from_int(h.p, h.N, v)

        head = h.blocks[0]
        y1 = scalar(head[0][0])
        y2 = scalar(mat_det(sub_matrix(head, range(1, n), range(1, n)), q))
        y3 = scalar(mat_det(sub_matrix(head, range(n, 2 * n), range(n, 2 * n)), q))
        value = scalar(h.sim) ** (-k.c0) * y1 ** (-k.c(1)) * y2 ** (k.c(n + 1) - w) * y3 ** (-k.c(n + 1))
        for tau in range(1, self.d):
            z1, z2 = h.h_blocks(tau)
            jt = x.j[tau - 1]
            value = value * scalar(mat_det(z1, q)) ** (-jt) * scalar(mat_det(z2, q)) ** jt
        return value

    def levi_character(self, kappa: Weight, b: GroupElement) -> PadicScalar:
        """(w_M^max kappa)(b^-1) for b in the Borel of M_G."""
        lowered = self.weyl.w_M_max(kappa)
        value = PadicScalar.from_int(b.p, b.N, b.sim) ** (-lowered.c0)
        for tau in range(self.d):
            for i, entry in enumerate(b.diagonal(tau)):
                value = value * PadicScalar.from_int(b.p, b.N, entry) ** (-lowered.grid[tau][i])
        return value

    def box_evaluation(self, x: MonoidPairE, g: GroupElement, r: int) -> Tuple[PadicScalar, BoxDecomposition]:
        decomposition = self.groups.box_decompose(g, r)
        value = self.sigma_character(x, decomposition.h) * self.levi_character(x.kappa, decomposition.b)
        return value, decomposition

    def evaluate_on(self, x: MonoidPairE, decomposition: BoxDecomposition) -> PadicScalar:
        return self.sigma_character(x, decomposition.h) * self.levi_character(x.kappa, decomposition.b)

    def eval_branching_vector(self, x: MonoidPairE, g: GroupElement, r: int) -> PadicScalar:
        value, _ = self.box_evaluation(x, g, r)
        return value

    def eval_family_vector(self, coeffs: Dict[str, AnalyticCharacter], g: GroupElement, r: int) -> PadicScalar:
        decomposition = self.groups.box_decompose(g, r)
        value = PadicScalar.from_int(self.p, self.N, 1)
        for label, gen in self.generator_set():
            character = coeffs.get(label)
            if character is None:
                continue
            gen_value = self.evaluate_on(gen, decomposition)
            if not gen_value.is_unit():
                raise BranchingError(f"generator {label} takes the non-unit value {gen_value.residue}")
            value = value * character.evaluate(gen_value)
        return value

    def algebraic_coefficients(self, exponents: BranchingExponents) -> Dict[str, AnalyticCharacter]:
        return {label: AnalyticCharacter.algebraic(self.p, self.N, v)
                for label, v in exponents.labelled().items()}

    @staticmethod
    def classical_multiplicity(a: int, j: int) -> int:
        """Multiplicity of the diagonal-torus weight (j, -j) in the GL_2 representation of highest weight (a, -a)."""
        if a < 0:
            raise BranchingError(f"highest weight (a, -a) needs a >= 0, got {a}")
        weights = Counter(pattern_weight(pattern) for pattern in gelfand_tsetlin_patterns((a, -a)))
        return weights[(j, -j)]

    def random_pair(self, rng, bound: int = 3) -> MonoidPairE:
        """Random element of E assembled from non-negative generator exponents."""
        exponents = BranchingExponents(rng.randint(-bound, bound), rng.randint(0, bound))
        exponents.a[(1, 0)] = rng.randint(-bound, bound)
        for i in range(2, self.n + 2):
            exponents.a[(i, 0)] = rng.randint(0, bound)
        for tau in range(1, self.d):
            for i in range(1, self.n + 1):
                exponents.a[(i, tau)] = rng.randint(0, bound)
            exponents.b[tau] = rng.randint(0, bound)
        return self.reconstruct(exponents)
