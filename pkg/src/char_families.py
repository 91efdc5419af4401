import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from branching import BranchingExponents, BranchingLaw, MonoidPairE
from padic_arith import AnalyticCharacter, PadicScalar
from padic_groups import GroupToolkit
from weights import Weight


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class TorusPoint:
    """Point (x; y_{i,tau}) of T(Z_p) together with units s_tau paired against beta."""
    x: PadicScalar
    y: Dict[Tuple[int, int], PadicScalar]
    s: Dict[int, PadicScalar] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {'x': self.x.residue,
                'y': {f"{i},{tau}": v.residue for (i, tau), v in sorted(self.y.items())},
                's': {str(tau): v.residue for tau, v in sorted(self.s.items())}}


@dataclass
class FamilyCharacter:
    """Character of T(Z_p) through its components alpha_{i,tau} (i = 1..2n) and c0, with beta on tau != tau_0."""
    n: int
    d: int
    c0: AnalyticCharacter
    alpha: Dict[Tuple[int, int], AnalyticCharacter]
    beta: Dict[int, AnalyticCharacter] = field(default_factory=dict)

    @classmethod
    def from_weight(cls, p: int, N: int, weight: Weight, j: Sequence[int] = ()) -> 'FamilyCharacter':
        alpha = {(i, tau): AnalyticCharacter.algebraic(p, N, weight.c(i, tau))
                 for tau in range(weight.d) for i in range(1, 2 * weight.n + 1)}
        j = tuple(j) or (0,) * (weight.d - 1)
        beta = {tau: AnalyticCharacter.algebraic(p, N, j[tau - 1]) for tau in range(1, weight.d)}
        return cls(weight.n, weight.d, AnalyticCharacter.algebraic(p, N, weight.c0), alpha, beta)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'FamilyCharacter':
        alpha = {}
        for key, value in data['alpha'].items():
            i, tau = (int(part) for part in key.split(','))
            alpha[(i, tau)] = AnalyticCharacter.from_json(value)
        beta = {int(tau): AnalyticCharacter.from_json(value) for tau, value in data.get('beta', {}).items()}
        return cls(int(data['n']), int(data['d']), AnalyticCharacter.from_json(data['c0']), alpha, beta)

    def to_json(self) -> Dict[str, Any]:
        return {'n': self.n, 'd': self.d, 'c0': self.c0.to_json(),
                'alpha': {f"{i},{tau}": ch.to_json() for (i, tau), ch in sorted(self.alpha.items())},
                'beta': {str(tau): ch.to_json() for tau, ch in sorted(self.beta.items())}}

    def evaluate(self, point: TorusPoint) -> PadicScalar:
        value = self.c0.evaluate(point.x)
        for key, character in self.alpha.items():
            value = value * character.evaluate(point.y[key])
        for tau, character in self.beta.items():
            value = value * character.evaluate(point.s[tau])
        return value

    def is_trivial_on_T0(self) -> bool:
        if not self.c0.is_trivial():
            return False
        size = 2 * self.n
        return all((self.alpha[(i, tau)] + self.alpha[(size + 1 - i, tau)]).is_trivial()
                   for tau in range(self.d) for i in range(1, self.n + 1))

    def satisfies_purity(self) -> bool:
        n = self.n
        if n >= 2:
            weight = self.alpha[(2, 0)] + self.alpha[(2 * n, 0)]
            if not all((self.alpha[(i, 0)] + self.alpha[(2 * n + 2 - i, 0)]).same_as(weight) for i in range(3, n + 1)):
                return False
        return all((self.alpha[(i, tau)] + self.alpha[(2 * n + 1 - i, tau)]).is_trivial()
                   for tau in range(1, self.d) for i in range(1, n + 1))


@dataclass
class GeneratorCoefficients:
    """Coefficient characters keyed by generator label; kind is 'torus' or 'pair'."""
    kind: str
    values: Dict[str, AnalyticCharacter]

    def to_json(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'values': {label: ch.to_json() for label, ch in self.values.items()}}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'GeneratorCoefficients':
        return cls(data['kind'], {label: AnalyticCharacter.from_json(ch) for label, ch in data['values'].items()})


class FamilyDecomposer:
    def __init__(self, n: int, d: int, p: int, N: int, law: Optional[BranchingLaw] = None):
        self.n = n
        self.d = d
        self.p = p
        self.N = N
        self._law = law
        self.logger = logging.getLogger(__name__)

    @property
    def law(self) -> BranchingLaw:
        if self._law is None:
            self._law = BranchingLaw(GroupToolkit(self.n, self.d, self.p, self.N))
        return self._law

    def _trivial(self) -> AnalyticCharacter:
        return AnalyticCharacter.trivial(self.p, self.N)

    def _sum(self, terms: List[AnalyticCharacter]) -> AnalyticCharacter:
        total = self._trivial()
        for term in terms:
            total = total + term
        return total

    def torus_generators(self) -> List[Tuple[str, MonoidPairE]]:
        """lambda_{i,tau}: i ones then i minus-ones in the tau component."""
        size = 2 * self.n
        gens = []
        for tau in range(self.d):
            for i in range(1, self.n + 1):
                row = (1,) * i + (0,) * (size - 2 * i) + (-1,) * i
                gens.append((f"xi[{i},{tau}]", MonoidPairE(Weight.zero(self.n, self.d).with_component(tau, row))))
        return gens

    def generators(self, kind: str) -> List[Tuple[str, MonoidPairE]]:
        if kind == 'torus':
            return self.torus_generators()
        if kind == 'pair':
            return self.law.generator_set()
        raise FamilyError(f"unknown coefficient kind {kind!r}")

    def decompose_family(self, character: FamilyCharacter) -> GeneratorCoefficients:
        if not character.is_trivial_on_T0():
            raise FamilyError("character is not trivial on T_0")
        values = {}
        for tau in range(self.d):
            for i in range(1, self.n):
                values[f"xi[{i},{tau}]"] = character.alpha[(i, tau)] - character.alpha[(i + 1, tau)]
            values[f"xi[{self.n},{tau}]"] = character.alpha[(self.n, tau)]
        return GeneratorCoefficients('torus', values)

    def decompose_family_pair(self, character: FamilyCharacter) -> GeneratorCoefficients:
        n = self.n
        if n < 2:
            raise FamilyError("the pair decomposition needs n >= 2")
        if not character.satisfies_purity():
            raise FamilyError("character violates the purity relations")
        a = character.alpha
        values = {'a0': character.c0, 'aw': -(a[(2, 0)] + a[(2 * n, 0)]), 'a[1,0]': a[(1, 0)]}
        for i in range(2, n):
            values[f"a[{i},0]"] = a[(i, 0)] - a[(i + 1, 0)]
        values[f"a[{n},0]"] = a[(n + 1, 0)] - a[(n + 2, 0)]
        values[f"a[{n + 1},0]"] = a[(n, 0)] + a[(n + 2, 0)] - a[(n + 1, 0)]
        for tau in range(1, self.d):
            for i in range(1, n):
                values[f"a[{i},{tau}]"] = a[(i, tau)] - a[(i + 1, tau)]
            beta = character.beta.get(tau, self._trivial())
            values[f"a[{n},{tau}]"] = a[(n, tau)] - beta
            values[f"b[{tau}]"] = beta
        return GeneratorCoefficients('pair', values)

    def reconstruct_family(self, coeffs: GeneratorCoefficients) -> FamilyCharacter:
        gens = self.generators(coeffs.kind)
        scaled = [(coeffs.values.get(label, self._trivial()), gen) for label, gen in gens]
        c0 = self._sum([ch.scale(gen.kappa.c0) for ch, gen in scaled])
        alpha = {(i, tau): self._sum([ch.scale(gen.kappa.c(i, tau)) for ch, gen in scaled])
                 for tau in range(self.d) for i in range(1, 2 * self.n + 1)}
        beta = {}
        if coeffs.kind == 'pair':
            beta = {tau: self._sum([ch.scale(gen.j[tau - 1]) for ch, gen in scaled]) for tau in range(1, self.d)}
        return FamilyCharacter(self.n, self.d, c0, alpha, beta)

    def generator_value(self, gen: MonoidPairE, point: TorusPoint) -> PadicScalar:
        kappa = gen.kappa
        value = point.x ** kappa.c0
        for tau in range(self.d):
            for i in range(1, 2 * self.n + 1):
                exponent = kappa.c(i, tau)
                if exponent:
                    value = value * point.y[(i, tau)] ** exponent
        for tau, jt in enumerate(gen.j, start=1):
            if jt:
                value = value * point.s[tau] ** jt
        return value

    def evaluate_coefficients(self, coeffs: GeneratorCoefficients, point: TorusPoint) -> PadicScalar:
        value = PadicScalar.from_int(self.p, self.N, 1)
        for label, gen in self.generators(coeffs.kind):
            character = coeffs.values.get(label)
            if character is not None:
                value = value * character.evaluate(self.generator_value(gen, point))
        return value

    def specialize_family(self, coeffs: GeneratorCoefficients) -> Tuple[Weight, Tuple[int, ...]]:
        integers = {}
        for label, character in coeffs.values.items():
            k = character.as_algebraic()
            if k is None:
                raise FamilyError(f"coefficient {label} is not algebraic")
            integers[label] = k
        if coeffs.kind == 'pair':
            pair = self.law.reconstruct(BranchingExponents.from_labelled(integers))
            return pair.kappa, pair.j
        total = MonoidPairE(Weight.zero(self.n, self.d))
        for label, gen in self.torus_generators():
            total = total + gen.scale(integers.get(label, 0))
        return total.kappa, ()

    def perturb(self, coeffs: GeneratorCoefficients, label: str, chi: AnalyticCharacter) -> GeneratorCoefficients:
        values = dict(coeffs.values)
        values[label] = values.get(label, self._trivial()) + chi
        return GeneratorCoefficients(coeffs.kind, values)

    def random_unit(self, rng: random.Random) -> PadicScalar:
        q = self.p ** self.N
        while True:
            value = rng.randrange(q)
            if value % self.p:
                return PadicScalar(self.p, self.N, value)

    def random_torus_point(self, rng: random.Random) -> TorusPoint:
        y = {(i, tau): self.random_unit(rng) for tau in range(self.d) for i in range(1, 2 * self.n + 1)}
        s = {tau: self.random_unit(rng) for tau in range(1, self.d)}
        return TorusPoint(self.random_unit(rng), y, s)

    def random_character(self, rng: random.Random) -> AnalyticCharacter:
        return AnalyticCharacter.teichmuller_twist(self.p, self.N, rng.randrange(self.p - 1),
                                                   rng.randrange(self.p ** self.N))

    def random_trivial_on_T0(self, rng: random.Random) -> FamilyCharacter:
        alpha = {}
        size = 2 * self.n
        for tau in range(self.d):
            for i in range(1, self.n + 1):
                ch = self.random_character(rng)
                alpha[(i, tau)] = ch
                alpha[(size + 1 - i, tau)] = -ch
        return FamilyCharacter(self.n, self.d, self._trivial(), alpha)

    def random_pure(self, rng: random.Random) -> FamilyCharacter:
        """Random character satisfying the purity relations, with random beta."""
        n, size = self.n, 2 * self.n
        weight = self.random_character(rng)
        alpha = {(1, 0): self.random_character(rng)}
        for i in range(2, n + 1):
            ch = self.random_character(rng)
            alpha[(i, 0)] = ch
            alpha[(size + 2 - i, 0)] = weight - ch
        alpha[(n + 1, 0)] = self.random_character(rng)
        for tau in range(1, self.d):
            for i in range(1, n + 1):
                ch = self.random_character(rng)
                alpha[(i, tau)] = ch
                alpha[(size + 1 - i, tau)] = -ch
        beta = {tau: self.random_character(rng) for tau in range(1, self.d)}
        return FamilyCharacter(n, self.d, self.random_character(rng), alpha, beta)

    def uniqueness_witness(self, coeffs: GeneratorCoefficients, label: str, chi: AnalyticCharacter,
                           points: List[TorusPoint]) -> Optional[TorusPoint]:
        """First sampled point on which the perturbed coefficients evaluate differently."""
        perturbed = self.perturb(coeffs, label, chi)
        for point in points:
            if self.evaluate_coefficients(coeffs, point) != self.evaluate_coefficients(perturbed, point):
                return point
        return None
