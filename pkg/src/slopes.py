import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from weights import Grid, Weight, WeylCombinatorics


@dataclass(frozen=True)
class HeckeElement:
    """Torus element p^central x prod_tau diag(p^{e_1,tau}, ..., p^{e_2n,tau}), up to T(Z_p)."""
    n: int
    d: int
    exponents: Grid
    central: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'exponents', tuple(tuple(int(e) for e in row) for row in self.exponents))
        if len(self.exponents) != self.d or any(len(row) != 2 * self.n for row in self.exponents):
            raise ValueError(f"exponent grid must be {self.d} x {2 * self.n}")

    @classmethod
    def standard(cls, n: int, d: int) -> 'HeckeElement':
        row = tuple(range(2 * n))
        return cls(n, d, (row,) * d, 1)

    @classmethod
    def generator(cls, n: int, d: int, i: int, tau: int) -> 'HeckeElement':
        if not 1 <= i <= 2 * n:
            raise ValueError(f"generator index must lie in [1, {2 * n}], got {i}")
        rows = [(0,) * (2 * n) for _ in range(d)]
        rows[tau] = (0,) * (2 * n - i) + (1,) * i
        return cls(n, d, tuple(rows), 0)

    @classmethod
    def central_element(cls, n: int, d: int) -> 'HeckeElement':
        return cls(n, d, tuple((0,) * (2 * n) for _ in range(d)), 1)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'HeckeElement':
        return cls(int(data['n']), int(data['d']), data['exponents'], int(data.get('central', 0)))

    def to_json(self) -> Dict[str, Any]:
        return {'n': self.n, 'd': self.d, 'exponents': [list(row) for row in self.exponents],
                'central': self.central}

    def __add__(self, other: 'HeckeElement') -> 'HeckeElement':
        rows = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.exponents, other.exponents))
        return HeckeElement(self.n, self.d, rows, self.central + other.central)

    def __neg__(self) -> 'HeckeElement':
        rows = tuple(tuple(-e for e in row) for row in self.exponents)
        return HeckeElement(self.n, self.d, rows, -self.central)

    def in_T_minus(self) -> bool:
        return all(all(row[j] <= row[j + 1] for j in range(len(row) - 1)) for row in self.exponents)

    def in_T_minus_minus(self) -> bool:
        return all(all(row[j] < row[j + 1] for j in range(len(row) - 1)) for row in self.exponents)


def generator_label(i: int, tau: int, inverse: bool = False) -> str:
    return f"x[{i},{tau}]" + ("^-1" if inverse else "")


def witness_candidates(n: int, d: int) -> List[Tuple[str, HeckeElement]]:
    """Generators x_{i,tau} of T^-/T(Z_p), with the inverses of its units."""
    candidates = []
    for tau in range(d):
        for i in range(1, 2 * n + 1):
            candidates.append((generator_label(i, tau), HeckeElement.generator(n, d, i, tau)))
        candidates.append((generator_label(2 * n, tau, True), -HeckeElement.generator(n, d, 2 * n, tau)))
    central = HeckeElement.central_element(n, d)
    candidates.append(("central", central))
    candidates.append(("central^-1", -central))
    return candidates


def slope_pairing(weight: Weight, x: HeckeElement) -> Fraction:
    if (weight.n, weight.d) != (x.n, x.d):
        raise ValueError("weight and Hecke element have different shapes")
    total = weight.c0 * x.central
    for row, exps in zip(weight.grid, x.exponents):
        total += sum(c * e for c, e in zip(row, exps))
    return Fraction(total, 2) if weight.doubled else Fraction(total)


@dataclass
class SlopeDatum:
    """Valuations v(theta(x_{i,tau})) on the monoid generators, extended additively."""
    n: int
    d: int
    values: Dict[Tuple[int, int], Fraction]
    central: Fraction = Fraction(0)

    @classmethod
    def from_weight(cls, weight: Weight) -> 'SlopeDatum':
        values = {}
        for tau in range(weight.d):
            for i in range(1, 2 * weight.n + 1):
                values[(i, tau)] = slope_pairing(weight, HeckeElement.generator(weight.n, weight.d, i, tau))
        central = slope_pairing(weight, HeckeElement.central_element(weight.n, weight.d))
        return cls(weight.n, weight.d, values, central)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'SlopeDatum':
        n, d = int(data['n']), int(data['d'])
        values = {}
        for key, value in data['values'].items():
            i, tau = (int(part) for part in key.split(','))
            values[(i, tau)] = Fraction(value)
        return cls(n, d, values, Fraction(data.get('central', 0)))

    def to_json(self) -> Dict[str, Any]:
        return {'n': self.n, 'd': self.d, 'central': str(self.central),
                'values': {f"{i},{tau}": str(v) for (i, tau), v in sorted(self.values.items())}}

    def is_finite_slope(self) -> bool:
        return all(v is not None for v in self.values.values())

    def bumped(self, key: Tuple[int, int], amount) -> 'SlopeDatum':
        values = dict(self.values)
        values[key] = values[key] + Fraction(amount)
        return SlopeDatum(self.n, self.d, values, self.central)

    def value_of(self, x: HeckeElement) -> Fraction:
        size = 2 * self.n
        total = self.central * x.central
        for tau, row in enumerate(x.exponents):
            total += row[0] * self.values[(size, tau)]
            for j in range(2, size + 1):
                total += (row[j - 1] - row[j - 2]) * self.values[(size - j + 1, tau)]
        return total


@dataclass
class SmallSlopeVerdict:
    verdict: bool
    witnesses: Dict[int, Optional[str]]
    margins: Dict[int, Dict[str, Fraction]]

    def to_json(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict,
            'witnesses': {str(i): w for i, w in self.witnesses.items()},
            'margins': {str(i): {label: str(v) for label, v in row.items()} for i, row in self.margins.items()},
        }


@dataclass
class BorelDeltaTable:
    deltas: Dict[int, Weight]
    entries: Dict[int, Dict[str, Fraction]]
    predicted: Dict[int, Tuple[str, int]] = field(default_factory=dict)

    def matches_prediction(self) -> bool:
        return all(self.entries[i][label] == value for i, (label, value) in self.predicted.items())

    def to_json(self) -> Dict[str, Any]:
        return {
            'deltas': {str(i): w.to_json() for i, w in self.deltas.items()},
            'entries': {str(i): {label: str(v) for label, v in row.items()} for i, row in self.entries.items()},
            'predicted': {str(i): {'at': label, 'value': value} for i, (label, value) in self.predicted.items()},
        }


class SlopeAnalyzer:
    def __init__(self, n: int, d: int):
        self.n = n
        self.d = d
        self.weyl = WeylCombinatorics(n, d)
        self.candidates = witness_candidates(n, d)
        self.logger = logging.getLogger(__name__)

    def _check_lambda(self, weight: Weight):
        if not (weight.is_dominant() and weight.is_trivial_on_T0()):
            raise ValueError("small-slope data needs a dominant weight trivial on T_0")

    def kappa_n(self, weight: Weight) -> Weight:
        return self.weyl.star_action(self.weyl.kostant(self.n), self.weyl.dual(weight))

    def comparison_weight(self, i: int, weight: Weight) -> Weight:
        """w_i^{-1} * kappa_n, the right-hand side of the small-slope inequality."""
        return self.weyl.inverse_star_action(self.weyl.kostant(i), self.kappa_n(weight))

    def borel_ordinary_datum(self, weight: Weight) -> SlopeDatum:
        return SlopeDatum.from_weight(self.weyl.dual(weight))

    def adversarial_datum(self, weight: Weight, i: int, bumps: Optional[Dict[Tuple[int, int], int]] = None) -> SlopeDatum:
        """Datum on which no generator witnesses the inequality at w_i."""
        if i == self.n:
            raise ValueError("w_n is excluded from the small-slope condition")
        datum = SlopeDatum.from_weight(self.comparison_weight(i, weight))
        for key, amount in (bumps or {}).items():
            if key[0] == 2 * self.n or amount < 0:
                raise ValueError("bumps must be non-negative and avoid the invertible generators")
            datum = datum.bumped(key, amount)
        return datum

    def is_small_slope(self, datum: SlopeDatum, weight: Weight) -> SmallSlopeVerdict:
        self._check_lambda(weight)
        witnesses = {}
        margins = {}
        for w in self.weyl.kostant_elements():
            if w.length == self.n:
                continue
            target = self.comparison_weight(w.length, weight)
            row = {label: slope_pairing(target, x) - datum.value_of(x) for label, x in self.candidates}
            margins[w.length] = row
            best_label, best = max(row.items(), key=lambda item: item[1])
            witnesses[w.length] = best_label if best > 0 else None
        verdict = all(label is not None for label in witnesses.values())
        self.logger.debug(f"small slope verdict {verdict} with witnesses {witnesses}")
        return SmallSlopeVerdict(verdict, witnesses, margins)

    def borel_delta_table(self, weight: Weight) -> BorelDeltaTable:
        self._check_lambda(weight)
        n = self.n
        star = self.weyl.dual(weight)
        deltas = {}
        entries = {}
        for w in self.weyl.kostant_elements():
            if w.length == n:
                continue
            delta = self.comparison_weight(w.length, weight) - star
            deltas[w.length] = delta
            entries[w.length] = {label: slope_pairing(delta, x) for label, x in self.candidates}
        predicted = {}
        for i in range(n):
            predicted[i] = (generator_label(n, 0), 2 * weight.c(n) + 1)
        for eps in range(1, n):
            predicted[n + eps] = (generator_label(n - eps, 0), weight.c(n - eps) - weight.c(n) + eps)
        return BorelDeltaTable(deltas, entries, predicted)

    def delta_frame(self, table: BorelDeltaTable) -> pd.DataFrame:
        frame = pd.DataFrame({i: dict(row) for i, row in table.entries.items()}, dtype=object).T
        frame.index.name = 'i'
        return frame
