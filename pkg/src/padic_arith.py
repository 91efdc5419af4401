import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

INFINITE_VALUATION = math.inf

logger = logging.getLogger(__name__)


class PadicError(ValueError):
    pass


class PrecisionError(PadicError):
    pass


class NotAUnitError(PadicError):
    pass


class DivergenceError(PadicError):
    pass


class DiscFlavor(Enum):
    CLOSED = "closed"
    OPEN = "open"
    CLOSURE_OPEN = "closure-open"
    STRICT_OPEN = "strict-open"


def int_valuation(value: int, p: int) -> int:
    if value == 0:
        raise ValueError("valuation of 0 is not an integer")
    value = abs(value)
    count = 0
    while value % p == 0:
        value //= p
        count += 1
    return count


def _series_terms(N: int) -> int:
    # with v(x) >= 1 and p >= 3 every dropped term x^k/k, y^k/k! has valuation >= N
    return 2 * N + 2


@dataclass(frozen=True)
class PadicScalar:
    p: int
    N: int
    residue: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be a prime, got {self.p}")
        if self.N < 1:
            raise ValueError(f"working precision must be positive, got {self.N}")
        if not 0 <= self.residue < self.p ** self.N:
            raise ValueError(f"residue {self.residue} outside [0, {self.p}^{self.N})")

    @classmethod
    def from_int(cls, p: int, N: int, value: int) -> 'PadicScalar':
        return cls(p, N, value % (p ** N))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'PadicScalar':
        return cls.from_int(int(data['p']), int(data['N']), int(data['residue']))

    def to_json(self) -> Dict[str, int]:
        return {'p': self.p, 'N': self.N, 'residue': self.residue}

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def _coerce(self, other: Union['PadicScalar', int]) -> 'PadicScalar':
        if isinstance(other, PadicScalar):
            if other.p != self.p or other.N != self.N:
                raise ValueError(f"mixed contexts: ({self.p}, {self.N}) vs ({other.p}, {other.N})")
            return other
        if isinstance(other, int):
            return PadicScalar.from_int(self.p, self.N, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar.from_int(self.p, self.N, self.residue + other.residue)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar.from_int(self.p, self.N, self.residue - other.residue)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar.from_int(self.p, self.N, self.residue * other.residue)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicScalar.from_int(self.p, self.N, -self.residue)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return PadicScalar(self.p, self.N, pow(self.residue, exponent, self.modulus))

    def __int__(self):
        return self.residue

    def lift(self) -> int:
        """Signed representative in (-p^N/2, p^N/2]."""
        if self.residue > self.modulus // 2:
            return self.residue - self.modulus
        return self.residue

    def valuation(self):
        if self.residue == 0:
            return INFINITE_VALUATION
        return int_valuation(self.residue, self.p)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> 'PadicScalar':
        if not self.is_unit():
            raise NotAUnitError(f"{self.residue} is not a unit mod {self.p}^{self.N}")
        return PadicScalar(self.p, self.N, pow(self.residue, -1, self.modulus))

    def with_precision(self, N: int) -> 'PadicScalar':
        if N > self.N:
            raise PrecisionError(f"cannot raise precision from {self.N} to {N}")
        return PadicScalar.from_int(self.p, N, self.residue)

    def divide_by_p_power(self, e: int) -> 'PadicScalar':
        if e < 0:
            raise ValueError("exponent must be non-negative")
        if e >= self.N:
            raise PrecisionError(f"dividing by p^{e} leaves no digits at precision {self.N}")
        if self.residue % (self.p ** e) != 0:
            raise PrecisionError(f"{self.residue} is not divisible by {self.p}^{e}")
        return PadicScalar.from_int(self.p, self.N - e, self.residue // self.p ** e)

    def disc_member(self, flavor: Union[DiscFlavor, str], m: int) -> bool:
        flavor = DiscFlavor(flavor)
        if m < 0:
            raise ValueError(f"radius must be non-negative, got {m}")
        if flavor is DiscFlavor.CLOSED:
            if m >= self.N:
                raise PrecisionError(f"closed disc of radius {m} needs precision above {self.N}")
            return self.valuation() >= m
        if m + 1 >= self.N:
            raise PrecisionError(f"open disc of radius {m} needs precision above {m + 1}, have {self.N}")
        return self.valuation() >= m + 1

    def teichmuller(self) -> 'PadicScalar':
        if not self.is_unit():
            raise NotAUnitError(f"Teichmuller lift of non-unit {self.residue}")
        return PadicScalar(self.p, self.N, pow(self.residue, self.p ** (self.N - 1), self.modulus))

    def unit_decompose(self) -> Tuple['PadicScalar', 'PadicScalar']:
        omega = self.teichmuller()
        return omega, self * omega.inverse()

    def log(self) -> 'PadicScalar':
        if self.p == 2:
            raise DivergenceError("p-adic log of principal units is not implemented for p = 2")
        x = (self.residue - 1) % self.modulus
        if x % self.p != 0:
            raise DivergenceError(f"log series diverges: {self.residue} is not 1 mod {self.p}")
        q = self.modulus
        total = 0
        power = 1
        for k in range(1, _series_terms(self.N) + 1):
            power *= x
            e = int_valuation(k, self.p)
            term = (power // self.p ** e) * pow(k // self.p ** e, -1, q)
            total += term if k % 2 == 1 else -term
        return PadicScalar.from_int(self.p, self.N, total)

    @staticmethod
    def exp_of(y: 'PadicScalar') -> 'PadicScalar':
        if y.p == 2:
            raise DivergenceError("p-adic exp is not implemented for p = 2")
        if y.residue % y.p != 0:
            raise DivergenceError(f"exp series diverges at {y.residue}")
        q = y.modulus
        total = 1
        power = 1
        factorial = 1
        for k in range(1, _series_terms(y.N) + 1):
            power *= y.residue
            factorial *= k
            e = int_valuation(factorial, y.p)
            total += (power // y.p ** e) * pow(factorial // y.p ** e, -1, q)
        return PadicScalar.from_int(y.p, y.N, total)

    def unit_power(self, s: Union['PadicScalar', int]) -> 'PadicScalar':
        if self.p == 2:
            raise DivergenceError("analytic powers need p odd")
        if (self.residue - 1) % self.p != 0:
            raise DivergenceError(f"{self.residue} is not a principal unit mod {self.p}")
        s = self._coerce(s)
        return PadicScalar.exp_of(s * self.log())

    def __repr__(self):
        return f"PadicScalar({self.residue} mod {self.p}^{self.N})"


def unit_residues(p: int, r: int):
    return [a for a in range(p ** r) if a % p != 0]


@dataclass(frozen=True)
class AnalyticCharacter:
    """Character z -> finite(z mod p^r) * <z>^s of Z_p^x, with <z> = z / omega(z)."""
    r: int
    finite: Tuple[int, ...]
    exponent: PadicScalar

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("depth of the finite part must be at least 1")
        if len(self.finite) != self.p ** self.r:
            raise ValueError(f"finite table must have {self.p ** self.r} entries")

    @property
    def p(self) -> int:
        return self.exponent.p

    @property
    def N(self) -> int:
        return self.exponent.N

    @classmethod
    def from_table(cls, p: int, N: int, r: int, values: Dict[int, int], s: int = 0) -> 'AnalyticCharacter':
        q = p ** N
        table = tuple((values[a] % q) if a % p != 0 else 0 for a in range(p ** r))
        return cls(r, table, PadicScalar.from_int(p, N, s))

    @classmethod
    def teichmuller_twist(cls, p: int, N: int, a: int, s: int = 0, r: int = 1) -> 'AnalyticCharacter':
        values = {}
        for z in unit_residues(p, r):
            omega = PadicScalar.from_int(p, N, z).teichmuller()
            values[z] = (omega ** a).residue
        return cls.from_table(p, N, r, values, s)

    @classmethod
    def trivial(cls, p: int, N: int, r: int = 1) -> 'AnalyticCharacter':
        return cls.teichmuller_twist(p, N, 0, 0, r)

    @classmethod
    def algebraic(cls, p: int, N: int, k: int, r: int = 1) -> 'AnalyticCharacter':
        return cls.teichmuller_twist(p, N, k, k, r)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'AnalyticCharacter':
        exponent = PadicScalar.from_json(data['s'])
        return cls(int(data['r']), tuple(int(v) for v in data['finite']), exponent)

    def to_json(self) -> Dict[str, Any]:
        return {'r': self.r, 'finite': list(self.finite), 's': self.exponent.to_json()}

    def _finite_value(self, z: PadicScalar) -> PadicScalar:
        return PadicScalar(self.p, self.N, self.finite[z.residue % (self.p ** self.r)])

    def evaluate(self, z: Union[PadicScalar, int]) -> PadicScalar:
        if isinstance(z, int):
            z = PadicScalar.from_int(self.p, self.N, z)
        if not z.is_unit():
            raise NotAUnitError(f"characters are evaluated on units, got {z.residue}")
        _, principal = z.unit_decompose()
        return self._finite_value(z) * principal.unit_power(self.exponent)

    def _check_compatible(self, other: 'AnalyticCharacter'):
        if (self.p, self.N) != (other.p, other.N):
            raise ValueError("characters live in different p-adic contexts")

    def _aligned(self, other: 'AnalyticCharacter') -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
        r = max(self.r, other.r)
        return self._table_at(r), other._table_at(r), r

    def _table_at(self, r: int) -> Tuple[int, ...]:
        if r == self.r:
            return self.finite
        step = self.p ** self.r
        return tuple(self.finite[a % step] for a in range(self.p ** r))

    def __add__(self, other: 'AnalyticCharacter') -> 'AnalyticCharacter':
        self._check_compatible(other)
        mine, theirs, r = self._aligned(other)
        q = self.p ** self.N
        table = tuple((a * b) % q for a, b in zip(mine, theirs))
        return AnalyticCharacter(r, table, self.exponent + other.exponent)

    def __neg__(self) -> 'AnalyticCharacter':
        q = self.p ** self.N
        table = tuple(pow(v, -1, q) if v else 0 for v in self.finite)
        return AnalyticCharacter(self.r, table, -self.exponent)

    def __sub__(self, other: 'AnalyticCharacter') -> 'AnalyticCharacter':
        return self + (-other)

    def scale(self, a: int) -> 'AnalyticCharacter':
        if a < 0:
            return (-self).scale(-a)
        q = self.p ** self.N
        table = tuple(pow(v, a, q) if v else 0 for v in self.finite)
        return AnalyticCharacter(self.r, table, self.exponent * a)

    def same_as(self, other: 'AnalyticCharacter') -> bool:
        self._check_compatible(other)
        mine, theirs, _ = self._aligned(other)
        return mine == theirs and self.exponent == other.exponent

    def is_trivial(self) -> bool:
        return self.same_as(AnalyticCharacter.trivial(self.p, self.N, self.r))

    def as_algebraic(self) -> Optional[int]:
        k = self.exponent.lift()
        if self.same_as(AnalyticCharacter.algebraic(self.p, self.N, k, self.r)):
            return k
        return None
