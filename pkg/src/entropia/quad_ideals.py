"""Ideal factorization shapes in rings of integers of quadratic fields.

Prime ideals are carried as labels ``(p, conjugate_index)`` rather than by
generators: every entropy-type quantity depends only on the exponent shape of
the factorization, so the labels just need to be distinct and canonically
ordered. :func:`from_exponents` builds the same shape objects for arbitrary
Dedekind decompositions where no field is attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Sequence

from .arith_core import DomainError, Factorization, factor, is_prime, kronecker
from .entropy import divergence_of_exponents, entropy_of_exponents, shannon_entropy, ExponentDistribution

__all__ = [
    "QuadraticField",
    "Splitting",
    "RamificationData",
    "PrimeIdealLabel",
    "IdealFactor",
    "IdealFactorization",
    "make_field",
    "ramification",
    "factor_prime_ideal",
    "factor_principal",
    "ideal_entropy",
    "ideal_entropy_shannon",
    "ideal_divergence",
    "ideal_radical",
    "ideal_tau",
    "ideal_tau_e",
    "ideal_exp_divisors",
    "from_exponents",
]


@dataclass(frozen=True)
class QuadraticField:
    """``Q(sqrt d)`` for squarefree ``d != 0, 1``."""

    d: int

    def __post_init__(self) -> None:
        if self.d in (0, 1):
            raise DomainError(f"d = {self.d} does not define a quadratic field")
        f = factor(abs(self.d))
        if any(a > 1 for a in f.exponents):
            raise DomainError(f"d = {self.d} is not squarefree")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def degree(self) -> int:
        return 2

    def __str__(self) -> str:
        return f"Q(sqrt({self.d}))"


def make_field(d: int) -> QuadraticField:
    return QuadraticField(d)


class Splitting(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


_EFG = {
    Splitting.SPLIT: (1, 1, 2),
    Splitting.INERT: (1, 2, 1),
    Splitting.RAMIFIED: (2, 1, 1),
}


@dataclass(frozen=True)
class RamificationData:
    kind: Splitting
    e: int
    f: int
    g: int

    @classmethod
    def of(cls, kind: Splitting) -> RamificationData:
        return cls(kind, *_EFG[kind])


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def ramification(K: QuadraticField, p: int) -> RamificationData:
    _require_prime(p)
    if p == 2:
        r = K.d % 8
        kind = Splitting.SPLIT if r == 1 else Splitting.INERT if r == 5 else Splitting.RAMIFIED
    else:
        s = kronecker(K.discriminant, p)
        kind = {1: Splitting.SPLIT, -1: Splitting.INERT, 0: Splitting.RAMIFIED}[s]
    return RamificationData.of(kind)


@dataclass(frozen=True, order=True)
class PrimeIdealLabel:
    p: int
    conjugate_index: int = 1

    def __post_init__(self) -> None:
        if self.conjugate_index < 1:
            raise DomainError("conjugate_index must be >= 1")

    def __str__(self) -> str:
        return f"P({self.p},{self.conjugate_index})"


@dataclass(frozen=True)
class IdealFactor:
    label: PrimeIdealLabel
    e: int
    f: int = 1


@dataclass(frozen=True)
class IdealFactorization:
    """``I = prod P_i**e_i`` over distinct prime ideals, sorted by label.

    ``field`` is ``None`` for abstract decompositions.
    """

    factors: tuple[IdealFactor, ...]
    field: QuadraticField | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        labels = [fac.label for fac in self.factors]
        if len(set(labels)) != len(labels):
            raise DomainError("prime ideal labels must be distinct")
        if any(fac.e < 1 or fac.f < 1 for fac in self.factors):
            raise DomainError("exponents and residue degrees must be >= 1")
        if labels != sorted(labels):
            object.__setattr__(self, "factors", tuple(sorted(self.factors, key=lambda x: x.label)))
        if self.field is not None:
            for fac in self.factors:
                if fac.label.conjugate_index > 2:
                    raise DomainError("a quadratic field has at most two primes above p")
                if fac.label.conjugate_index == 2 and ramification(self.field, fac.label.p).kind is not Splitting.SPLIT:
                    raise DomainError(f"{fac.label.p} does not split in {self.field}")

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(fac.e for fac in self.factors)

    @property
    def labels(self) -> tuple[PrimeIdealLabel, ...]:
        return tuple(fac.label for fac in self.factors)

    @property
    def big_omega(self) -> int:
        return sum(self.exponents)

    @property
    def omega(self) -> int:
        return len(self.factors)

    def with_exponents(self, exponents: Sequence[int]) -> IdealFactorization:
        if len(exponents) != len(self.factors):
            raise DomainError("exponent vector has the wrong length")
        return IdealFactorization(
            tuple(IdealFactor(fac.label, e, fac.f) for fac, e in zip(self.factors, exponents)),
            self.field,
        )

    def __str__(self) -> str:
        parts = [f"{fac.label}^{fac.e}" if fac.e > 1 else str(fac.label) for fac in self.factors]
        return " * ".join(parts) or "(1)"


def factor_prime_ideal(K: QuadraticField, p: int) -> IdealFactorization:
    """Decomposition of ``p O_K``."""
    return _prime_block(K, p, 1)


def _prime_block(K: QuadraticField, p: int, a: int) -> IdealFactorization:
    ram = ramification(K, p)
    if ram.kind is Splitting.SPLIT:
        facs = (IdealFactor(PrimeIdealLabel(p, 1), a, 1), IdealFactor(PrimeIdealLabel(p, 2), a, 1))
    else:
        facs = (IdealFactor(PrimeIdealLabel(p, 1), ram.e * a, ram.f),)
    return IdealFactorization(facs, K)


def factor_principal(K: QuadraticField, m: int) -> IdealFactorization:
    """Decomposition of the principal ideal ``m O_K`` for a rational integer ``m >= 2``."""
    if m < 2:
        raise DomainError(f"factor_principal requires m >= 2, got {m}")
    return _from_rational(K, factor(m))


def _from_rational(K: QuadraticField, f: Factorization) -> IdealFactorization:
    facs: list[IdealFactor] = []
    for p, a in f:
        facs.extend(_prime_block(K, p, a).factors)
    return IdealFactorization(tuple(facs), K)


def _require_nonempty(I: IdealFactorization) -> None:
    if not I.factors:
        raise DomainError("the unit ideal has no prime factors")


def ideal_entropy(I: IdealFactorization) -> float:
    """``log Omega(I) - (1/Omega(I)) sum e_i log e_i``."""
    _require_nonempty(I)
    return entropy_of_exponents(I.exponents)


def ideal_entropy_shannon(I: IdealFactorization) -> float:
    """The Shannon sum over ``e_i / Omega(I)``."""
    _require_nonempty(I)
    return shannon_entropy(ExponentDistribution.from_exponents(I.exponents))


def ideal_divergence(
    I: IdealFactorization,
    J: IdealFactorization,
    pairing: Sequence[int] | None = None,
) -> float:
    """``D(I||J)``; factors matched in canonical label order unless ``pairing`` is given."""
    return divergence_of_exponents(I.exponents, J.exponents, pairing)


def ideal_radical(I: IdealFactorization) -> IdealFactorization:
    _require_nonempty(I)
    return I.with_exponents([1] * I.omega)


def ideal_tau(I: IdealFactorization) -> int:
    return math.prod(e + 1 for e in I.exponents)


def _divisors_of(a: int) -> list[int]:
    return [d for d in range(1, a + 1) if a % d == 0]


def ideal_tau_e(I: IdealFactorization) -> int:
    return math.prod(len(_divisors_of(e)) for e in I.exponents)


def ideal_exp_divisors(I: IdealFactorization) -> list[IdealFactorization]:
    """All ``prod P_i**b_i`` with ``b_i | e_i``, lexicographic in ``(b_1, ..., b_g)``."""
    _require_nonempty(I)
    return [I.with_exponents(betas) for betas in product(*(_divisors_of(e) for e in I.exponents))]


def from_exponents(
    labels: Iterable[PrimeIdealLabel | tuple[int, int]] | None,
    e: Sequence[int],
    f: Sequence[int] | None = None,
) -> IdealFactorization:
    """Abstract decomposition ``prod P_i**e_i`` with no field attached.

    With ``labels=None`` the factors are labelled ``P(1,1), P(2,1), ...``.
    """
    e = list(e)
    f = [1] * len(e) if f is None else list(f)
    if labels is None:
        labs = [PrimeIdealLabel(i + 1, 1) for i in range(len(e))]
    else:
        labs = [lab if isinstance(lab, PrimeIdealLabel) else PrimeIdealLabel(*lab) for lab in labels]
    if not (len(labs) == len(e) == len(f)):
        raise DomainError("labels, e and f must have equal length")
    return IdealFactorization(tuple(IdealFactor(lab, ei, fi) for lab, ei, fi in zip(labs, e, f)))
