"""Entropy and Kullback-Leibler divergence of integers.

An integer ``n = prod p_i**a_i`` carries the probability distribution
``a_i / Omega(n)`` over its distinct primes. All quantities are in nats.
The ``*_of_exponents`` helpers work on bare exponent vectors and are shared
with the ideal-theoretic side in :mod:`entropia.quad_ideals`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .arith_core import (
    DomainError,
    Factorization,
    big_omega,
    is_k_free,
    omega,
)

__all__ = [
    "ExponentDistribution",
    "RobinConstant",
    "ROBIN",
    "Growth",
    "shannon_entropy",
    "kl_divergence",
    "entropy_of_exponents",
    "divergence_of_exponents",
    "entropy",
    "entropy_shannon",
    "divergence",
    "divergence_entropy_form",
    "divergence_to_radical",
    "append_prime_power_entropy",
    "coprime_gap",
    "coprime_gap_alt",
    "shift_divergence",
    "robin_rhs",
    "kfree_entropy_bounds",
    "kfree_divergence_bound",
    "entropy_threshold",
    "compare_exponent_growth",
    "to_base",
]

DIST_TOL = 1e-12
_EDGE = 1e-12  # thresholds like 3 come back as 3 +- 1 ulp


def _xlogx(a: int) -> float:
    return a * math.log(a) if a > 1 else 0.0


@dataclass(frozen=True)
class ExponentDistribution:
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise DomainError("empty distribution")
        if any(w <= 0 or w > 1 for w in self.weights):
            raise DomainError("weights must lie in (0, 1]")
        if abs(math.fsum(self.weights) - 1.0) > DIST_TOL:
            raise DomainError("weights do not sum to 1")

    @classmethod
    def from_exponents(cls, exponents: Sequence[int]) -> ExponentDistribution:
        if not exponents or any(a < 1 for a in exponents):
            raise DomainError("exponents must be a nonempty sequence of positive ints")
        total = sum(exponents)
        return cls(tuple(a / total for a in exponents))

    @classmethod
    def of(cls, f: Factorization) -> ExponentDistribution:
        return cls.from_exponents(f.exponents)


@dataclass(frozen=True)
class RobinConstant:
    """Constant in Robin's bound ``omega(n) <= c1 log n / log log n``."""

    c1: float = 1.38402


ROBIN = RobinConstant()


class Growth(str, Enum):
    """Predicted order of ``H(n p**alpha)`` against ``H(n p**beta)``."""

    LE = "<="
    GE = ">="
    INCONCLUSIVE = "inconclusive"


def shannon_entropy(d: ExponentDistribution) -> float:
    return -math.fsum(w * math.log(w) for w in d.weights)


def kl_divergence(p: ExponentDistribution, q: ExponentDistribution) -> float:
    if len(p.weights) != len(q.weights):
        raise DomainError("distributions differ in length")
    return math.fsum(a * math.log(a / b) for a, b in zip(p.weights, q.weights))


def entropy_of_exponents(exponents: Sequence[int]) -> float:
    """``log Omega - (1/Omega) sum a_i log a_i``; 0 for empty or single blocks."""
    if len(exponents) <= 1:
        return 0.0
    total = sum(exponents)
    return math.log(total) - math.fsum(_xlogx(a) for a in exponents) / total


def divergence_of_exponents(
    left: Sequence[int],
    right: Sequence[int],
    pairing: Sequence[int] | None = None,
) -> float:
    """KL distance between exponent vectors.

    ``pairing[i]`` is the index in ``right`` matched with ``left[i]``;
    positional matching when omitted.
    """
    if len(left) != len(right):
        raise DomainError(f"omega mismatch: {len(left)} vs {len(right)}")
    if not left:
        raise DomainError("divergence is undefined for empty exponent vectors")
    if pairing is not None:
        if sorted(pairing) != list(range(len(right))):
            raise DomainError("pairing must be a permutation of the right-hand indices")
        right = [right[j] for j in pairing]
    if any(a < 1 for a in left) or any(b < 1 for b in right):
        raise DomainError("exponents must be >= 1")
    total_l, total_r = sum(left), sum(right)
    cross = math.fsum(a * math.log(b / a) for a, b in zip(left, right) if a != b)
    return math.log(total_r / total_l) - cross / total_l


def entropy(f: Factorization) -> float:
    """``H(n) = log Omega(n) - (1/Omega(n)) sum a_i log a_i``, with ``H(1) = 0``."""
    return entropy_of_exponents(f.exponents)


def entropy_shannon(f: Factorization) -> float:
    """Same quantity through the Shannon sum over ``a_i / Omega(n)``."""
    if not f.pairs:
        return 0.0
    return shannon_entropy(ExponentDistribution.of(f))


def _require_nontrivial(*fs: Factorization) -> None:
    for f in fs:
        if not f.pairs:
            raise DomainError("divergence is undefined for n = 1")


def divergence(
    f_n: Factorization,
    f_m: Factorization,
    pairing: Sequence[int] | None = None,
) -> float:
    """``D(n||m)``; exponents matched by ascending prime unless ``pairing`` is given."""
    _require_nontrivial(f_n, f_m)
    return divergence_of_exponents(f_n.exponents, f_m.exponents, pairing)


def divergence_entropy_form(f_n: Factorization, f_m: Factorization) -> float:
    """``D(n||m)`` rewritten as ``H(m) - H(n) + sum (b_i/Omega(m) - a_i/Omega(n)) log b_i``."""
    _require_nontrivial(f_n, f_m)
    if omega(f_n) != omega(f_m):
        raise DomainError(f"omega mismatch: {omega(f_n)} vs {omega(f_m)}")
    big_n, big_m = big_omega(f_n), big_omega(f_m)
    tail = math.fsum(
        (b / big_m - a / big_n) * math.log(b) for a, b in zip(f_n.exponents, f_m.exponents)
    )
    return entropy(f_m) - entropy(f_n) + tail


def divergence_to_radical(f: Factorization) -> float:
    if not f.pairs:
        raise DomainError("divergence_to_radical requires n >= 2")
    return math.log(omega(f)) - entropy(f)


def append_prime_power_entropy(f: Factorization, alpha: int) -> float:
    """``H(n p**alpha)`` for a prime ``p`` coprime to ``n``, from ``H(n)`` alone."""
    if not f.pairs:
        raise DomainError("append_prime_power_entropy requires n >= 2")
    if alpha < 1:
        raise DomainError("alpha must be >= 1")
    big = big_omega(f)
    s = big + alpha
    return (
        big * entropy(f) / s
        + math.log(s)
        - (big * math.log(big) + _xlogx(alpha)) / s
    )


def _check_coprime_pair(f_m: Factorization, f_n: Factorization) -> None:
    if not f_m.pairs or not f_n.pairs:
        raise DomainError("coprime_gap requires m, n >= 2")
    if not f_m.coprime_to(f_n):
        raise DomainError("coprime_gap requires gcd(m, n) = 1")


def coprime_gap(f_m: Factorization, f_n: Factorization) -> float:
    """``H(mn) - H(m) - H(n)`` for coprime ``m, n`` from the exponent sums."""
    _check_coprime_pair(f_m, f_n)
    big_m, big_n = big_omega(f_m), big_omega(f_n)
    s = big_m + big_n
    sum_n = math.fsum(_xlogx(a) for a in f_n.exponents)
    sum_m = math.fsum(_xlogx(b) for b in f_m.exponents)
    return (
        big_m / (big_n * s) * sum_n
        + big_n / (big_m * s) * sum_m
        - math.log(big_m * big_n / s)
    )


def coprime_gap_alt(f_m: Factorization, f_n: Factorization) -> float:
    """``H(mn) - H(m) - H(n)`` expressed through ``H(m)`` and ``H(n)``."""
    _check_coprime_pair(f_m, f_n)
    big_m, big_n = big_omega(f_m), big_omega(f_n)
    s = big_m + big_n
    return (
        (big_n * math.log(big_m) + big_m * math.log(big_n)) / s
        - (big_n * entropy(f_m) + big_m * entropy(f_n)) / s
        - math.log(big_m * big_n / s)
    )


def shift_divergence(f: Factorization, alpha: int, beta: int) -> float:
    """``D(n p**alpha || n p**beta)`` for a prime ``p`` coprime to ``n``."""
    if not f.pairs:
        raise DomainError("shift_divergence requires n >= 2")
    if alpha < 1 or beta < 1:
        raise DomainError("alpha and beta must be >= 1")
    big = big_omega(f)
    h = entropy(f)
    cross = (alpha - beta) * big * (math.log(big) - h - math.log(beta))
    return (
        append_prime_power_entropy(f, beta)
        - append_prime_power_entropy(f, alpha)
        + cross / ((big + alpha) * (big + beta))
    )


def robin_rhs(n: int) -> float:
    """``log log n - log log log n + log c1``."""
    if n < 3:
        raise DomainError(f"robin_rhs requires n >= 3, got {n}")
    ll = math.log(math.log(n))
    return ll - math.log(ll) + math.log(ROBIN.c1)


def kfree_entropy_bounds(f: Factorization, k: int) -> tuple[float, float]:
    if not f.pairs:
        raise DomainError("k-free bounds require n >= 2")
    if not is_k_free(f, k):
        raise DomainError(f"{f} is not {k}-free")
    big, w = big_omega(f), omega(f)
    lower = math.log(big) - (w / big) * _xlogx(k - 1)
    return lower, math.log(w)


def kfree_divergence_bound(f: Factorization, k: int) -> float:
    """Upper bound on ``D(n||gamma(n))`` for ``k``-free ``n``."""
    lower, upper = kfree_entropy_bounds(f, k)
    return upper - lower


def entropy_threshold(f: Factorization) -> float:
    """``Omega(n) * exp(-H(n))``, the switch point of exponent growth.

    Evaluated as ``exp(sum a_i log a_i / Omega)`` so squarefree ``n`` gives
    exactly 1.
    """
    if not f.pairs:
        raise DomainError("entropy_threshold requires n >= 2")
    return math.exp(math.fsum(_xlogx(a) for a in f.exponents) / big_omega(f))


def compare_exponent_growth(f: Factorization, alpha: int, beta: int) -> Growth:
    """Predict the order of ``H(n p**alpha)`` and ``H(n p**beta)`` for ``alpha >= beta``.

    Above the threshold a larger exponent lowers the entropy, below it the
    entropy grows; between ``beta`` and ``alpha`` nothing is claimed.
    """
    if not f.pairs:
        raise DomainError("compare_exponent_growth requires n >= 2")
    if beta < 1:
        raise DomainError("beta must be >= 1")
    if alpha < beta:
        raise DomainError(f"alpha ({alpha}) must be >= beta ({beta})")
    t = entropy_threshold(f)
    if beta >= t - _EDGE:
        return Growth.LE
    if alpha <= t + _EDGE:
        return Growth.GE
    return Growth.INCONCLUSIVE


_BASES = {"e": (1.0, "nats"), "2": (math.log(2), "bits"), "10": (math.log(10), "hartleys")}


def to_base(value: float, base: str = "e") -> tuple[float, str]:
    """Convert a value in nats for display; returns ``(value, unit)``."""
    try:
        scale, unit = _BASES[str(base)]
    except KeyError:
        raise DomainError(f"unsupported base {base!r}") from None
    return value / scale, unit

