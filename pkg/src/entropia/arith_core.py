"""Exact integer arithmetic: primality, factorization, multiplicative functions.

Everything here works on plain Python ints. ``factor`` is exact on the
unsigned 64-bit range; :class:`Factorization` itself accepts any prime
support so that callers can build values (``p**10000``) that no longer fit a
machine word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product
from typing import Iterable, Iterator

__all__ = [
    "DomainError",
    "Factorization",
    "is_prime",
    "factor",
    "big_omega",
    "omega",
    "radical",
    "tau",
    "divisor_count",
    "exp_divisors",
    "tau_e",
    "is_k_free",
    "kronecker",
    "primes_up_to",
]

U64_MAX = (1 << 64) - 1
TRIAL_LIMIT = 10_000

# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


def primes_up_to(limit: int) -> list[int]:
    """Primes ``p <= limit`` by the sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = primes_up_to(TRIAL_LIMIT)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= TRIAL_LIMIT:
        return n in _SMALL_PRIME_SET
    for p in _MR_BASES:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``.

    Pollard rho with Brent's cycle detection. The polynomial constant walks
    c = 1, 2, ... so the result is reproducible.
    """
    batch = 128
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += batch
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


def _split_large(n: int, out: dict[int, int]) -> None:
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split_large(root, out)
        _split_large(root, out)
        return
    d = _brent(n)
    _split_large(d, out)
    _split_large(n // d, out)


@dataclass(frozen=True)
class Factorization:
    """Canonical prime-power decomposition ``n = prod p_i**a_i``.

    ``pairs`` is sorted strictly ascending by prime; the empty tuple is n = 1.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        prev = 1
        for p, a in self.pairs:
            if p <= prev:
                raise DomainError("primes must be strictly ascending")
            if a < 1:
                raise DomainError(f"exponent of {p} must be >= 1, got {a}")
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
            prev = p

    @classmethod
    def _trusted(cls, pairs: Iterable[tuple[int, int]]) -> Factorization:
        # Skips validation; callers guarantee canonical prime pairs.
        obj = object.__new__(cls)
        object.__setattr__(obj, "pairs", tuple(pairs))
        return obj

    @classmethod
    def from_dict(cls, mapping: dict[int, int]) -> Factorization:
        return cls(tuple(sorted((p, a) for p, a in mapping.items() if a)))

    @cached_property
    def value(self) -> int:
        return reduce(lambda acc, pa: acc * pa[0] ** pa[1], self.pairs, 1)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __mul__(self, other: Factorization) -> Factorization:
        if not isinstance(other, Factorization):
            return NotImplemented
        merged = dict(self.pairs)
        for p, a in other.pairs:
            merged[p] = merged.get(p, 0) + a
        return Factorization._trusted(sorted(merged.items()))

    def __pow__(self, k: int) -> Factorization:
        if k < 1:
            raise DomainError("power must be >= 1")
        return Factorization._trusted((p, a * k) for p, a in self.pairs)

    def coprime_to(self, other: Factorization) -> bool:
        return not set(self.primes) & set(other.primes)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return " * ".join(f"{p}^{a}" if a > 1 else str(p) for p, a in self.pairs)


def factor(n: int) -> Factorization:
    if n < 1:
        raise DomainError(f"factor requires n >= 1, got {n}")
    if n > U64_MAX:
        raise DomainError("factor is limited to 64-bit inputs")
    pairs: list[tuple[int, int]] = []
    m = n
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            pairs.append((p, a))
    if m > 1:
        if m <= TRIAL_LIMIT * TRIAL_LIMIT or is_prime(m):
            # Below 10^8 the trial division above already proves m prime.
            pairs.append((m, 1))
        else:
            big: dict[int, int] = {}
            _split_large(m, big)
            pairs.extend(sorted(big.items()))
    result = Factorization._trusted(pairs)
    if result.value != n:  # pragma: no cover - guards the algorithm itself
        raise ArithmeticError(f"factorization of {n} does not reconstruct")
    return result


def big_omega(f: Factorization) -> int:
    return sum(a for _, a in f.pairs)


def omega(f: Factorization) -> int:
    return len(f.pairs)


def radical(f: Factorization) -> Factorization:
    return Factorization._trusted((p, 1) for p, _ in f.pairs)


def divisor_count(f: Factorization) -> int:
    """Number of divisors, ``prod (a_i + 1)``."""
    return math.prod(a + 1 for _, a in f.pairs)


def tau(n: int) -> int:
    if n < 1:
        raise DomainError(f"tau requires n >= 1, got {n}")
    return divisor_count(factor(n))


def _divisors_of(a: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(a) + 1) if a % d == 0]
    return sorted(set(small) | {a // d for d in small})


def exp_divisors(f: Factorization) -> list[Factorization]:
    """Exponential divisors of ``n > 1``, ascending by value.

    ``d = prod p_i**b_i`` is an e-divisor when every ``b_i`` divides ``a_i``.
    """
    if not f.pairs:
        raise DomainError("exp_divisors is undefined for n = 1")
    primes = f.primes
    choices = [_divisors_of(a) for a in f.exponents]
    divs = [Factorization._trusted(zip(primes, betas)) for betas in product(*choices)]
    divs.sort(key=lambda d: d.value)
    return divs


def tau_e(f: Factorization) -> int:
    """Number of exponential divisors; 1 for n = 1 by convention."""
    return math.prod(len(_divisors_of(a)) for a in f.exponents)


def is_k_free(f: Factorization, k: int) -> bool:
    if k < 2:
        raise DomainError(f"k-free requires k >= 2, got {k}")
    return all(a <= k - 1 for a in f.exponents)


def kronecker(a: int, m: int) -> int:
    """Kronecker symbol ``(a|m)`` for ``m >= 1``.

    Reduces to the Jacobi symbol for odd ``m`` and to the Legendre symbol for
    odd prime ``m``; the factor 2 uses ``(a|2) = 0, 1, -1`` for a even,
    a = +-1 mod 8, a = +-3 mod 8.
    """
    if m < 1:
        raise DomainError(f"kronecker requires m >= 1, got {m}")
    result = 1
    while m % 2 == 0:
        m //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0
