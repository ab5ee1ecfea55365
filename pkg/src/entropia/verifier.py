"""Brute-force verification harness.

Each cataloged property is an exhaustive scan over a finite range. A scan
is split into contiguous shards of an outer index sequence; shards run
in-process or on a process pool and their violations are merged by sorting
on the input tuple, so reports do not depend on the worker count.

Margins are signed room left: ``rhs - lhs`` for ``lhs <= rhs`` (and for the
strict form), ``-|lhs - rhs|`` for identities.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import arith_core as ac
from . import entropy as en
from . import quad_ideals as qi
from .arith_core import DomainError, Factorization, factor

__all__ = [
    "Mode",
    "Verdict",
    "PropertyId",
    "ScanConfig",
    "Violation",
    "ScanReport",
    "list_properties",
    "resolve_params",
    "get_property",
    "run_property",
    "run_all",
    "search_counterexamples",
]

DEFAULT_TOL = 1e-12
DEFAULT_CAP = 100
SHARDS = 32


class Mode(str, Enum):
    ASSERT = "assert"
    SURVEY = "survey"


class Verdict(str, Enum):
    HOLDS = "holds-on-range"
    VIOLATED = "violated"
    SURVEYED = "surveyed"


@dataclass(frozen=True)
class PropertyId:
    id: str
    claim: str
    mode_default: Mode
    bound_key: str | None
    defaults: Mapping[str, Any] = field(compare=False, repr=False)


@dataclass(frozen=True)
class ScanConfig:
    """Overrides for a scan; ``None`` keeps the property's own default.

    ``n_max`` replaces the property's primary bound (see ``PropertyId.bound_key``);
    ``extra`` reaches any other named parameter.
    """

    n_max: int | None = None
    n_min: int | None = None
    primes: tuple[int, ...] | None = None
    k_max: int | None = None
    alpha_max: int | None = None
    fields: tuple[int, ...] | None = None
    tolerance: float = DEFAULT_TOL
    mode: Mode | None = None
    jobs: int = 1
    cap: int = DEFAULT_CAP
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise DomainError("tolerance must be > 0")
        if self.jobs < 1:
            raise DomainError("jobs must be >= 1")
        if self.cap < 1:
            raise DomainError("cap must be >= 1")
        if self.n_max is not None and self.n_min is not None and self.n_min > self.n_max:
            raise DomainError("empty range: n_min > n_max")


@dataclass(frozen=True, order=True)
class Violation:
    inputs: tuple[tuple[str, Any], ...]
    lhs: float
    rhs: float
    margin: float

    @property
    def key(self) -> tuple:
        return tuple(v for _, v in self.inputs)


@dataclass
class ScanReport:
    property: str
    claim: str
    mode: Mode
    verdict: Verdict
    tested: int
    violation_count: int
    violations: list[Violation]
    elapsed_ms: float
    params: dict[str, Any]


class Tally:
    """Collects violations for one shard."""

    def __init__(self, tol: float) -> None:
        self.tol = tol
        self.tested = 0
        self.violations: list[Violation] = []

    def _add(self, inputs, lhs, rhs, margin) -> None:
        self.violations.append(Violation(tuple(inputs), lhs, rhs, margin))

    def le(self, inputs, lhs, rhs) -> None:
        if rhs - lhs < -self.tol:
            self._add(inputs, lhs, rhs, rhs - lhs)

    def lt(self, inputs, lhs, rhs) -> None:
        if rhs - lhs <= 0:
            self._add(inputs, lhs, rhs, rhs - lhs)

    def eq(self, inputs, lhs, rhs) -> None:
        if abs(lhs - rhs) > self.tol:
            self._add(inputs, lhs, rhs, -abs(lhs - rhs))

    def exact(self, inputs, lhs, rhs) -> None:
        if lhs != rhs:
            self._add(inputs, lhs, rhs, -abs(lhs - rhs))


@dataclass(frozen=True)
class _Spec:
    pid: PropertyId
    outer: Callable[[Mapping[str, Any]], Sequence]
    check: Callable[[Any, Any, Mapping[str, Any], Tally], None]
    prepare: Callable[[Mapping[str, Any]], Any] | None = None


_CATALOG: dict[str, _Spec] = {}


def _register(pid: str, claim: str, *, bound: str | None, mode: Mode = Mode.ASSERT,
              outer: Callable, prepare: Callable | None = None, **defaults):
    def deco(check):
        if pid in _CATALOG:
            raise ValueError(f"duplicate property {pid}")
        _CATALOG[pid] = _Spec(PropertyId(pid, claim, mode, bound, dict(defaults)), outer, check, prepare)
        return check
    return deco


# ---------------------------------------------------------------- helpers

def _n_range(params) -> range:
    return range(params["n_min"], params["n_max"] + 1)


def _factor_table(n_max: int) -> list[Factorization | None]:
    return [None] + [factor(n) for n in range(1, n_max + 1)]


def _coprime_prime(f: Factorization) -> int:
    """Smallest prime not dividing ``n``."""
    taken = set(f.primes)
    p = 2
    while p in taken:
        p = next(q for q in range(p + 1, 2 * p + 1) if ac.is_prime(q))
    return p


def _squarefree_fields(limit: int) -> list[int]:
    out = []
    for d in range(-limit, limit + 1):
        if d in (0, 1):
            continue
        try:
            qi.make_field(d)
        except DomainError:
            continue
        out.append(d)
    return out


def _by_omega(table, lo: int, hi: int) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for n in range(lo, hi + 1):
        groups.setdefault(ac.omega(table[n]), []).append(n)
    return groups


# ---------------------------------------------------------------- integers: entropy

@_register("P-1.1-entropy-bound", "0 <= H(n) <= log omega(n) for n >= 2",
           bound="n_max", outer=_n_range, n_min=2, n_max=100_000)
def _p11(n, ctx, params, t):
    f = factor(n)
    h = en.entropy(f)
    t.tested += 1
    t.le((("n", n), ("side", "lower")), 0.0, h)
    t.le((("n", n), ("side", "upper")), h, math.log(ac.omega(f)))


def _prime_pool(params) -> list[int]:
    return [p for p in ac.primes_up_to(params["p_max"])]


@_register("P-1.2-prime-power", "H(p^a) = 0 exactly for prime powers",
           bound="p_max", outer=_prime_pool, p_max=100, alpha_max=20)
def _p12i(p, ctx, params, t):
    for a in range(1, params["alpha_max"] + 1):
        value = p**a
        f = factor(value) if value <= ac.U64_MAX else Factorization(((p, a),))
        t.tested += 1
        t.exact((("p", p), ("alpha", a)), en.entropy(f), 0.0)


@_register("P-1.2-squarefree", "H(n) = log omega(n) for squarefree n",
           bound="n_max", outer=_n_range, n_min=2, n_max=100_000)
def _p12ii(n, ctx, params, t):
    f = factor(n)
    if not ac.is_k_free(f, 2):
        return
    t.tested += 1
    t.eq((("n", n),), en.entropy(f), math.log(ac.omega(f)))


@_register("P-1.2-radical-power", "H((p_1...p_r)^a) = log omega for squarefree base",
           bound="n_max", outer=_n_range, n_min=2, n_max=2_000, alpha_max=8)
def _p12iii(n, ctx, params, t):
    f = factor(n)
    if not ac.is_k_free(f, 2):
        return
    for a in range(1, params["alpha_max"] + 1):
        t.tested += 1
        t.eq((("n", n), ("alpha", a)), en.entropy(f**a), math.log(ac.omega(f)))


@_register("P-1.0-power-invariance", "H(n^a) = H(n)",
           bound="n_max", outer=_n_range, n_min=2, n_max=10_000, alpha_min=2, alpha_max=4)
def _p_power(n, ctx, params, t):
    h = en.entropy(factor(n))
    for a in range(params["alpha_min"], params["alpha_max"] + 1):
        t.tested += 1
        t.eq((("n", n), ("alpha", a)), en.entropy(factor(n**a)), h)


@_register("P-EQ-1.1-1.2", "Shannon-sum and closed-form entropy agree",
           bound="n_max", outer=_n_range, n_min=1, n_max=100_000)
def _p_eq12(n, ctx, params, t):
    f = factor(n)
    t.tested += 1
    t.eq((("n", n),), en.entropy_shannon(f), en.entropy(f))


@_register("P-MS5-append", "H(n p^a) closed form from H(n) matches direct evaluation",
           bound="n_max", outer=_n_range, n_min=2, n_max=2_000, alpha_max=6)
def _p_ms5(n, ctx, params, t):
    f = factor(n)
    p = _coprime_prime(f)
    for a in range(1, params["alpha_max"] + 1):
        t.tested += 1
        t.eq((("n", n), ("alpha", a)), en.append_prime_power_entropy(f, a), en.entropy(factor(n * p**a)))


def _coprime_gap_all(fm: Factorization, fn: Factorization) -> tuple[float, float, float]:
    direct = en.entropy(fm * fn) - en.entropy(fm) - en.entropy(fn)
    return en.coprime_gap(fm, fn), en.coprime_gap_alt(fm, fn), direct


@_register("P-EQ-coprime-gap", "H(mn)-H(m)-H(n): exponent-sum form = entropy form = direct",
           bound="n_max", outer=lambda p: range(2, p["n_max"] + 1),
           prepare=lambda p: _factor_table(p["n_max"]), n_max=2_000)
def _p_gap(m, table, params, t):
    fm = table[m]
    # the three values depend only on the two exponent vectors
    cache: dict[tuple, tuple[float, float, float]] = {}
    for n in range(m + 1, params["n_max"] + 1):
        if math.gcd(m, n) != 1:
            continue
        fn = table[n]
        key = (fm.exponents, fn.exponents)
        vals = cache.get(key)
        if vals is None:
            vals = cache[key] = _coprime_gap_all(fm, fn)
        eq_form, alt_form, direct = vals
        t.tested += 1
        inputs = (("m", m), ("n", n))
        t.eq(inputs + (("form", "sums"),), eq_form, direct)
        t.eq(inputs + (("form", "entropies"),), alt_form, direct)


@_register("P-DIV1-bound", "D(n||d) >= log(Omega(d)/Omega(n)) for every e-divisor d",
           bound="n_max", outer=_n_range, n_min=2, n_max=5_000)
def _p_div1(n, ctx, params, t):
    f = factor(n)
    for d in ac.exp_divisors(f):
        t.tested += 1
        t.le((("n", n), ("d", d.value)), math.log(ac.big_omega(d) / ac.big_omega(f)), en.divergence(f, d))


@_register("P-DIV2.1-radical", "D(n||gamma(n)) = H(gamma(n)) - H(n) = log omega(n) - H(n)",
           bound="n_max", outer=_n_range, n_min=2, n_max=10_000)
def _p_div21(n, ctx, params, t):
    f = factor(n)
    rad = ac.radical(f)
    closed = en.divergence_to_radical(f)
    t.tested += 1
    t.eq((("n", n), ("path", "definition")), en.divergence(f, rad), closed)
    t.eq((("n", n), ("path", "radical-entropy")), en.entropy(rad) - en.entropy(f), closed)
    t.eq((("n", n), ("path", "shannon")), math.log(ac.omega(f)) - en.entropy_shannon(f), closed)


def _equal_omega_pairs(m, table, params, t, check_pair):
    # ordered pairs (m, n) with omega(m) = omega(n), grouped once per shard
    fm = table[m]
    w = ac.omega(fm)
    cache: dict[tuple, Any] = {}
    for n in range(params["n_min"], params["n_max"] + 1):
        fn = table[n]
        if ac.omega(fn) != w:
            continue
        key = (fm.exponents, fn.exponents)
        if key not in cache:
            cache[key] = check_pair(fm, fn)
        t.tested += 1
        for tag, lhs, rhs, kind in cache[key]:
            getattr(t, kind)((("m", m), ("n", n), ("check", tag)), lhs, rhs)


@_register("P-2.1-identity", "D(n||m) = H(m) - H(n) + sum (b_i/Omega(m) - a_i/Omega(n)) log b_i",
           bound="n_max", outer=_n_range, prepare=lambda p: _factor_table(p["n_max"]),
           n_min=2, n_max=1_000)
def _p21(m, table, params, t):
    _equal_omega_pairs(m, table, params, t, lambda a, b: [
        ("identity", en.divergence_entropy_form(a, b), en.divergence(a, b), "eq"),
    ])


@_register("P-GIBBS", "D(n||m) >= 0 whenever omega(n) = omega(m)",
           bound="n_max", outer=_n_range, prepare=lambda p: _factor_table(p["n_max"]),
           n_min=2, n_max=2_000)
def _p_gibbs(m, table, params, t):
    _equal_omega_pairs(m, table, params, t, lambda a, b: [
        ("nonnegative", 0.0, en.divergence(a, b), "le"),
    ])


@_register("P-EQUAL-EXP-div", "identical exponent vectors give D(n||m) = D(m||n) = 0",
           bound="n_max", outer=_n_range, prepare=lambda p: _factor_table(p["n_max"]),
           n_min=2, n_max=600)
def _p_equal_int(m, table, params, t):
    fm = table[m]
    for n in range(params["n_min"], params["n_max"] + 1):
        fn = table[n]
        if fn.exponents != fm.exponents:
            continue
        t.tested += 1
        t.eq((("m", m), ("n", n), ("direction", "m||n")), en.divergence(fm, fn), 0.0)
        t.eq((("m", m), ("n", n), ("direction", "n||m")), en.divergence(fn, fm), 0.0)


@_register("P-REM-2.2-shift", "D(n p^a || n p^b) closed form matches the definition",
           bound="n_max", outer=_n_range, n_min=2, n_max=2_000, alpha_max=6)
def _p_shift(n, ctx, params, t):
    f = factor(n)
    p = _coprime_prime(f)
    amax = params["alpha_max"]
    facs = {a: factor(n * p**a) for a in range(1, amax + 1)}
    for a, b in product(range(1, amax + 1), repeat=2):
        t.tested += 1
        t.eq((("n", n), ("alpha", a), ("beta", b)),
             en.shift_divergence(f, a, b), en.divergence(facs[a], facs[b]))


@_register("P-2.2-robin", "D(n||gamma(n)) + H(n) <= log log n - log log log n + log c1",
           bound="n_max", outer=_n_range, n_min=3, n_max=1_000_000)
def _p22(n, ctx, params, t):
    f = factor(n)
    t.tested += 1
    t.le((("n", n),), en.divergence_to_radical(f) + en.entropy(f), en.robin_rhs(n))


def _ladder(params):
    return [tuple(params["ladder"])]


@_register("P-2.3-decay", "log(omega(n)+1) - D(n p^a || gamma(n) p) decays to 0 along an exponent ladder",
           bound=None, outer=_ladder, n=12, p=10_007, ladder=(10, 100, 1_000, 10_000), threshold=0.01)
def _p23(ladder, ctx, params, t):
    n, p = params["n"], params["p"]
    fn = factor(n)
    if p in fn.primes or not ac.is_prime(p):
        raise DomainError("p must be a prime coprime to n")
    vals = []
    for a in ladder:
        f = fn * Factorization(((p, a),))
        vals.append(abs(math.log(ac.omega(fn) + 1) - en.divergence(f, ac.radical(f))))
    for (a0, v0), (a1, v1) in zip(zip(ladder, vals), zip(ladder[1:], vals[1:])):
        t.tested += 1
        t.lt((("n", n), ("p", p), ("alpha", a1), ("check", f"below alpha={a0}")), v1, v0)
    t.tested += 1
    t.lt((("n", n), ("p", p), ("alpha", ladder[-1]), ("check", "threshold")), vals[-1], params["threshold"])


def _drad(f: Factorization) -> float:
    return en.divergence_to_radical(f)


@_register("P-2.4-pkq", "m = p^k q, n = p^k t: D(m||g(m)) + D(n||g(n)) < log(4/3) + D(mn||g(mn))",
           bound="p_max", outer=lambda p: list(permutations(ac.primes_up_to(p["p_max"]), 3)),
           p_max=50, k_max=6)
def _p24(pqt, ctx, params, t):
    p, q, r = pqt
    if q > r:
        return  # m and n are symmetric in q, t
    for k in range(1, params["k_max"] + 1):
        fm = Factorization.from_dict({p: k, q: 1})
        fn = Factorization.from_dict({p: k, r: 1})
        t.tested += 1
        t.lt((("p", p), ("q", q), ("t", r), ("k", k)),
             _drad(fm) + _drad(fn), math.log(4 / 3) + _drad(fm * fn))


@_register("P-2.5-coprime-k", "m = p1^k p2, n = q1^k q2: D(m||g(m)) + D(n||g(n)) >= D(mn||g(mn)), equality iff k = 1",
           bound="p_max", outer=lambda p: list(permutations(ac.primes_up_to(p["p_max"]), 4)),
           p_max=30, k_max=6)
def _p25(quad, ctx, params, t):
    p1, p2, q1, q2 = quad
    for k in range(1, params["k_max"] + 1):
        fm = Factorization.from_dict({p1: k, p2: 1})
        fn = Factorization.from_dict({q1: k, q2: 1})
        lhs, rhs = _drad(fm) + _drad(fn), _drad(fm * fn)
        inputs = (("p1", p1), ("p2", p2), ("q1", q1), ("q2", q2), ("k", k))
        t.tested += 1
        if k == 1:
            t.exact(inputs, lhs, rhs)
        else:
            t.lt(inputs, rhs, lhs)


def _thm_prepare(params):
    table = _factor_table(params["n_max"])
    ok = []
    for n in range(2, params["n_max"] + 1):
        f = table[n]
        w = ac.omega(f)
        if w >= 2 and _drad(f) <= math.log(w / 2):
            ok.append(n)
    return table, ok


@_register("P-THM-2.6", "gcd(m,n)=1 and D(x||g(x)) <= log(omega(x)/2) for x=m,n imply D(m||g(m)) + D(n||g(n)) <= D(mn||g(m)g(n))",
           bound="n_max", outer=lambda p: range(2, p["n_max"] + 1), prepare=_thm_prepare, n_max=5_000)
def _p_thm(m, ctx, params, t):
    table, ok = ctx
    fm = table[m]
    w = ac.omega(fm)
    if w < 2 or _drad(fm) > math.log(w / 2):
        return
    cache: dict[tuple, tuple[float, float]] = {}
    for n in ok:
        if n <= m or math.gcd(m, n) != 1:
            continue
        fn = table[n]
        key = (fm.exponents, fn.exponents)
        if key not in cache:
            rhs = en.divergence(fm * fn, ac.radical(fm) * ac.radical(fn))
            cache[key] = (_drad(fm) + _drad(fn), rhs)
        t.tested += 1
        t.le((("m", m), ("n", n)), *cache[key])


@_register("P-KFREE", "k-free n: log Omega - (omega/Omega)(k-1)log(k-1) <= H(n) <= log omega, and the matching D(n||g(n)) sandwich",
           bound="n_max", outer=_n_range, n_min=2, n_max=10_000, ks=(2, 3, 4))
def _p_kfree(n, ctx, params, t):
    f = factor(n)
    h = en.entropy(f)
    d = en.divergence_to_radical(f)
    for k in params["ks"]:
        if not ac.is_k_free(f, k):
            continue
        lower, upper = en.kfree_entropy_bounds(f, k)
        t.tested += 1
        inputs = (("n", n), ("k", k))
        t.le(inputs + (("check", "H lower"),), lower, h)
        t.le(inputs + (("check", "H upper"),), h, upper)
        t.le(inputs + (("check", "D lower"),), 0.0, d)
        t.le(inputs + (("check", "D upper"),), d, en.kfree_divergence_bound(f, k))


@_register("P-TAU-E", "exp_divisors has tau_e entries, each dividing n with the same prime support; tau matches divisor count",
           bound="n_max", outer=_n_range, n_min=2, n_max=10_000)
def _p_tau_e(n, ctx, params, t):
    f = factor(n)
    divs = ac.exp_divisors(f)
    t.tested += 1
    t.exact((("n", n), ("check", "count")), len(divs), ac.tau_e(f))
    bad = sum(1 for d in divs if n % d.value or ac.omega(d) != ac.omega(f))
    t.exact((("n", n), ("check", "support")), bad, 0)
    brute = len({x for d in range(1, math.isqrt(n) + 1) if n % d == 0 for x in (d, n // d)})
    t.exact((("n", n), ("check", "tau")), ac.tau(n), brute)


@_register("P-4.1-monotone", "alpha >= beta >= Omega e^-H gives H(n p^a) <= H(n p^b); beta <= alpha <= Omega e^-H gives >=",
           bound="n_max", outer=_n_range, n_min=2, n_max=2_000, alpha_max=8)
def _p41(n, ctx, params, t):
    f = factor(n)
    p = _coprime_prime(f)
    amax = params["alpha_max"]
    hs = {a: en.entropy(factor(n * p**a)) for a in range(1, amax + 1)}
    for b in range(1, amax + 1):
        for a in range(b, amax + 1):
            pred = en.compare_exponent_growth(f, a, b)
            t.tested += 1
            inputs = (("n", n), ("alpha", a), ("beta", b))
            if pred is en.Growth.LE:
                t.le(inputs + (("predicted", "<="),), hs[a], hs[b])
            elif pred is en.Growth.GE:
                t.le(inputs + (("predicted", ">="),), hs[b], hs[a])


@_register("P-REM-4.2", "squarefree n, m = n p^a: every e-divisor d of m has H(d) >= H(m)",
           bound="n_max", outer=_n_range, n_min=2, n_max=1_000, alpha_max=6)
def _p_rem42(n, ctx, params, t):
    f = factor(n)
    if not ac.is_k_free(f, 2):
        return
    p = _coprime_prime(f)
    for a in range(1, params["alpha_max"] + 1):
        fm = factor(n * p**a)
        hm = en.entropy(fm)
        for d in ac.exp_divisors(fm):
            t.tested += 1
            t.le((("n", n), ("alpha", a), ("d", d.value)), hm, en.entropy(d))


def _cor_shapes(params):
    out = []
    for r in params["r_values"]:
        for primes in combinations(sorted(params["primes"]), r):
            for exps in product((1, 2), repeat=r):
                out.append((primes, exps))
    return out


@_register("P-COR-4.2", "exponents in {1,2}, r >= 3: H(d_e) <= H(n) for every e-divisor (survey: both directions)",
           bound="r_max", mode=Mode.SURVEY, outer=_cor_shapes, primes=(2, 3, 5, 7), r_values=(3,), r_max=3)
def _p_cor42(shape, ctx, params, t):
    primes, exps = shape
    f = Factorization(tuple(zip(primes, exps)))
    h = en.entropy(f)
    for d in ac.exp_divisors(f):
        hd = en.entropy(d)
        t.tested += 1
        t.le((("n", f.value), ("d", d.value), ("direction", "H(d)<=H(n)")), hd, h)
        t.le((("n", f.value), ("d", d.value), ("direction", "H(n)<=H(d)")), h, hd)


# ---------------------------------------------------------------- ideals

def _field_list(params) -> list[int]:
    return list(params["fields"])


def _principal_outer(params):
    return [(d, m) for d in params["fields"] for m in range(2, params["m_max"] + 1)]


_IDEAL_FIELDS = (-1, -19, 2, 5, -5)


@_register("P-IDEAL-cor-4.3", "ideal exponents in {1,2}, g >= 3: H(d_e) <= H(I) for every e-divisor (survey: both directions)",
           bound="g_max", mode=Mode.SURVEY, outer=lambda p: [(g, e) for g in p["g_values"] for e in product((1, 2), repeat=g)],
           g_values=(3,), g_max=3)
def _p_cor43(shape, ctx, params, t):
    g, exps = shape
    ideal = qi.from_exponents(None, exps)
    h = qi.ideal_entropy(ideal)
    for d in qi.ideal_exp_divisors(ideal):
        hd = qi.ideal_entropy(d)
        t.tested += 1
        t.le((("e", exps), ("b", d.exponents), ("direction", "H(d)<=H(I)")), hd, h)
        t.le((("e", exps), ("b", d.exponents), ("direction", "H(I)<=H(d)")), h, hd)


@_register("P-REM-4.4", "D(I||gamma(I)) + H(I) = log omega(I) for principal ideals",
           bound="m_max", outer=_principal_outer, m_max=5_000, fields=_IDEAL_FIELDS)
def _p_rem44(dm, ctx, params, t):
    d, m = dm
    ideal = qi.factor_principal(qi.make_field(d), m)
    t.tested += 1
    t.eq((("d", d), ("m", m)),
         qi.ideal_divergence(ideal, qi.ideal_radical(ideal)) + qi.ideal_entropy(ideal),
         math.log(ideal.omega))


@_register("P-IDEAL-bound", "0 <= H(I) <= log omega(I) for principal ideals",
           bound="m_max", outer=_principal_outer, m_max=5_000, fields=_IDEAL_FIELDS)
def _p_ideal_bound(dm, ctx, params, t):
    d, m = dm
    ideal = qi.factor_principal(qi.make_field(d), m)
    h = qi.ideal_entropy(ideal)
    t.tested += 1
    t.le((("d", d), ("m", m), ("side", "lower")), 0.0, h)
    t.le((("d", d), ("m", m), ("side", "upper")), h, math.log(ideal.omega))
    t.eq((("d", d), ("m", m), ("side", "shannon")), qi.ideal_entropy_shannon(ideal), h)


@_register("P-IDEAL-tau-e", "ideal_exp_divisors has ideal_tau_e entries; ideal_tau = prod(e_i + 1)",
           bound="m_max", outer=_principal_outer, m_max=5_000, fields=(-1, -19, 5))
def _p_ideal_tau(dm, ctx, params, t):
    d, m = dm
    ideal = qi.factor_principal(qi.make_field(d), m)
    t.tested += 1
    t.exact((("d", d), ("m", m), ("check", "tau_e")), len(qi.ideal_exp_divisors(ideal)), qi.ideal_tau_e(ideal))
    # every divisor exponent vector, counted by brute force
    t.exact((("d", d), ("m", m), ("check", "tau")),
            sum(1 for _ in product(*(range(e + 1) for e in ideal.exponents))), qi.ideal_tau(ideal))


def _field_prime_outer(params):
    return [(d, p) for d in params["fields"] for p in ac.primes_up_to(params["p_max"] - 1)]


@_register("P-IDEAL-efg", "e f g = 2 and sum e_i f_i = 2 for every rational prime in a quadratic field",
           bound="p_max", outer=lambda p: [(d, q) for d in _squarefree_fields(p["d_abs_max"])
                                           for q in ac.primes_up_to(p["p_max"] - 1)],
           p_max=10_000, d_abs_max=50)
def _p_efg(dp, ctx, params, t):
    d, p = dp
    K = qi.make_field(d)
    ram = qi.ramification(K, p)
    ideal = qi.factor_prime_ideal(K, p)
    t.tested += 1
    t.exact((("d", d), ("p", p), ("check", "efg")), ram.e * ram.f * ram.g, 2)
    t.exact((("d", d), ("p", p), ("check", "sum ef")), sum(x.e * x.f for x in ideal.factors), 2)
    t.exact((("d", d), ("p", p), ("check", "g")), ideal.omega, ram.g)


@_register("P-IDEAL-ramification-oracle", "odd p not dividing the discriminant splits iff x^2 = d (mod p) has two roots",
           bound="p_max", outer=lambda p: [(d, q) for d in _squarefree_fields(p["d_abs_max"])
                                           for q in ac.primes_up_to(p["p_max"] - 1) if q > 2],
           p_max=500, d_abs_max=30)
def _p_ram_oracle(dp, ctx, params, t):
    d, p = dp
    K = qi.make_field(d)
    if K.discriminant % p == 0:
        return
    roots = sum(1 for x in range(p) if (x * x - d) % p == 0)
    expected = {2: qi.Splitting.SPLIT, 0: qi.Splitting.INERT}[roots]
    t.tested += 1
    t.exact((("d", d), ("p", p)), qi.ramification(K, p).kind.value, expected.value)


@_register("P-IDEAL-degree-bound", "0 <= H(pO_K) <= log omega(pO_K) <= log 2",
           bound="p_max", outer=_field_prime_outer, p_max=10_000, fields=_IDEAL_FIELDS)
def _p_deg_bound(dp, ctx, params, t):
    d, p = dp
    ideal = qi.factor_prime_ideal(qi.make_field(d), p)
    h = qi.ideal_entropy(ideal)
    lw = math.log(ideal.omega)
    t.tested += 1
    t.le((("d", d), ("p", p), ("check", "H >= 0")), 0.0, h)
    t.le((("d", d), ("p", p), ("check", "H <= log omega")), h, lw)
    t.le((("d", d), ("p", p), ("check", "log omega <= log n")), lw, math.log(2))


@_register("P-IDEAL-galois-H", "quadratic fields are Galois: H(pO_K) = log omega(pO_K)",
           bound="p_max", outer=_field_prime_outer, p_max=1_000, fields=(-1, -19, 5))
def _p_galois_h(dp, ctx, params, t):
    d, p = dp
    ideal = qi.factor_prime_ideal(qi.make_field(d), p)
    t.tested += 1
    t.eq((("d", d), ("p", p)), qi.ideal_entropy(ideal), math.log(ideal.omega))


@_register("P-IDEAL-inert-ramified", "p inert or ramified: H(pO_K) = 0",
           bound="p_max", outer=_field_prime_outer, p_max=10_000, fields=_IDEAL_FIELDS)
def _p_inert_ram(dp, ctx, params, t):
    d, p = dp
    K = qi.make_field(d)
    if qi.ramification(K, p).kind is qi.Splitting.SPLIT:
        return
    t.tested += 1
    t.exact((("d", d), ("p", p)), qi.ideal_entropy(qi.factor_prime_ideal(K, p)), 0.0)


def _galois_div_prepare(params):
    return {
        d: {p: qi.factor_prime_ideal(qi.make_field(d), p) for p in ac.primes_up_to(params["p_max"] - 1)}
        for d in params["fields"]
    }


@_register("P-IDEAL-galois-div", "quadratic K, distinct p, q with omega(pO_K) = omega(qO_K): D(pO_K||qO_K) = 0",
           bound="p_max", outer=_field_prime_outer, prepare=_galois_div_prepare,
           p_max=1_000, fields=(-1, -19, 5))
def _p_galois_div(dp, table, params, t):
    d, p = dp
    ip = table[d][p]
    for q, iq in table[d].items():
        if q == p or iq.omega != ip.omega:
            continue
        t.tested += 1
        t.eq((("d", d), ("p", p), ("q", q)), qi.ideal_divergence(ip, iq), 0.0)


@_register("P-IDEAL-equal-exp", "ideals with equal exponent vectors: D(I||J) = D(J||I) = 0",
           bound="e_max", outer=lambda p: [e for g in range(1, p["g_max"] + 1)
                                           for e in product(range(1, p["e_max"] + 1), repeat=g)],
           e_max=4, g_max=4)
def _p_equal_exp(exps, ctx, params, t):
    g = len(exps)
    ideal = qi.from_exponents([(2 * i + 3, 1) for i in range(g)], exps)
    other = qi.from_exponents([(5 * i + 7, 2) for i in range(g)], exps)
    t.tested += 1
    t.eq((("e", exps), ("direction", "I||J")), qi.ideal_divergence(ideal, other), 0.0)
    t.eq((("e", exps), ("direction", "J||I")), qi.ideal_divergence(other, ideal), 0.0)


def _gaussian_inert_outer(params):
    return [m for m in range(3, params["m_max"] + 1, 2)
            if all(p % 4 == 3 for p in factor(m).primes)]


@_register("P-IDEAL-integer-consistency", "m with all primes = 3 (mod 4): H(mZ[i]) = H(m)",
           bound="m_max", outer=_gaussian_inert_outer, m_max=5_000)
def _p_int_consistency(m, ctx, params, t):
    t.tested += 1
    t.eq((("m", m),), qi.ideal_entropy(qi.factor_principal(qi.make_field(-1), m)), en.entropy(factor(m)))


# ---------------------------------------------------------------- running

def list_properties() -> list[PropertyId]:
    return [spec.pid for spec in _CATALOG.values()]


def get_property(pid: str) -> PropertyId:
    return _spec(pid).pid


def _spec(pid: str) -> _Spec:
    try:
        return _CATALOG[pid]
    except KeyError:
        raise DomainError(f"unknown property {pid!r}") from None


def resolve_params(pid: str, cfg: ScanConfig) -> dict[str, Any]:
    """Property defaults with the config's overrides applied."""
    spec = _spec(pid)
    params = dict(spec.pid.defaults)
    if cfg.n_max is not None and spec.pid.bound_key is not None:
        params[spec.pid.bound_key] = cfg.n_max
    overrides = {
        "n_min": cfg.n_min,
        "primes": cfg.primes,
        "k_max": cfg.k_max,
        "alpha_max": cfg.alpha_max,
        "fields": cfg.fields,
    }
    for key, value in overrides.items():
        if value is not None and key in params:
            params[key] = value
    for key, value in cfg.extra.items():
        if key not in params:
            raise DomainError(f"{pid} has no parameter {key!r}")
        params[key] = value
    for sizes, top in (("r_values", "r_max"), ("g_values", "g_max")):
        if sizes in params:
            params[sizes] = _sizes_up_to(params[sizes], params[top])
    return params


def _sizes_up_to(sizes: Sequence[int], top: int) -> tuple[int, ...]:
    """Clip ``sizes`` at ``top``; a larger ``top`` extends them one by one."""
    kept = [s for s in sizes if s <= top]
    start = max(kept, default=min(sizes) - 1) + 1
    return tuple(kept) + tuple(range(max(start, 1), top + 1))


@lru_cache(maxsize=8)
def _context(pid: str, frozen: tuple) -> Any:
    # one prepared table per process and parameter set, reused across shards
    return _spec(pid).prepare(dict(frozen))


def _scan_shard(pid: str, params: Mapping[str, Any], lo: int, hi: int, tol: float):
    spec = _spec(pid)
    items = spec.outer(params)[lo:hi]
    ctx = _context(pid, tuple(sorted(params.items()))) if spec.prepare else None
    tally = Tally(tol)
    for item in items:
        spec.check(item, ctx, params, tally)
    return tally.tested, tally.violations



def _shard_bounds(total: int) -> list[tuple[int, int]]:
    count = max(1, min(SHARDS, total))
    edges = [total * i // count for i in range(count + 1)]
    return [(a, b) for a, b in zip(edges, edges[1:]) if b > a]


def run_property(pid: str, cfg: ScanConfig | None = None, *, executor=None) -> ScanReport:
    cfg = cfg or ScanConfig()
    spec = _spec(pid)
    mode = cfg.mode or spec.pid.mode_default
    params = resolve_params(pid, cfg)
    start = time.perf_counter()
    total = len(spec.outer(params))
    shards = _shard_bounds(total)
    tested = 0
    violations: list[Violation] = []
    if executor is None and cfg.jobs > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return run_property(pid, cfg, executor=pool)
    if executor is None:
        results = (_scan_shard(pid, params, lo, hi, cfg.tolerance) for lo, hi in shards)
    else:
        futures = [executor.submit(_scan_shard, pid, params, lo, hi, cfg.tolerance) for lo, hi in shards]
        results = (fut.result() for fut in futures)
    for shard_tested, shard_violations in results:
        tested += shard_tested
        violations.extend(shard_violations)
    violations.sort(key=lambda v: (v.key, v.lhs, v.rhs))
    count = len(violations)
    if mode is Mode.SURVEY:
        verdict = Verdict.SURVEYED
    else:
        verdict = Verdict.VIOLATED if count else Verdict.HOLDS
    elapsed = (time.perf_counter() - start) * 1000.0
    return ScanReport(pid, spec.pid.claim, mode, verdict, tested, count,
                      violations[: cfg.cap], elapsed, params)


def run_all(cfg: ScanConfig | None = None, ids: Iterable[str] | None = None,
            per_property: Callable[[PropertyId], ScanConfig] | None = None) -> list[ScanReport]:
    """Run several properties, sharing one process pool when ``cfg.jobs > 1``."""
    cfg = cfg or ScanConfig()
    pids = list(ids) if ids is not None else [p.id for p in list_properties()]
    for pid in pids:
        _spec(pid)
    configs = [per_property(get_property(pid)) if per_property else cfg for pid in pids]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return [run_property(pid, c, executor=pool) for pid, c in zip(pids, configs)]
    return [run_property(pid, c) for pid, c in zip(pids, configs)]


def search_counterexamples(pid: str, cfg: ScanConfig | None = None, cap: int = DEFAULT_CAP) -> list[Violation]:
    cfg = replace(cfg or ScanConfig(), mode=Mode.SURVEY, cap=cap)
    return run_property(pid, cfg).violations
