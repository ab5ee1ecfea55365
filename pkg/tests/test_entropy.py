"""Expected values below were evaluated from the raw definitions with mpmath
at 50 digits, independently of the closed forms under test."""

import math

import pytest
from hypothesis import given, strategies as st

from entropia.arith_core import DomainError, Factorization, exp_divisors, factor, is_k_free, omega, radical
from entropia.entropy import (
    ROBIN,
    ExponentDistribution,
    Growth,
    append_prime_power_entropy,
    compare_exponent_growth,
    coprime_gap,
    coprime_gap_alt,
    divergence,
    divergence_entropy_form,
    divergence_to_radical,
    entropy,
    entropy_shannon,
    entropy_threshold,
    kfree_divergence_bound,
    kfree_entropy_bounds,
    kl_divergence,
    robin_rhs,
    shannon_entropy,
    shift_divergence,
    to_base,
)

LOG2, LOG3 = math.log(2), math.log(3)
F = factor
TOL = 1e-12


def test_shannon_entropy_basic():
    assert shannon_entropy(ExponentDistribution((1.0,))) == 0.0
    assert shannon_entropy(ExponentDistribution((0.5, 0.5))) == pytest.approx(LOG2, abs=TOL)
    assert shannon_entropy(ExponentDistribution((0.75, 0.25))) == pytest.approx(0.5623351446188083, abs=TOL)


@pytest.mark.parametrize("weights", [(0.5, 0.4), (0.7, 0.4), (1.2,), (0.0, 1.0), ()])
def test_distribution_rejects_bad_weights(weights):
    with pytest.raises(DomainError):
        ExponentDistribution(weights)


@given(st.lists(st.integers(1, 50), min_size=1, max_size=8))
def test_distribution_sums_to_one(exps):
    d = ExponentDistribution.from_exponents(exps)
    assert math.fsum(d.weights) == pytest.approx(1.0, abs=1e-12)
    assert 0 <= shannon_entropy(d) <= math.log(len(exps)) + TOL


@pytest.mark.parametrize("n, expected", [
    (10, LOG2),
    (100, LOG2),
    (8, 0.0),
    (40, 0.5623351446188083),
    (12, LOG3 - 2 / 3 * LOG2),
    (1, 0.0),
    (180, math.log(5) - 4 / 5 * LOG2),
    (60, math.log(4) - 0.5 * LOG2),
])
def test_entropy_examples(n, expected):
    assert entropy(F(n)) == pytest.approx(expected, abs=TOL)
    assert entropy_shannon(F(n)) == pytest.approx(expected, abs=TOL)


def test_entropy_of_40_is_not_the_printed_value():
    assert entropy(F(40)) == pytest.approx(0.25 * math.log(4**4 / 3**3), abs=TOL)
    assert math.log(4**4 / 3**3) == pytest.approx(2.2493, abs=1e-4)


def test_prime_powers_have_zero_entropy_exactly():
    for p in (2, 3, 97):
        for a in range(1, 21):
            assert entropy(Factorization(((p, a),))) == 0.0


def test_squarefree_entropy_is_log_omega():
    for n in (6, 30, 210, 2310, 30030):
        assert entropy(F(n)) == pytest.approx(math.log(omega(F(n))), abs=TOL)


@given(st.integers(2, 10**6), st.integers(2, 4))
def test_power_invariance(n, a):
    assert entropy(F(n) ** a) == pytest.approx(entropy(F(n)), abs=TOL)


@given(st.integers(2, 10**9))
def test_entropy_bounds(n):
    f = F(n)
    assert -TOL <= entropy(f) <= math.log(omega(f)) + TOL


@pytest.mark.parametrize("n, m, expected", [
    (100, 200, 0.02041099726012756),
    (12, 18, LOG2 / 3),
    (30, 30, 0.0),
])
def test_divergence_examples(n, m, expected):
    assert divergence(F(n), F(m)) == pytest.approx(expected, abs=TOL)


def test_divergence_100_200_is_natural_log_not_printed():
    assert divergence(F(100), F(200)) == pytest.approx(0.5 * math.log(25 / 24), abs=TOL)
    assert 0.5 * math.log10(25 / 24) == pytest.approx(0.0088, abs=1e-4)


@pytest.mark.parametrize("n, m", [(100, 30), (1, 2), (2, 1)])
def test_divergence_domain(n, m):
    with pytest.raises(DomainError):
        divergence(F(n), F(m))


def test_divergence_matches_kl_of_distributions():
    for n, m in [(12, 18), (40, 135), (360, 7 * 11**2 * 13**3), (2**5 * 3, 5 * 7**4)]:
        p, q = ExponentDistribution.of(F(n)), ExponentDistribution.of(F(m))
        assert divergence(F(n), F(m)) == pytest.approx(kl_divergence(p, q), abs=TOL)


def test_explicit_pairing():
    # 12 = 2^2 3, 18 = 2 3^2; swapping the match makes the vectors equal
    assert divergence(F(12), F(18), pairing=[1, 0]) == pytest.approx(0.0, abs=TOL)
    with pytest.raises(DomainError):
        divergence(F(12), F(18), pairing=[0, 0])


def test_divergence_is_asymmetric():
    assert divergence(F(24), F(36)) != pytest.approx(divergence(F(36), F(24)), abs=1e-6)


exps = st.lists(st.integers(1, 12), min_size=1, max_size=5)


def _from_exps(es, offset=0):
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29][offset:]
    return Factorization(tuple(zip(primes, es)))


@given(st.integers(1, 5).flatmap(lambda r: st.tuples(
    st.lists(st.integers(1, 12), min_size=r, max_size=r),
    st.lists(st.integers(1, 12), min_size=r, max_size=r))))
def test_gibbs_and_entropy_form(pair):
    a, b = pair
    fn, fm = _from_exps(a), _from_exps(b, 5)
    d = divergence(fn, fm)
    assert d >= -TOL
    assert divergence_entropy_form(fn, fm) == pytest.approx(d, abs=1e-12)


@pytest.mark.parametrize("n, expected", [(30, 0.0), (90, 0.05889151782819173), (8, 0.0)])
def test_divergence_to_radical(n, expected):
    f = F(n)
    assert divergence_to_radical(f) == pytest.approx(expected, abs=TOL)
    assert divergence(f, radical(f)) == pytest.approx(expected, abs=TOL)


def test_divergence_to_radical_rejects_one():
    with pytest.raises(DomainError):
        divergence_to_radical(F(1))


def test_divergence_bound_over_e_divisors():
    for n in range(2, 3000):
        f = F(n)
        for d in exp_divisors(f):
            assert divergence(f, d) >= math.log(sum(d.exponents) / sum(f.exponents)) - TOL


@pytest.mark.parametrize("n, alpha, expected", [
    (15, 2, 1.0397207708399180),
    (15, 1, LOG3),
    (4, 2, LOG2),
])
def test_append_prime_power(n, alpha, expected):
    assert append_prime_power_entropy(F(n), alpha) == pytest.approx(expected, abs=TOL)


def test_append_prime_power_against_direct():
    for n in range(2, 400):
        f = F(n)
        p = next(q for q in (2, 3, 5, 7, 11) if n % q)
        for a in range(1, 7):
            assert append_prime_power_entropy(f, a) == pytest.approx(entropy(F(n * p**a)), abs=TOL)


def test_append_prime_power_rejects_one():
    with pytest.raises(DomainError):
        append_prime_power_entropy(F(1), 2)


@pytest.mark.parametrize("m, n, expected", [
    (4, 9, LOG2),
    (2, 3, LOG2),
    (12, 35, 0.0025176913553641230),
])
def test_coprime_gap(m, n, expected):
    assert coprime_gap(F(m), F(n)) == pytest.approx(expected, abs=TOL)
    assert coprime_gap_alt(F(m), F(n)) == pytest.approx(expected, abs=TOL)
    assert entropy(F(m * n)) - entropy(F(m)) - entropy(F(n)) == pytest.approx(expected, abs=TOL)


def test_coprime_gap_unbalanced_pair():
    # unequal Omega on the two sides pins down which sum gets which weight
    m, n = F(3), F(4)
    direct = entropy(F(12))
    assert coprime_gap(m, n) == pytest.approx(direct, abs=TOL)
    assert coprime_gap(n, m) == pytest.approx(direct, abs=TOL)


def test_coprime_gap_rejects_common_factor():
    with pytest.raises(DomainError):
        coprime_gap(F(6), F(9))


@pytest.mark.parametrize("n, a, b, expected", [
    (15, 2, 1, 0.058891517828191727),
    (4, 1, 2, 0.056633012265132491),
    (15, 3, 3, 0.0),
])
def test_shift_divergence(n, a, b, expected):
    assert shift_divergence(F(n), a, b) == pytest.approx(expected, abs=TOL)


def test_shift_divergence_concrete():
    assert shift_divergence(F(4), 1, 2) == pytest.approx(divergence(F(12), F(36)), abs=TOL)
    assert shift_divergence(F(15), 2, 1) == pytest.approx(divergence(F(60), F(30)), abs=TOL)


@pytest.mark.parametrize("n, expected", [
    (3, 2.7829919572510665),
    (16, 1.3251854181422443),
    (10**6, 1.9854016901821693),
])
def test_robin_rhs(n, expected):
    assert robin_rhs(n) == pytest.approx(expected, abs=TOL)


def test_robin_constant():
    assert ROBIN.c1 == 1.38402
    with pytest.raises(DomainError):
        robin_rhs(2)


def test_kfree_bounds_examples():
    assert kfree_entropy_bounds(F(30), 2) == pytest.approx((LOG3, LOG3), abs=TOL)
    lo, hi = kfree_entropy_bounds(F(180), 3)
    assert (lo, hi) == pytest.approx((0.77766129576216600, LOG3), abs=TOL)
    assert lo <= entropy(F(180)) <= hi
    lo, hi = kfree_entropy_bounds(F(8), 4)
    assert (lo, hi) == pytest.approx((0.0, 0.0), abs=TOL)
    with pytest.raises(DomainError):
        kfree_entropy_bounds(F(8), 3)


def test_kfree_divergence_bound():
    for n in range(2, 3000):
        f = F(n)
        for k in (2, 3, 4, 5):
            if is_k_free(f, k):
                assert -TOL <= divergence_to_radical(f) <= kfree_divergence_bound(f, k) + TOL


@pytest.mark.parametrize("n, expected", [(30, 1.0), (12, 1.5874010519681995), (8, 3.0)])
def test_entropy_threshold(n, expected):
    f = F(n)
    assert entropy_threshold(f) == pytest.approx(expected, abs=TOL)
    omega_big = sum(f.exponents)
    assert entropy_threshold(f) == pytest.approx(omega_big * math.exp(-entropy(f)), abs=TOL)


def test_entropy_threshold_product_form():
    for n in range(2, 5000):
        f = F(n)
        big = sum(f.exponents)
        product = math.prod(a ** (a / big) for a in f.exponents)
        assert entropy_threshold(f) == pytest.approx(product, abs=1e-12)


def test_compare_exponent_growth_examples():
    assert compare_exponent_growth(F(15), 2, 1) is Growth.LE
    assert entropy(F(60)) <= entropy(F(30))
    assert compare_exponent_growth(F(8), 2, 1) is Growth.GE
    assert entropy(F(8 * 9)) >= entropy(F(8 * 3))
    assert compare_exponent_growth(F(8), 5, 1) is Growth.INCONCLUSIVE
    assert compare_exponent_growth(F(12), 3, 3) is Growth.LE
    with pytest.raises(DomainError):
        compare_exponent_growth(F(12), 1, 2)


def test_to_base():
    assert to_base(LOG2, "2") == pytest.approx((1.0, "bits"))
    assert to_base(math.log(10), "10") == pytest.approx((1.0, "hartleys"))
    assert to_base(1.0) == (1.0, "nats")
    with pytest.raises(DomainError):
        to_base(1.0, "3")


def test_entropy_rational_structure():
    # Omega * H(n) + sum a log a = Omega log Omega, checked on exact exponents
    for n in (360, 5040, 2**7 * 3**5 * 11):
        f = F(n)
        big = sum(f.exponents)
        lhs = big * entropy(f) + sum(a * math.log(a) for a in f.exponents)
        assert lhs == pytest.approx(big * math.log(big), abs=1e-9)
