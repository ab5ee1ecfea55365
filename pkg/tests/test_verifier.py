import math
from dataclasses import replace

import pytest

from entropia.arith_core import DomainError, factor
from entropia.entropy import divergence, divergence_to_radical, entropy
from entropia.verifier import (
    Mode,
    ScanConfig,
    Verdict,
    get_property,
    list_properties,
    resolve_params,
    run_all,
    run_property,
    search_counterexamples,
)

REQUIRED = {
    "P-1.1-entropy-bound", "P-1.0-power-invariance", "P-EQ-1.1-1.2", "P-MS5-append",
    "P-EQ-coprime-gap", "P-DIV1-bound", "P-DIV2.1-radical", "P-2.2-robin", "P-2.3-decay",
    "P-2.4-pkq", "P-2.5-coprime-k", "P-THM-2.6", "P-KFREE", "P-4.1-monotone", "P-COR-4.2",
    "P-IDEAL-cor-4.3", "P-REM-4.4", "P-IDEAL-efg", "P-IDEAL-ramification-oracle",
    "P-IDEAL-galois-H", "P-IDEAL-galois-div", "P-IDEAL-tau-e",
}


def test_catalog():
    ids = [p.id for p in list_properties()]
    assert len(ids) >= 15
    assert len(set(ids)) == len(ids)
    assert REQUIRED <= set(ids)


def test_survey_defaults():
    assert get_property("P-COR-4.2").mode_default is Mode.SURVEY
    assert get_property("P-IDEAL-cor-4.3").mode_default is Mode.SURVEY
    assert get_property("P-1.1-entropy-bound").mode_default is Mode.ASSERT


def test_unknown_property():
    with pytest.raises(DomainError):
        get_property("P-NOPE")
    with pytest.raises(DomainError):
        run_property("P-NOPE")


def test_config_validation():
    with pytest.raises(DomainError):
        ScanConfig(tolerance=0)
    with pytest.raises(DomainError):
        ScanConfig(jobs=0)
    with pytest.raises(DomainError):
        resolve_params("P-1.1-entropy-bound", ScanConfig(extra={"bogus": 1}))


def test_resolve_params():
    p = resolve_params("P-1.1-entropy-bound", ScanConfig(n_max=50))
    assert p["n_max"] == 50
    assert resolve_params("P-COR-4.2", ScanConfig(n_max=4))["r_values"] == (3, 4)
    assert resolve_params("P-2.3-decay", ScanConfig(n_max=5))["p"] == 10007


@pytest.mark.parametrize("pid", [p.id for p in list_properties()])
def test_small_range_reports(pid):
    prop = get_property(pid)
    bound = None if prop.bound_key is None else min(prop.defaults[prop.bound_key], 60)
    r = run_property(pid, ScanConfig(n_max=bound))
    assert r.property == pid
    assert r.tested >= 0
    assert r.violation_count >= len(r.violations)
    assert all(v.margin < 0 for v in r.violations)
    if r.mode is Mode.SURVEY:
        assert r.verdict is Verdict.SURVEYED
    elif pid != "P-THM-2.6":
        assert r.verdict is Verdict.HOLDS, r.violations[:3]


def test_determinism_across_jobs():
    ids = ["P-1.1-entropy-bound", "P-THM-2.6", "P-COR-4.2", "P-IDEAL-efg"]
    cfg = ScanConfig(n_max=400)
    one = run_all(cfg, ids)
    many = run_all(replace(cfg, jobs=4), ids)
    strip = lambda rs: [replace(r, elapsed_ms=0.0) for r in rs]
    assert strip(one) == strip(many)


def test_violations_sorted_and_capped():
    full = run_property("P-THM-2.6", ScanConfig(n_max=400, cap=10**6))
    capped = run_property("P-THM-2.6", ScanConfig(n_max=400, cap=5))
    assert capped.violation_count == full.violation_count
    assert capped.violations == full.violations[:5]
    keys = [v.key for v in full.violations]
    assert keys == sorted(keys)


def test_subrange_soundness():
    # a violation found on a smaller range is still reported on a larger one
    small = run_property("P-THM-2.6", ScanConfig(n_max=300, cap=10**6))
    large = run_property("P-THM-2.6", ScanConfig(n_max=600, cap=10**6))
    assert {v.inputs for v in small.violations} <= {v.inputs for v in large.violations}
    assert small.tested <= large.tested


def test_theorem_counterexample_is_real():
    hits = search_counterexamples("P-THM-2.6", ScanConfig(n_max=2000), cap=3)
    assert hits
    first = dict(hits[0].inputs)
    assert (first["m"], first["n"]) == (6, 1925)
    fm, fn = factor(6), factor(1925)
    lhs = divergence_to_radical(fm) + divergence_to_radical(fn)
    rhs = divergence(factor(6 * 1925), factor(6 * 385))
    assert lhs == pytest.approx(0.058891517828191727, abs=1e-12)
    assert rhs == pytest.approx(0.04872750339269381, abs=1e-12)
    assert lhs > rhs


def test_p25_equality_at_k1():
    r = run_property("P-2.5-coprime-k", ScanConfig(n_max=11, k_max=3))
    assert r.verdict is Verdict.HOLDS
    assert r.tested == 5 * 4 * 3 * 2 * 3  # ordered prime quadruples below 11, k = 1..3


def test_mode_override_turns_violations_into_survey():
    r = run_property("P-THM-2.6", ScanConfig(n_max=300, mode=Mode.SURVEY))
    assert r.verdict is Verdict.SURVEYED
    assert r.violation_count > 0


def test_cor42_survey_finds_both_directions():
    r = run_property("P-COR-4.2", ScanConfig(cap=10**6))
    directions = {dict(v.inputs)["direction"] for v in r.violations}
    assert directions == {"H(d)<=H(n)", "H(n)<=H(d)"}
    for v in r.violations:
        d = dict(v.inputs)
        hn, hd = entropy(factor(d["n"])), entropy(factor(d["d"]))
        if d["direction"] == "H(d)<=H(n)":
            assert hd > hn
        else:
            assert hn > hd


def test_tolerance_is_slack_for_non_strict():
    tight = run_property("P-1.1-entropy-bound", ScanConfig(n_max=2000, tolerance=1e-300))
    assert tight.violation_count == 0  # squarefree n reaches log omega exactly
