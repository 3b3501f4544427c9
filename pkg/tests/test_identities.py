import warnings

import numpy as np
import pytest
from conftest import brute_first_failure
from hypothesis import given, settings, strategies as st

from buchloop.catalog import random_loop, smallest_nonassociative
from buchloop.identities import (
    LAW_NAMES,
    NotMInverse,
    SampledModeOnExhaustiblySmallTable,
    SeedRequired,
    UnknownLaw,
    buchsteiner_via_autotopisms,
    buchsteiner_via_conjugation,
    check_identity,
    element_properties,
    evaluates_to_violation,
    get_law,
    minverse_suite,
)

GROUP_LAWS = ["buchsteiner", "buchsteiner_big", "cc", "extra", "moufang", "wip", "wwip",
              "flexible_law", "left_alt_law", "right_alt_law", "m_inverse(1)", "m_inverse(-3)"]


def test_groups_satisfy_every_law(groups16):
    for t in groups16:
        for law in GROUP_LAWS:
            if law == "buchsteiner_big" and t.order > 12:
                continue
            r = check_identity(t, law, mode="exhaustive")
            assert r.passed, (t.label, law, r.witness)


def _scalar_law(t, law):
    L = get_law(law)
    return lambda *xs: bool(L.fn(t, *[np.int64(x) for x in xs]))


@pytest.mark.parametrize("law", ["buchsteiner", "lcc", "rcc", "extra", "moufang", "wip",
                                 "flexible_law", "m_inverse(1)"])
def test_exhaustive_witness_is_lexicographically_first(law, corpus):
    for t in corpus:
        if t.order > 8:
            continue
        L = get_law(law)
        r = check_identity(t, law, mode="exhaustive")
        expect = brute_first_failure(t, _scalar_law(t, law), L.arity)
        assert r.passed == (expect is None)
        assert (tuple(r.witness) if r.witness is not None else None) == expect


def test_witness_independent_of_thread_count(q64):
    a = check_identity(q64, "lcc", mode="exhaustive", threads=1)
    b = check_identity(q64, "lcc", mode="exhaustive", threads=3)
    assert a.witness == b.witness == (8, 32, 8)


def test_cc_reports_failing_half(q64):
    r = check_identity(q64, "cc", mode="exhaustive")
    assert not r.passed and r.detail["failed_half"] == "lcc"
    assert evaluates_to_violation(q64, "cc", r.witness)


def test_sampled_mode_is_deterministic_and_needs_seed(q64):
    with pytest.raises(SeedRequired):
        check_identity(q64, "buchsteiner", mode="sampled")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SampledModeOnExhaustiblySmallTable)
        a = check_identity(q64, "lcc", mode="sampled", samples=5000, seed=7)
        b = check_identity(q64, "lcc", mode="sampled", samples=5000, seed=7)
    assert a.as_dict() == b.as_dict() and not a.passed
    assert a.as_dict()["seed"] == 7


def test_sampled_mode_warns_on_small_tables():
    t = smallest_nonassociative()
    with pytest.warns(SampledModeOnExhaustiblySmallTable):
        check_identity(t, "buchsteiner", mode="sampled", samples=1000, seed=0)


def test_unknown_law():
    t = smallest_nonassociative()
    with pytest.raises(UnknownLaw):
        check_identity(t, "nope")
    with pytest.raises(UnknownLaw):
        get_law("m_inverse(x)")
    assert get_law("m_inverse:2").name == "m_inverse(2)"
    assert "buchsteiner" in LAW_NAMES


def test_q64_law_profile(q64):
    assert check_identity(q64, "buchsteiner", mode="exhaustive").passed
    assert check_identity(q64, "wwip", mode="exhaustive").passed
    assert not check_identity(q64, "extra", mode="exhaustive").passed
    assert not check_identity(q64, "wip", mode="exhaustive").passed


def test_autotopism_route_agrees_with_direct_evaluation(corpus):
    for t in corpus:
        direct = check_identity(t, "buchsteiner", mode="exhaustive").passed
        assert (buchsteiner_via_autotopisms(t) is None) == direct, t.label
        assert (buchsteiner_via_conjugation(t) is None) == direct, t.label


def test_element_properties_in_groups_and_l5(groups16):
    for t in groups16[:12]:
        for a in t.elements:
            f = element_properties(t, a)
            assert all(f[k] for k in ("lip", "rip", "flexible", "left_alt", "right_alt",
                                      "extra", "moufang"))
    t = smallest_nonassociative()
    flags = [element_properties(t, a) for a in t.elements]
    assert flags[0]["extra"]
    assert not all(f["extra"] for f in flags)


def test_minverse_ladder_on_q64(q64):
    recs = minverse_suite(q64, 1)
    assert all(r["passed"] for r in recs)
    names = [r["check"] for r in recs]
    assert "I^4 automorphism" in names and len(names) == len(set(names))


def test_minverse_suite_rejects_non_minverse(q64):
    with pytest.raises(NotMInverse):
        minverse_suite(q64, -1)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 7), st.integers(0, 10 ** 5))
def test_random_loop_witnesses_are_violations(n, seed):
    t = random_loop(n, seed)
    for law in ("buchsteiner", "lcc", "wip"):
        r = check_identity(t, law, mode="exhaustive")
        if not r.passed:
            assert evaluates_to_violation(t, law, r.witness)
