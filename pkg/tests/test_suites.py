import pytest

from buchloop.catalog import dihedral, quaternion, random_loop, symmetric
from buchloop.suites import (
    Calc,
    Ctx,
    NotBuchsteiner,
    PreconditionFailed,
    _vector_check,
    calculus_suite,
    overall,
    square_commutator_product,
    theorem_suite,
)


def _failures(records):
    return [r for r in records if not r["passed"]]


def test_theorem_suite_on_q64_is_exhaustive_and_passes(q64):
    recs = theorem_suite(q64)
    assert not _failures(recs)
    assert all(r["mode"] == "exhaustive" for r in recs)
    ids = [r["check"] for r in recs]
    assert len(ids) == len(set(ids))
    for needed in ("inner_map_identity", "left_right_inner_groups_equal", "translation_groups_normal",
                   "nucleus_normal", "center_equals_commutant", "eta_nuclear", "e_map_identities",
                   "isotope_isomorphism", "translation_intersection_central"):
        assert needed in ids


def test_theorem_suite_on_order_32_quotient(small_buchsteiner):
    assert overall(theorem_suite(small_buchsteiner))


@pytest.mark.parametrize("t", [symmetric(3), dihedral(4), quaternion()], ids=lambda t: t.label)
def test_theorem_suite_on_groups(t):
    assert not _failures(theorem_suite(t))


def test_theorem_suite_rejects_non_buchsteiner():
    with pytest.raises(NotBuchsteiner):
        theorem_suite(random_loop(7, 0))


def test_calculus_suite_on_q64(q64):
    recs = calculus_suite(q64)
    assert not _failures(recs)
    assert any(r["check"] == "square_commutator_product" and r["pairs_tested"] > 0 for r in recs)


def test_calculus_suite_on_order_32_quotient(small_buchsteiner):
    assert overall(calculus_suite(small_buchsteiner))


def test_calculus_preconditions():
    with pytest.raises(PreconditionFailed):
        calculus_suite(random_loop(6, 1))


def test_vector_check_detects_false_identity(q64):
    C = Calc(q64)
    ctx = Ctx(q64)
    rec = _vector_check(ctx, "swapped", 3, lambda x, y, z: [C.a(x, y, z), C.a(y, x, z)])
    assert not rec["passed"]
    x, y, z = rec["witness"]
    assert C.a(x, y, z) != C.a(y, x, z)


def test_square_commutator_product_on_constructed_generators(q1024):
    e1, e2 = 64 * 1, 64 * 4
    rec = square_commutator_product(q1024, pairs=[(e1, e2)])
    assert rec["passed"] and rec["pairs_tested"] == 1


def test_theorem_checks_fail_without_the_law(monkeypatch):
    # with the precondition bypassed, a random loop must trip many checks
    import buchloop.suites as suites

    monkeypatch.setattr(suites, "_require_buchsteiner",
                        lambda t, seed: suites.check_identity(t, "buchsteiner", mode="exhaustive"))
    recs = suites.theorem_suite(random_loop(8, 3), include_groups=True)
    failed = {r["check"] for r in recs if not r["passed"]}
    assert {"buch_autotopisms", "inner_map_identity", "e_map_identities",
            "inverse_identities_iii"} & failed
    assert len(failed) >= 8
