import numpy as np
import pytest

from buchloop.catalog import abelian, groups_up_to, random_loop, symmetric
from buchloop.isotopy import (
    NotBuchsteiner,
    is_isomorphic,
    isotope_at,
    left_isotope_table,
    lemma_transport_check,
    principal_isotope,
    right_isotope_table,
    wwip_isomorphism,
)
from buchloop.substructure import nuclei, quotient
from buchloop.table import relabel, validate_table


def test_isotopes_are_loops_with_identity_zero(q64):
    for e in (0, 5, 17, 63):
        for side in ("left", "right"):
            r = isotope_at(q64, side, e)
            assert r.table.order == 64 and r.designator == f"{side}-at-{e}"


def test_isotope_side_validation(q64):
    with pytest.raises(ValueError):
        isotope_at(q64, "middle", 1)


def test_left_and_right_isotopes_coincide_on_q64(q64):
    for e in range(64):
        assert np.array_equal(left_isotope_table(q64, e), right_isotope_table(q64, e))


def test_left_and_right_isotopes_differ_somewhere_on_random_loop():
    t = random_loop(7, 0)
    assert any(not np.array_equal(left_isotope_table(t, e), right_isotope_table(t, e))
               for e in range(7))


def test_principal_isotope_records_relabeling():
    t = random_loop(6, 2)
    r = principal_isotope(t, 2, 3)
    u = int(t.mul[2, 3])
    assert r.relabeling(0) == u and r.relabeling(u) == 0
    assert r.table.order == 6


def test_transport_between_isotope_forms(q64):
    assert all(lemma_transport_check(q64, e) for e in range(0, 64, 7))


def test_canonical_isomorphism_on_all_of_q64(q64):
    for x in range(64):
        assert wwip_isomorphism(q64, x)["verified"], x


def test_canonical_isomorphism_requires_buchsteiner():
    with pytest.raises(NotBuchsteiner):
        wwip_isomorphism(random_loop(7, 0), 1)


def test_groups_are_pairwise_non_isomorphic():
    gs = groups_up_to(16)
    for i, a in enumerate(gs):
        for b in gs[i + 1:]:
            if a.order == b.order:
                assert is_isomorphic(a, b) is None, (a.label, b.label)


def test_search_finds_relabelings():
    rng = np.random.default_rng(5)
    for t in [symmetric(3), random_loop(7, 4), abelian(2, 4)]:
        perm = rng.permutation(t.order)
        perm = np.concatenate(([0], [p for p in perm if p != 0]))
        other = validate_table(relabel(t.mul, perm))
        phi = is_isomorphic(t, other)
        assert phi is not None
        assert (phi.images[t.mul] == other.mul[phi.images[:, None], phi.images[None, :]]).all()


def test_nucleus_quotients_isomorphism_types(q64, q1024):
    q1 = quotient(q1024, nuclei(q1024)["N"].members).table
    assert is_isomorphic(q1, abelian(4, 4)) is not None
    assert is_isomorphic(q1, abelian(2, 8)) is None
    q2 = quotient(q64, nuclei(q64)["N"].members).table
    assert is_isomorphic(q2, abelian(4, 2)) is not None
    assert is_isomorphic(q2, abelian(2, 2, 2)) is None


def test_search_finds_isotope_isomorphisms(q64):
    for x in (1, 9, 40):
        iso = validate_table(right_isotope_table(q64, x))
        assert is_isomorphic(q64, iso) is not None
