import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from buchloop.catalog import cyclic, random_loop, smallest_nonassociative, symmetric
from buchloop.table import (
    Autotopism,
    ColNotPermutation,
    DegreeMismatch,
    EntryOutOfRange,
    IdentityNotZero,
    IndexOutOfRange,
    LoopError,
    NoIdentity,
    NotSquare,
    Perm,
    RowNotPermutation,
    build_autotopism,
    commutator,
    format_table,
    inverse_maps,
    is_automorphism,
    is_autotopism,
    parse_table,
    read_table,
    relabel,
    validate_table,
    write_table,
)


def test_validate_rejects_each_defect():
    with pytest.raises(NotSquare):
        validate_table([[0, 1]])
    with pytest.raises(EntryOutOfRange):
        validate_table([[0, 2], [1, 0]])
    with pytest.raises(RowNotPermutation) as e:
        validate_table([[0, 1], [1, 1]])
    assert e.value.args and "1" in str(e.value)
    with pytest.raises(ColNotPermutation):
        validate_table([[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    # Latin square without identity
    with pytest.raises(NoIdentity):
        validate_table([[1, 0, 2], [0, 2, 1], [2, 1, 0]])
    with pytest.raises(IdentityNotZero):
        validate_table([[1, 0], [0, 1]])


def test_relabel_identity_moves_identity_to_zero():
    t = validate_table([[1, 0], [0, 1]], relabel_identity=True)
    assert t.mul.tolist() == [[0, 1], [1, 0]]


def test_division_tables_invert_multiplication(corpus):
    for t in corpus:
        n = t.order
        x = np.arange(n)[:, None]
        y = np.arange(n)[None, :]
        assert (t.mul[x, t.ldiv[x, y]] == y).all()
        assert (t.mul[t.rdiv[y, x], x] == y).all()


def test_tables_are_read_only():
    t = cyclic(3)
    with pytest.raises(ValueError):
        t.mul[0, 0] = 1


def test_inverse_maps_on_small_loop():
    t = smallest_nonassociative()
    for x in t.elements:
        assert t.mul[x, t.I(x)] == 0
        assert t.mul[t.J(x), x] == 0
    d = inverse_maps(t, 2, k=3)
    assert d["I_iter"][0] == d["I"] and d["J_iter"][0] == d["J"]
    assert (t.I_power(3) * t.I_power(-3)).is_identity()


def test_eta_two_sided_flag_in_groups(groups16):
    for t in groups16:
        for x in t.elements:
            e, ok = t.eta(x)
            assert e == 0 and ok


def test_index_out_of_range():
    t = cyclic(4)
    with pytest.raises(IndexOutOfRange):
        t.L(4)
    with pytest.raises(IndexOutOfRange):
        build_autotopism(t, "buch", 7)


def test_perm_algebra():
    f = Perm([1, 2, 0, 3])
    g = Perm([0, 1, 3, 2])
    # (fg)(x) = f(g(x))
    assert [(f * g)(x) for x in range(4)] == [f(g(x)) for x in range(4)]
    assert (f * f.inverse()).is_identity()
    assert f ** 3 == Perm.identity(4)
    assert f ** -1 == f.inverse()
    assert commutator(f, g) == f.inverse() * g.inverse() * f * g
    assert hash(Perm([1, 0])) == hash(Perm([1, 0]))
    assert not Perm([0, 0]).is_bijection() and f.is_bijection()


def test_text_round_trip(tmp_path, corpus):
    for t in corpus[:5] + corpus[-3:]:
        path = tmp_path / "t.tbl"
        write_table(t, path, ["a comment"])
        back = read_table(path)
        assert np.array_equal(back.mul, t.mul)
    raw, comments = parse_table("# c1\n\n2\n0 1\n1 0\n")
    assert comments == ["c1"] and raw.tolist() == [[0, 1], [1, 0]]
    assert format_table(cyclic(2)) == "2\n0 1\n1 0\n"


@pytest.mark.parametrize("text, token", [
    ("", "empty"),
    ("x\n", "'x'"),
    ("2\n0 1\n", "rows"),
    ("2\n0 1\n1 y\n", "'y'"),
    ("2\n0 1 1\n1 0\n", "entries"),
])
def test_parse_errors_name_the_problem(text, token):
    with pytest.raises(LoopError) as e:
        parse_table(text)
    assert token in str(e.value)


def test_autotopism_builders_match_direct_evaluation():
    t = random_loop(6, 3)
    n = t.order
    M = t.mul
    for x in t.elements:
        ok, _ = is_autotopism(t, build_autotopism(t, "buch", x))
        # Buch(x) is an autotopism iff x\(xy.z) = (y.zx)/x for all y, z
        law_ok = all(t.ldiv[x, M[M[x, y], z]] == t.rdiv[M[y, M[z, x]], x]
                     for y in range(n) for z in range(n))
        assert ok == law_ok


def test_is_autotopism_returns_first_failing_pair():
    t = random_loop(7, 1)
    f = Perm(np.roll(np.arange(7), 1))
    a = Autotopism(f, f, f)
    ok, w = is_autotopism(t, a)
    brute = next(((x, y) for x in range(7) for y in range(7)
                  if t.mul[f(x), f(y)] != f(t.mul[x, y])), None)
    assert (ok, w) == (brute is None, brute)


def test_degree_mismatch():
    t = cyclic(3)
    p = Perm.identity(4)
    with pytest.raises(DegreeMismatch):
        is_autotopism(t, Autotopism(p, p, p))


def test_group_automorphisms_and_nuclear_autotopisms():
    t = symmetric(3)
    for a in t.elements:
        # conjugation is an automorphism of a group
        conj = Perm([int(t.mul[t.mul[a, x], t.I(a)]) for x in t.elements])
        assert is_automorphism(t, conj)
        for kind in ("nuc_left", "nuc_mid", "nuc_right", "extra", "moufang", "lcc", "rcc"):
            assert is_autotopism(t, build_autotopism(t, kind, a))[0], kind


def test_unknown_autotopism_kind():
    with pytest.raises(ValueError):
        build_autotopism(cyclic(2), "nope", 0)


@st.composite
def loops(draw, max_order=7):
    n = draw(st.integers(1, max_order))
    seed = draw(st.integers(0, 10 ** 6))
    return random_loop(n, seed)


@settings(max_examples=40, deadline=None)
@given(loops(), st.data())
def test_relabel_is_an_isomorphism(t, data):
    n = t.order
    perm = data.draw(st.permutations(range(n)))
    m2 = relabel(t.mul, perm)
    p = np.asarray(perm)
    assert (p[t.mul] == m2[p[:, None], p[None, :]]).all()


@settings(max_examples=40, deadline=None)
@given(loops())
def test_random_loops_satisfy_axioms(t):
    n = t.order
    assert (t.mul[0] == np.arange(n)).all() and (t.mul[:, 0] == np.arange(n)).all()
    assert validate_table(t.mul.copy()).order == n
