"""Batteries of structural checks for Buchsteiner loops.

Every check yields a record ``{"check", "passed", "mode", "witness", ...}``.
Checks over tuples of elements run exhaustively while the tuple count stays
under ``limit``; beyond that they run on a seeded sample.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from .identities import check_identity, element_properties
from .isotopy import left_isotope_table, right_isotope_table, wwip_isomorphism
from .perm import build_group, is_normal as group_is_normal, mult_groups
from .substructure import (
    associator_array,
    associator_subloop,
    commutant_center,
    commutator_array,
    coset_representatives,
    is_associative_table,
    is_closed,
    is_normal,
    nuclei,
    quotient,
    special_subloops,
)
from .table import (
    CayleyTable,
    LoopError,
    bbuch,
    buch,
    is_autotopism,
    m_inverse_transform,
    nuc_left,
    nuc_mid,
    nuc_right,
)


class NotBuchsteiner(LoopError):
    def __init__(self, witness):
        super().__init__(f"loop is not Buchsteiner (witness {witness})")
        self.witness = witness


class PreconditionFailed(LoopError):
    def __init__(self, which: str):
        super().__init__(f"precondition failed: {which}")
        self.which = which


DEFAULT_LIMIT = 1 << 24


def _record(check: str, passed: bool, mode: str = "exhaustive", witness=None, **extra) -> dict:
    rec = {"check": check, "passed": bool(passed), "mode": mode,
           "witness": None if witness is None else [int(w) if isinstance(w, (int, np.integer)) else w
                                                    for w in witness]}
    rec.update(extra)
    return rec


def _inv(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(len(p))
    return out


class Ctx:
    """Shared state for one suite run over a table."""

    def __init__(self, t: CayleyTable, limit: int = DEFAULT_LIMIT, seed: int = 0,
                 sample_size: int = 64):
        self.t = t
        self.n = t.order
        self.M = t.mul
        self.I = t.I.images
        self.J = t.J.images
        self.limit = limit
        self.seed = seed
        self.sample_size = sample_size
        self.ar = np.arange(self.n)
        self._groups = None

    @property
    def groups(self):
        if self._groups is None:
            self._groups = mult_groups(self.t)
        return self._groups

    # -- translations and inner maps as image arrays
    def L(self, x): return self.M[x]
    def R(self, x): return self.M[:, x]
    def Linv(self, x): return self.t.ldiv[x]
    def Rinv(self, x): return self.t.rdiv[:, x]

    def Lxy(self, x, y):
        return self.t.ldiv[self.M[x, y], self.M[x, self.M[y]]]

    def Rxy(self, x, y):
        return self.t.rdiv[self.M[self.M[:, y], x], self.M[y, x]]

    def T(self, x):
        return self.t.rdiv[self.M[x], x]

    def E(self, x):
        return self.M[self.J[x], self.M[x]]

    def eta(self, x):
        return self.M[x, self.J[x]]

    def is_aut(self, p) -> bool:
        return bool((p[self.M] == self.M[p[:, None], p[None, :]]).all())

    def comm(self, f, g):
        """Group commutator f^-1 g^-1 f g on image arrays."""
        return _inv(f)[_inv(g)[f[g]]]

    # -- element sets
    def points(self, arity: int):
        """All tuples if small enough, else a seeded sample of tuples."""
        n = self.n
        if n ** arity <= self.limit:
            return "exhaustive", itertools.product(range(n), repeat=arity)
        rng = np.random.default_rng(self.seed)
        pts = rng.integers(0, n, size=(self.sample_size, arity))
        return "sampled", (tuple(int(v) for v in row) for row in pts)

    def cost_points(self, arity: int, sweep: int):
        """Like ``points`` but accounts for an inner sweep of ``sweep`` evaluations."""
        if self.n ** arity * sweep <= self.limit:
            return "exhaustive", itertools.product(range(self.n), repeat=arity)
        rng = np.random.default_rng(self.seed)
        pts = rng.integers(0, self.n, size=(self.sample_size, arity))
        return "sampled", (tuple(int(v) for v in row) for row in pts)


def _for_all(ctx: Ctx, check: str, arity: int, pred: Callable, sweep: int = 1) -> dict:
    mode, pts = ctx.cost_points(arity, sweep)
    count = 0
    for p in pts:
        count += 1
        if not pred(*p):
            return _record(check, False, mode, p, evaluations=count)
    return _record(check, True, mode, evaluations=count)


def _vector_check(ctx: Ctx, check: str, arity: int, fn: Callable, elements=None) -> dict:
    """``fn`` maps index arrays to a list of arrays that must agree entrywise."""
    n = ctx.n
    els = np.arange(n) if elements is None else np.asarray(elements)
    k = len(els)
    if k ** arity <= ctx.limit:
        grids = np.meshgrid(*[els] * arity, indexing="ij")
        cols = [g.ravel() for g in grids]
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(ctx.seed)
        idx = rng.integers(0, k, size=(arity, min(ctx.limit, 10 ** 6)))
        cols = [els[i] for i in idx]
        mode = "sampled"
    vals = fn(*cols)
    bad = np.zeros(len(cols[0]), dtype=bool)
    for v in vals[1:]:
        diff = v != vals[0]
        bad |= diff.reshape(-1, len(bad)).any(axis=0)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        return _record(check, False, mode, [int(c[i]) for c in cols], evaluations=len(cols[0]))
    return _record(check, True, mode, evaluations=len(cols[0]))


# ---------------------------------------------------------------------------------
# theorem suite
# ---------------------------------------------------------------------------------

def _require_buchsteiner(t: CayleyTable, seed: int):
    r = check_identity(t, "buchsteiner", seed=seed)
    if not r.passed:
        raise NotBuchsteiner(r.witness)
    return r


def theorem_suite(t: CayleyTable, limit: int = DEFAULT_LIMIT, seed: int = 0,
                  include_groups: bool | None = None, include_cc_center: bool = True) -> list[dict]:
    """Structural consequences of the Buchsteiner law, checked on ``t``.

    Permutation-group checks (multiplication groups, their centers) are on by
    default only for tables of order at most 256.
    """
    base = _require_buchsteiner(t, seed)
    ctx = Ctx(t, limit, seed)
    n, M, I, J = ctx.n, ctx.M, ctx.I, ctx.J
    if include_groups is None:
        include_groups = n <= 256
    out: list[dict] = [_record("buchsteiner_law", True, base.mode, evaluations=base.evaluations)]

    # --- equivalent forms of the law
    out.append(_for_all(ctx, "buch_autotopisms", 1,
                        lambda x: is_autotopism(t, buch(t, x))[0], sweep=n * n))
    out.append(_for_all(ctx, "translation_conjugation", 2, lambda x, z: np.array_equal(
        t.ldiv[x, M[M[x], z]], t.rdiv[M[:, M[z, x]], x]), sweep=n))
    out.append(_for_all(ctx, "translation_conjugation_dual", 2, lambda x, y: np.array_equal(
        t.rdiv[M[y, M[:, x]], x], t.ldiv[x, M[M[x, y]]]), sweep=n))
    out.append(_for_all(ctx, "bbuch_autotopisms", 2,
                        lambda x, y: is_autotopism(t, bbuch(t, x, y))[0], sweep=n * n))
    big = check_identity(t, "buchsteiner_big", seed=seed,
                         mode="exhaustive" if n ** 4 <= limit else "sampled",
                         samples=min(10 ** 6, limit))
    out.append(_record("buchsteiner_big_law", big.passed, big.mode, big.witness,
                       evaluations=big.evaluations))
    out.append(_for_all(ctx, "left_right_isotopes_coincide", 1, lambda e: np.array_equal(
        left_isotope_table(t, e), right_isotope_table(t, e)), sweep=n * n))
    out.append(_for_all(ctx, "m_inverse_transform_autotopisms", 1, lambda u: all(
        is_autotopism(t, m_inverse_transform(t, 1, buch(t, u), v))[0]
        for v in ("first", "second")), sweep=2 * n * n))

    # --- inner mappings
    out.append(_for_all(ctx, "inner_map_identity", 2, lambda x, y: (
        np.array_equal(ctx.Rxy(x, y), ctx.comm(ctx.L(x), ctx.R(y)))
        and np.array_equal(ctx.Rxy(x, y), _inv(ctx.Lxy(y, x)))), sweep=n))
    if include_groups:
        G = ctx.groups
        l1 = G["LMlt_1"].subgroup_generators()
        r1 = G["RMlt_1"].subgroup_generators()
        ok = all(G["RMlt_1"].contains(g) for g in l1) and all(G["LMlt_1"].contains(g) for g in r1)
        out.append(_record("left_right_inner_groups_equal", ok,
                           orders=[G["LMlt_1"].order(), G["RMlt_1"].order()]))
        out.append(_record("translation_groups_normal",
                           group_is_normal(G["Mlt"], G["LMlt"]) and group_is_normal(G["Mlt"], G["RMlt"]),
                           orders=[G["Mlt"].order(), G["LMlt"].order(), G["RMlt"].order()]))

    # --- nuclei and center
    nu = nuclei(t)
    Nset = set(nu["N"].members)
    out.append(_record("nuclei_equal", nu["N_left"] == nu["N_mid"] == nu["N_right"]
                       or (nu["N_left"].members == nu["N_mid"].members == nu["N_right"].members),
                       order=len(nu["N"])))
    N_normal = is_normal(t, nu["N"].members)
    rec = _record("nucleus_normal", N_normal, order=len(nu["N"]))
    if include_groups:
        LN = build_group(n, [t.L(a) for a in nu["N"].members])
        RN = build_group(n, [t.R(a) for a in nu["N"].members])
        Mlt = ctx.groups["Mlt"]
        rec["passed"] = bool(N_normal and group_is_normal(Mlt, LN) and group_is_normal(Mlt, RN))
    out.append(rec)
    cz = commutant_center(t)
    out.append(_record("center_equals_commutant", cz["C"] == list(cz["Z"].members),
                       order=len(cz["C"])))
    out.append(_vector_check(ctx, "cyclic_associativity", 3, lambda x, y, z: [
        associator_array(t, x, y, z) == 0,
        associator_array(t, y, z, x) == 0,
        associator_array(t, z, x, y) == 0]))
    out.append(_for_all(ctx, "nuclear_autotopisms", 1, lambda a: (
        is_autotopism(t, nuc_left(t, a))[0] == (a in nu["N_left"])
        and is_autotopism(t, nuc_mid(t, a))[0] == (a in nu["N_mid"])
        and is_autotopism(t, nuc_right(t, a))[0] == (a in nu["N_right"])), sweep=3 * n * n))

    # --- special elements
    def prop_ok(a):
        f = element_properties(t, a)
        six = {f[k] for k in ("lip", "rip", "flexible", "left_alt", "right_alt", "extra")}
        mouf = f["moufang"] == (f["extra"] and int(M[a, a]) in Nset)
        return len(six) == 1 and mouf
    out.append(_for_all(ctx, "element_properties_agree", 1, prop_ok, sweep=4 * n * n))

    # --- inverse maps
    x = np.arange(n)
    Ix, Jx = I[x], J[x]
    sq = lambda a: M[a, a]  # noqa: E731
    tech = {
        "i": (np.array_equal(M[sq(Jx), x], Ix) and np.array_equal(M[x, sq(Ix)], Jx)),
        "ii": np.array_equal(t.rdiv[Ix, x], t.ldiv[x, Jx]),
        "iii": np.array_equal(sq(Jx), sq(Ix)),
        "iv": (np.array_equal(M[Ix, x], M[sq(Ix), sq(x)]) and np.array_equal(M[x, Jx], M[sq(x), sq(Jx)])),
        "v": (np.array_equal(M[Ix, x], M[Jx, J[Jx]]) and np.array_equal(M[x, Jx], M[I[Ix], Ix])),
        "vi": (np.array_equal(M[Ix, M[x, Jx]], Jx) and np.array_equal(M[M[Ix, x], Jx], Ix)),
        "vii": (np.array_equal(M[M[Jx, Ix], x], Jx) and np.array_equal(M[x, M[Jx, Ix]], Ix)),
        "viii": np.array_equal(t.rdiv[Jx, x], t.ldiv[x, Ix]),
        "ix": (np.array_equal(I[Ix], M[M[x, Jx], x]) and np.array_equal(J[Jx], M[x, M[Ix, x]])),
    }
    for k, v in tech.items():
        out.append(_record(f"inverse_identities_{k}", v, evaluations=n))
    out.append(_record("eta_two_sided", np.array_equal(M[Ix, x], M[x, Jx]), evaluations=n))
    out.append(_record("eta_nuclear", all(int(e) in Nset for e in M[x, Jx]), evaluations=n))

    out.append(_for_all(ctx, "diagonal_inner_maps_automorphic", 1,
                        lambda x: ctx.is_aut(ctx.Lxy(x, x)) and ctx.is_aut(ctx.Rxy(x, x)), sweep=2 * n * n))

    def shift(x):
        e = int(ctx.eta(x))
        L, R = ctx.L, ctx.R
        return (np.array_equal(L(I[I[x]]), L(e)[L(x)]) and np.array_equal(R(e)[R(x)], R(J[J[x]]))
                and np.array_equal(L(x)[L(e)], L(J[J[x]])) and np.array_equal(R(x)[R(e)], R(I[I[x]]))
                and np.array_equal(L(x)[R(e)], R(e)[L(x)]) and np.array_equal(R(x)[L(e)], L(e)[R(x)]))
    out.append(_for_all(ctx, "eta_translation_shifts", 1, shift, sweep=n))

    def eta_aut(x):
        e = int(ctx.eta(x))
        Te = ctx.T(e)
        return np.array_equal(Te, ctx.Rxy(x, x)[_inv(ctx.E(x))]) and ctx.is_aut(Te)
    out.append(_for_all(ctx, "eta_middle_map_automorphic", 1, eta_aut, sweep=n * n))

    def nuclear_criterion(a):
        lr = ctx.L(a)[ctx.Rinv(a)]
        return ctx.is_aut(lr) == ctx.is_aut(ctx.T(a)) == (a in Nset)
    out.append(_for_all(ctx, "nuclear_automorphism_criterion", 1, nuclear_criterion, sweep=2 * n * n))

    # --- E_x maps
    def e_checks(x):
        E = ctx.E(x)
        Jx_, Ix_ = int(J[x]), int(I[x])
        ok = np.array_equal(E, _inv(ctx.Rxy(x, Jx_))) and np.array_equal(E, _inv(ctx.comm(ctx.L(x), ctx.R(Jx_))))
        ok = ok and ctx.is_aut(E)
        ok = ok and np.array_equal(ctx.E(Jx_), E) and np.array_equal(ctx.E(Ix_), E)
        for k in range(-4, 5):
            Ik = t.I_power(k).images
            Ik2 = t.I_power(k - 2).images
            Jk = t.I_power(-k).images
            Jk2 = t.I_power(-(k + 2)).images
            ok = ok and E[Ik[x]] == Ik2[x] and E[Jk[x]] == Jk2[x]
        ok = ok and np.array_equal(E, ctx.comm(ctx.Linv(x), ctx.Rinv(x)))
        L, R, Li, Ri = ctx.L(x), ctx.R(x), ctx.Linv(x), ctx.Rinv(x)
        Rxx, Lxx = ctx.Rxy(x, x), ctx.Lxy(x, x)
        ok = ok and np.array_equal(E, L[R[Rxx[Ri[Li]]]]) and np.array_equal(E, R[L[Rxx[Li[Ri]]]])
        Ei = _inv(E)
        ok = ok and np.array_equal(Ei, L[R[Lxx[Ri[Li]]]]) and np.array_equal(Ei, R[L[Lxx[Li[Ri]]]])
        return bool(ok)
    out.append(_for_all(ctx, "e_map_identities", 1, e_checks, sweep=n * n))

    # --- inverse property consequences
    ww = check_identity(t, "wwip", seed=seed)
    out.append(_record("doubly_weak_inverse", ww.passed, ww.mode, ww.witness, evaluations=ww.evaluations))
    out.append(_for_all(ctx, "isotope_isomorphism", 1,
                        lambda x: wwip_isomorphism(t, x, check_buchsteiner=False)["verified"], sweep=n * n))
    lcc = check_identity(t, "lcc", seed=seed)
    rcc = check_identity(t, "rcc", seed=seed)
    out.append(_record("lcc_iff_rcc", lcc.passed == rcc.passed, lcc.mode,
                       lcc=lcc.passed, rcc=rcc.passed))
    sq_nuclear = all(int(M[a, a]) in Nset for a in range(n))
    cc = lcc.passed and rcc.passed
    out.append(_record("cc_square_criterion", (not cc) or sq_nuclear,
                       applicable=cc, squares_nuclear=sq_nuclear))
    wip = check_identity(t, "wip", seed=seed)
    out.append(_record("wip_implies_cc", (not wip.passed) or cc, applicable=wip.passed))

    # --- quotient by the nucleus
    qn = quotient(t, nu["N"].members).table
    qabel = bool(is_associative_table(qn) and (qn.mul == qn.mul.T).all())
    out.append(_record("nucleus_quotient_abelian_group", qabel, quotient_order=qn.order))
    exps = _element_orders(qn)
    out.append(_record("nucleus_quotient_exponent_divides_4", max(exps) in (1, 2, 4) and qabel,
                       exponent=max(exps)))
    out.append(_for_all(ctx, "inner_maps_automorphic", 2,
                        lambda x, y: ctx.is_aut(ctx.Lxy(x, y)) and ctx.is_aut(ctx.Rxy(x, y)),
                        sweep=2 * n))

    def pseudo(x, y):
        c = int(M[t.rdiv[J[y], x], M[x, y]])
        p = ctx.Lxy(x, y)
        iso = right_isotope_table(t, c)
        return (np.array_equal(p[M], iso[p[:, None], p[None, :]])
                and ctx.is_aut(p) == (c in Nset))
    out.append(_for_all(ctx, "inner_map_pseudo_automorphism", 2, pseudo, sweep=3 * n))

    # --- M(Q) and the centers of the translation groups
    if include_groups:
        sp = special_subloops(t, ctx.groups)
        Mset = sp["M"]
        ok_gamma = Mset == sp["Gamma_via_R"] == sp["Gamma_via_T"]
        out.append(_record("translation_intersection_orbit", ok_gamma, order=len(Mset)))
        out.append(_record("translation_intersection_normal",
                           is_closed(t, Mset) and is_normal(t, Mset)))
        ZN = set(sp["Z_N"])
        out.append(_record("translation_intersection_central",
                           set(Mset) <= ZN and sp["Z_LMlt"] == Mset and sp["Z_RMlt"] == Mset,
                           Z_LMlt=len(sp["Z_LMlt"]), Z_RMlt=len(sp["Z_RMlt"])))

    # --- squares times nucleus form a normal subgroup
    S = sorted({int(M[M[a, a], b]) for a in range(n) for b in nu["N"].members})
    Sok = is_closed(t, S) and is_normal(t, S)
    if Sok:
        sub = M[np.ix_(S, S)]
        idx = {v: i for i, v in enumerate(S)}
        from .table import validate_table
        Sg = validate_table(np.vectorize(idx.get)(sub))
        Sok = is_associative_table(Sg)
    out.append(_record("squares_nucleus_subgroup", Sok, order=len(S)))

    if include_cc_center:
        Z = commutant_center(t)["Z"]
        qz = quotient(t, Z.members).table
        r1 = check_identity(qz, "cc", seed=seed)
        out.append(_record("center_quotient_cc", r1.passed, r1.mode, r1.witness,
                           quotient_order=qz.order))
    return out


def _element_orders(t: CayleyTable) -> list[int]:
    """Orders of elements of a power-associative loop via left powers."""
    out = []
    for x in range(t.order):
        k, y = 1, x
        while y != 0:
            y = int(t.mul[y, x])
            k += 1
            if k > t.order:
                break
        out.append(k)
    return out


# ---------------------------------------------------------------------------------
# associator calculus
# ---------------------------------------------------------------------------------

class Calc:
    """Vectorized associator, commutator and action on index arrays."""

    def __init__(self, t: CayleyTable):
        self.t = t
        self.M = t.mul
        self.I = t.I.images

    def a(self, x, y, z):
        return associator_array(self.t, x, y, z)

    def c(self, x, y):
        return commutator_array(self.t, x, y)

    def act(self, u, x):
        """``u^x = x \\ (u x)``."""
        return self.t.ldiv[x, self.M[u, x]]

    def inv(self, x):
        return self.I[x]

    def sq(self, x):
        return self.M[x, x]

    def p(self, *xs):
        """Left-nested product, used for nuclear values."""
        out = xs[0]
        for v in xs[1:]:
            out = self.M[out, v]
        return out


def _calc_identities(C: Calc) -> list[tuple[str, int, Callable]]:
    a, act, inv, sq, p = C.a, C.act, C.inv, C.sq, C.p
    one = lambda x: np.zeros_like(x)  # noqa: E731
    return [
        ("associator_cyclic_action", 3, lambda x, y, z: [act(a(x, y, z), x), inv(a(y, z, x))]),
        ("associator_inverse_rotation", 3, lambda x, y, z: [a(inv(z), x, y), a(x, y, z)]),
        ("associator_rotation_chain", 3, lambda x, y, z: [
            a(x, y, z), a(inv(z), x, y), a(inv(y), inv(z), x), a(inv(x), inv(y), inv(z)),
            a(z, inv(x), inv(y)), a(y, z, inv(x))]),
        ("associator_square_invariance", 3, lambda x, y, z: [
            a(x, y, z), act(a(x, y, z), sq(x)), act(a(x, y, z), sq(y)), act(a(x, y, z), sq(z))]),
        ("associator_action_x", 3, lambda x, y, z: [act(a(x, y, z), x), inv(a(y, z, x))]),
        ("associator_action_z", 3, lambda x, y, z: [act(a(x, y, z), z), inv(a(z, x, y))]),
        ("associator_action_y", 3, lambda x, y, z: [act(a(x, y, z), y), inv(a(x, inv(y), z))]),
        ("associator_inverse_action_x", 3, lambda x, y, z: [act(a(x, inv(y), z), x), inv(a(z, x, y))]),
        ("associator_inverse_action_y", 3, lambda x, y, z: [act(a(x, inv(y), z), y), inv(a(x, y, z))]),
        ("associator_inverse_action_z", 3, lambda x, y, z: [act(a(x, inv(y), z), z), inv(a(y, z, x))]),
        ("associator_product_first", 4, lambda u, v, x, y: [
            a(C.M[u, v], x, y), p(act(a(u, x, y), v), a(v, x, y))]),
        ("associator_product_middle", 4, lambda u, v, x, y: [
            a(x, C.M[u, v], y), p(act(a(x, u, y), v), a(x, v, y))]),
        ("associator_product_last", 4, lambda u, v, x, y: [
            a(x, y, C.M[u, v]), p(act(a(x, y, u), v), a(x, y, v))]),
        ("associator_repeated_symmetry", 2, lambda x, y: [a(x, y, y), a(y, y, x)]),
        ("associator_four_term", 3, lambda x, y, z: [
            p(a(y, z, x), a(x, y, z)), p(a(z, x, y), a(x, inv(y), z))]),
        ("associator_exponents", 3, lambda x, y, z: [
            one(x), sq(a(sq(x), y, z)), sq(a(x, sq(y), z)), sq(a(x, z, sq(y))),
            a(sq(sq(x)), y, z), a(x, sq(sq(y)), z), a(x, y, sq(sq(z)))]),
        ("associator_squares_i_a", 3, lambda x, y, z: [sq(a(x, y, z)), sq(a(y, z, x)), sq(a(z, x, y))]),
        ("associator_squares_i_b", 3, lambda x, y, z: [a(sq(x), y, z), a(y, z, sq(x)), a(z, sq(x), y)]),
        ("associator_squares_ii", 3, lambda x, y, z: [
            a(sq(x), y, z), act(a(sq(x), y, z), x), act(a(sq(x), y, z), y), act(a(sq(x), y, z), z)]),
        ("associator_squares_iii", 3, lambda x, y, z: [
            one(x), a(sq(x), sq(y), z), a(sq(x), y, sq(z)), a(x, sq(y), sq(z))]),
        ("associator_squares_iv", 3, lambda x, y, z: [
            np.stack([act(a(x, y, y), sq(z)), act(a(y, x, y), sq(z))]),
            np.stack([a(x, y, y), a(y, x, y)])]),
        ("associator_pair_i", 2, lambda x, y: [
            np.stack([a(x, x, y), act(a(x, x, y), x), act(a(x, y, x), x), act(a(x, x, y), y),
                      act(a(x, y, x), y)]),
            np.stack([a(y, x, x), inv(a(x, y, x)), inv(a(x, x, y)), inv(a(x, x, y)), inv(a(x, y, x))])]),
        ("associator_pair_ii", 2, lambda x, y: [
            a(sq(x), y, x), a(sq(x), x, y), a(x, sq(x), y), a(x, y, sq(x)), a(y, x, sq(x)), a(y, sq(x), x)]),
        ("associator_pair_iii", 2, lambda x, y: [a(x, y, x), p(a(x, x, y), a(sq(x), x, y))]),
        ("associator_pair_iv", 2, lambda x, y: [
            one(x), a(x, sq(y), x), a(x, x, sq(y)), a(sq(y), x, x), sq(a(sq(x), x, y))]),
        ("associator_pair_v", 2, lambda x, y: [
            act(a(x, x, x), y), p(a(x, x, x), inv(a(x, x, y)), inv(a(x, y, x)))]),
    ]


def _commutator_identities(C: Calc) -> list[tuple[str, int, Callable]]:
    a, c, act, inv, sq, p, M = C.a, C.c, C.act, C.inv, C.sq, C.p, C.M
    return [
        ("commutator_product_rule", 3, lambda x, y, z: [
            c(M[x, y], z), p(act(c(x, z), y), c(y, z), inv(a(x, z, y)), a(x, y, z), a(z, x, y))]),
        ("square_commutator_i", 2, lambda x, y: [
            c(sq(x), y), p(act(c(x, y), x), c(x, y), a(x, y, x))]),
        ("square_commutator_ii", 2, lambda x, y: [
            c(sq(x), M[x, y]), p(act(c(x, y), x), c(x, y), a(x, x, x), inv(a(x, y, x)))]),
        ("square_commutator_iii", 2, lambda x, y: [
            c(M[sq(x), sq(y)], y),
            p(act(c(x, y), M[x, sq(y)]), act(c(x, y), sq(y)), a(y, y, y), a(x, y, x))]),
        ("square_commutator_iv", 2, lambda x, y: [
            c(M[sq(x), sq(y)], x), p(act(c(y, x), y), c(y, x), a(x, x, x), a(y, x, y))]),
        ("square_commutator_v", 2, lambda x, y: [
            c(M[sq(x), sq(y)], M[x, y]),
            p(act(c(x, y), M[x, sq(y)]), act(c(y, x), y), a(x, x, x), a(y, y, y),
              inv(a(x, y, x)), inv(a(y, x, y)))]),
    ]


def _calc_precondition(t: CayleyTable, seed: int):
    r = check_identity(t, "buchsteiner", seed=seed)
    if not r.passed:
        raise PreconditionFailed(f"buchsteiner law (witness {r.witness})")
    N = nuclei(t)["N"]
    if not is_normal(t, N.members):
        raise PreconditionFailed("nucleus is not normal")
    A = associator_subloop(t)
    if not set(A.members) <= set(N.members):
        raise PreconditionFailed("associator subloop is not inside the nucleus")
    return N, A


def calculus_suite(t: CayleyTable, seed: int = 0, perturbations: int = 1000,
                   limit: int = DEFAULT_LIMIT, all_elements_limit: int = 64) -> list[dict]:
    """Associator and commutator identities over nucleus coset representatives.

    Associator identities depend only on nucleus cosets, which is checked first
    (exhaustively for small tables, on seeded perturbations otherwise).
    Commutators are not coset invariant, so commutator identities run over all
    elements when the order is at most ``all_elements_limit``.
    """
    N, A = _calc_precondition(t, seed)
    n = t.order
    reps = coset_representatives(t, N.members)
    rep_of = np.empty(n, dtype=np.int64)
    for r in reps:
        rep_of[t.mul[r, list(N.members)]] = r
    C = Calc(t)
    ctx = Ctx(t, limit, seed)
    out: list[dict] = [_record("calculus_preconditions", True, nucleus_order=len(N),
                               associator_subloop_order=len(A), representatives=len(reps))]

    # representative independence
    if n ** 3 <= limit:
        out.append(_vector_check(ctx, "associator_coset_invariance", 3, lambda x, y, z: [
            C.a(x, y, z), C.a(rep_of[x], rep_of[y], rep_of[z])]))
    else:
        rng = np.random.default_rng(seed)
        pts = rng.integers(0, n, size=(3, perturbations))
        got = C.a(*pts)
        want = C.a(*rep_of[pts])
        bad = np.flatnonzero(got != want)
        out.append(_record("associator_coset_invariance", not len(bad), "sampled",
                           pts[:, bad[0]].tolist() if len(bad) else None,
                           samples=perturbations, seed=seed))
    # I(x) and J(x) share a nucleus coset, so either may serve as the inverse
    J = t.J.images
    out.append(_vector_check(ctx, "inverse_choice_invariance", 3, lambda x, y, z: [
        np.stack([C.a(C.inv(x), y, z), C.a(y, C.inv(x), z), C.a(y, z, C.inv(x))]),
        np.stack([C.a(J[x], y, z), C.a(y, J[x], z), C.a(y, z, J[x])])], reps))

    for name, arity, fn in _calc_identities(C):
        out.append(_vector_check(ctx, name, arity, fn, reps))
    comm_elements = None if n <= all_elements_limit else reps
    for name, arity, fn in _commutator_identities(C):
        out.append(_vector_check(ctx, name, arity, fn, comm_elements))
    out.append(square_commutator_product(t, C))
    return out


def _exponent_two(t: CayleyTable, vals) -> bool:
    v = np.asarray(vals)
    return bool((t.mul[v, v] == 0).all())


def square_commutator_product(t: CayleyTable, C: Calc | None = None, pairs=None) -> dict:
    """Commutators of squares with products of two commuting generators.

    For every commuting pair (e1, e2) whose eight associators have exponent 2,
    ``[e1^(2a1) e2^(2a2), e1^b1 e2^b2]`` equals the product of
    ``[e_i, e_j, e_i]^(a_i b_j)``.
    """
    C = C or Calc(t)
    M, n = t.mul, t.order
    if pairs is None:
        pairs = [(u, v) for u in range(1, n) for v in range(u + 1, n)]
    tested = 0
    for e1, e2 in pairs:
        if M[e1, e2] != M[e2, e1]:
            continue
        e = {1: e1, 2: e2}
        cijk = {(i, j, k): int(C.a(e[i], e[j], e[k])) for i, j, k in itertools.product((1, 2), repeat=3)}
        if not _exponent_two(t, list(cijk.values())):
            continue
        tested += 1
        for a1, a2, b1, b2 in itertools.product((0, 1), repeat=4):
            sq1 = int(M[e1, e1]) if a1 else 0
            sq2 = int(M[e2, e2]) if a2 else 0
            left = int(M[sq1, sq2])
            right = int(M[e1 if b1 else 0, e2 if b2 else 0])
            lhs = int(C.c(left, right))
            rhs = 0
            for i, j in itertools.product((1, 2), repeat=2):
                if {1: a1, 2: a2}[i] and {1: b1, 2: b2}[j]:
                    rhs = int(M[rhs, cijk[(i, j, i)]])
            if lhs != rhs:
                return _record("square_commutator_product", False,
                               witness=[e1, e2, a1, a2, b1, b2], pairs_tested=tested)
    return _record("square_commutator_product", tested > 0, pairs_tested=tested)


def overall(records: Sequence[dict]) -> bool:
    return all(r["passed"] for r in records)
