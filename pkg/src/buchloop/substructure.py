"""Nuclei, centers, subloops, normal closures, quotients and associators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .table import CayleyTable, LoopError, Perm, validate_table


class NotNormal(LoopError):
    pass


class ActionArgNotNuclear(LoopError):
    pass


@dataclass(frozen=True)
class SubloopSet:
    members: tuple[int, ...]
    parent: str = ""

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return int(x) in self._set

    def __iter__(self):
        return iter(self.members)

    @property
    def _set(self) -> frozenset:
        return frozenset(self.members)

    def as_array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)


@dataclass
class QuotientMap:
    source_order: int
    blocks: list[list[int]]
    table: CayleyTable
    projection: np.ndarray = field(repr=False)

    def rep(self, b: int) -> int:
        return self.blocks[b][0]


def _members(S: Iterable[int]) -> np.ndarray:
    return np.unique(np.asarray(list(S), dtype=np.int64))


def is_closed(t: CayleyTable, S) -> bool:
    m = _members(S)
    if 0 not in set(m.tolist()):
        return False
    inside = np.zeros(t.order, dtype=bool)
    inside[m] = True
    sub = np.ix_(m, m)
    return bool(inside[t.mul[sub]].all() and inside[t.ldiv[sub]].all() and inside[t.rdiv[sub]].all())


def subloop(t: CayleyTable, S, parent: str | None = None) -> SubloopSet:
    """Wrap ``S`` as a SubloopSet after checking closure."""
    m = _members(S)
    if not is_closed(t, m):
        raise LoopError("set is not closed under the loop operations")
    return SubloopSet(tuple(int(x) for x in m), t.label if parent is None else parent)


def generate(t: CayleyTable, S) -> SubloopSet:
    """Smallest subloop containing ``S``."""
    inside = np.zeros(t.order, dtype=bool)
    inside[0] = True
    inside[_members(S)] = True
    while True:
        m = np.flatnonzero(inside)
        sub = np.ix_(m, m)
        new = inside.copy()
        for op in (t.mul, t.ldiv, t.rdiv):
            new[op[sub].ravel()] = True
        if new.sum() == inside.sum():
            return subloop(t, m)
        inside = new


def congruence_classes(t: CayleyTable, S) -> np.ndarray:
    """Class labels of the smallest congruence identifying ``S`` with 0.

    For a finite loop, an equivalence compatible with multiplication is
    automatically compatible with both divisions, so closing under
    multiplication alone is enough.
    """
    n = t.order
    S = _members(S)
    rows = [np.zeros(len(S), dtype=np.int64)]
    cols = [S]
    labels = None
    count = None
    while True:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
        k, labels = connected_components(graph, directed=False)
        if count == k:
            return labels
        count = k
        # representative = minimal member of each class
        rep_of_class = np.full(k, n, dtype=np.int64)
        np.minimum.at(rep_of_class, labels, np.arange(n))
        rep = rep_of_class[labels]
        mask = rep != np.arange(n)
        xs = np.flatnonzero(mask)
        if len(xs) == 0:
            return labels
        rx = rep[xs]
        # x ~ rep(x)  =>  xz ~ rep(x)z  and  zx ~ z rep(x)
        rows = [r, t.mul[xs].ravel(), t.mul[:, xs].ravel()]
        cols = [c, t.mul[rx].ravel(), t.mul[:, rx].ravel()]


def normal_closure(t: CayleyTable, S) -> SubloopSet:
    labels = congruence_classes(t, S)
    return subloop(t, np.flatnonzero(labels == labels[0]))


def inn_invariant(t: CayleyTable, S) -> bool:
    """Direct test of invariance under every T_x, L(x,y) and R(x,y)."""
    from .perm import left_inner, middle_inner, right_inner

    m = _members(S)
    inside = np.zeros(t.order, dtype=bool)
    inside[m] = True
    n = t.order
    for x in range(n):
        if not inside[middle_inner(t, x).images[m]].all():
            return False
        for y in range(n):
            if not inside[left_inner(t, x, y).images[m]].all():
                return False
            if not inside[right_inner(t, x, y).images[m]].all():
                return False
    return True


def is_normal(t: CayleyTable, S) -> bool:
    m = _members(S)
    if not is_closed(t, m):
        return False
    return np.array_equal(normal_closure(t, m).as_array(), m)


def subloop_ops(t: CayleyTable, S) -> dict:
    return {
        "generated": generate(t, S),
        "normal_closure": normal_closure(t, S),
        "is_normal": is_normal(t, S),
    }


def quotient(t: CayleyTable, S) -> QuotientMap:
    """Quotient by a normal subloop, with canonical block numbering."""
    m = _members(S)
    labels = congruence_classes(t, m)
    zero_block = np.flatnonzero(labels == labels[0])
    if not np.array_equal(zero_block, m) or not is_closed(t, m):
        raise NotNormal(f"subset of size {len(m)} is not a normal subloop "
                        f"(its normal closure has order {len(zero_block)})")
    n = t.order
    first = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    proj = relabel[labels]
    reps = first[order]
    qtab = proj[t.mul[np.ix_(reps, reps)]]
    blocks = [np.flatnonzero(proj == b).tolist() for b in range(len(reps))]
    qt = validate_table(qtab, label=f"{t.label}/{len(m)}" if t.label else "")
    # projection must be a homomorphism on every pair
    if not np.array_equal(proj[t.mul], qt.mul[proj[:, None], proj[None, :]]):
        raise NotNormal("projection is not a homomorphism")
    return QuotientMap(n, blocks, qt, proj)


# -- nuclei and center ----------------------------------------------------------------

def _nucleus_mask(t: CayleyTable, side: str) -> np.ndarray:
    """Candidates are screened on a fixed strip of rows, then swept fully."""
    M = t.mul
    n = t.order
    screen = np.ones(n, dtype=bool)
    for x in range(0, n, max(1, n // 32)):
        if side == "left":      # a.xy = ax.y, indexed [a, y]
            screen &= (M[:, M[x]] == M[M[:, x], :]).all(axis=1)
        else:
            eq = M[x][M] == M[M[x], :]
            if side == "mid":   # x.ay = xa.y, indexed [a, y]
                screen &= eq.all(axis=1)
            else:               # x.ya = xy.a, indexed [y, a]
                screen &= eq.all(axis=0)
    out = np.zeros(n, dtype=bool)
    for a in np.flatnonzero(screen):
        if side == "left":
            ok = np.array_equal(M[a][M], M[M[a], :])
        elif side == "mid":
            ok = np.array_equal(M[:, M[a]], M[M[:, a], :])
        else:
            ok = np.array_equal(M[:, M[:, a]], M[M, a])
        out[a] = ok
    return out


def nuclei(t: CayleyTable) -> dict[str, SubloopSet]:
    if "nuclei" not in t._cache:
        masks = {s: _nucleus_mask(t, s) for s in ("left", "mid", "right")}
        both = masks["left"] & masks["mid"] & masks["right"]
        t._cache["nuclei"] = {
            "N_left": subloop(t, np.flatnonzero(masks["left"])),
            "N_mid": subloop(t, np.flatnonzero(masks["mid"])),
            "N_right": subloop(t, np.flatnonzero(masks["right"])),
            "N": subloop(t, np.flatnonzero(both)),
        }
    return t._cache["nuclei"]


def nucleus(t: CayleyTable) -> SubloopSet:
    return nuclei(t)["N"]


def commutant_center(t: CayleyTable) -> dict:
    M = t.mul
    comm = np.flatnonzero((M == M.T).all(axis=1))
    N = set(nucleus(t).members)
    Z = [int(a) for a in comm if int(a) in N]
    return {"C": [int(a) for a in comm], "Z": subloop(t, Z)}


# -- associators, commutators, action ---------------------------------------------

def associator_array(t: CayleyTable, x, y, z):
    """``[x,y,z] = (x.yz) \\ (xy.z)``, elementwise on broadcastable arrays."""
    M = t.mul
    return t.ldiv[M[x, M[y, z]], M[M[x, y], z]]


def commutator_array(t: CayleyTable, x, y):
    """``[x,y] = (yx) \\ (xy)``."""
    M = t.mul
    return t.ldiv[M[y, x], M[x, y]]


def action(t: CayleyTable, a: int, x: int, check: bool = True) -> int:
    """``a^x = x \\ (a x)`` for nuclear ``a``."""
    if check and a not in nucleus(t):
        raise ActionArgNotNuclear(f"{a} is not in the nucleus")
    return int(t.ldiv[x, t.mul[a, x]])


def assoc_comm(t: CayleyTable, x: int, y: int, z: int, a: int | None = None) -> dict:
    t._check(x, y, z)
    out = {
        "associator": int(associator_array(t, x, y, z)),
        "commutator": int(commutator_array(t, x, y)),
    }
    if a is not None:
        out["action"] = action(t, a, x)
    return out


def associator_set(t: CayleyTable, elements=None) -> np.ndarray:
    """Distinct associators of all triples drawn from ``elements``."""
    e = np.arange(t.order) if elements is None else np.asarray(elements)
    seen = np.zeros(t.order, dtype=bool)
    M = t.mul
    for x in e:
        yz = M[np.ix_(e, e)]
        lhs = M[x, yz]
        rhs = M[M[x, e][:, None], e[None, :]]
        seen[t.ldiv[lhs, rhs].ravel()] = True
    return np.flatnonzero(seen)


def coset_representatives(t: CayleyTable, S) -> np.ndarray:
    """Minimal element of each left coset ``xS`` (assumes the cosets partition)."""
    m = _members(S)
    done = np.zeros(t.order, dtype=bool)
    reps = []
    for x in range(t.order):
        if not done[x]:
            reps.append(x)
            done[t.mul[x, m]] = True
    return np.array(reps, dtype=np.int64)


def is_associative_table(t: CayleyTable) -> bool:
    return len(associator_set(t)) == 1


def associator_subloop(t: CayleyTable, exhaustive_limit: int = 1 << 24) -> SubloopSet:
    """Smallest normal subloop containing every associator.

    For large tables whose nucleus is normal, only associators of nucleus
    coset representatives are collected; the result is then confirmed by
    checking that the quotient is a group, which forces every associator
    into it.
    """
    n = t.order
    if n ** 3 <= exhaustive_limit:
        A = normal_closure(t, associator_set(t))
    else:
        N = nucleus(t)
        if not is_normal(t, N.members):
            A = normal_closure(t, associator_set(t))
        else:
            reps = coset_representatives(t, N.members)
            A = normal_closure(t, associator_set(t, reps))
    qm = quotient(t, A.members)
    if not is_associative_table(qm.table):
        raise LoopError("quotient by the associator closure is not a group")
    return A


# -- M(Q) and centers of the multiplication groups --------------------------------

def special_subloops(t: CayleyTable, groups=None) -> dict:
    """``M = {a : L_a in RMlt}`` and the centers of LMlt and RMlt."""
    from .perm import mult_groups

    G = groups or mult_groups(t)
    n = t.order
    Mset = [a for a in range(n) if G["RMlt"].contains(t.L(a))]
    via_R = [a for a in range(n) if G["LMlt"].contains(t.R(a))]
    via_T = [a for a in range(n) if G["LMlt_1"].contains(Perm(t.rdiv[t.mul[a], a]))]
    N = nuclei(t)
    lgens = [t.L(x) for x in range(n)]
    rgens = [t.R(x) for x in range(n)]

    def centralizes(p: Perm, gens) -> bool:
        return all(p * g == g * p for g in gens)

    # Z(LMlt) lies among right translations by right-nuclear elements.
    z_lmlt = [b for b in N["N_right"].members
              if G["LMlt"].contains(t.R(b)) and centralizes(t.R(b), lgens)]
    z_rmlt = [b for b in N["N_left"].members
              if G["RMlt"].contains(t.L(b)) and centralizes(t.L(b), rgens)]
    Nm = set(nucleus(t).members)
    Zn = [a for a in Nm if all(t.mul[a, c] == t.mul[c, a] for c in Nm)]
    return {
        "M": Mset,
        "Gamma_via_R": via_R,
        "Gamma_via_T": via_T,
        "Z_LMlt": z_lmlt,
        "Z_RMlt": z_rmlt,
        "Z_N": sorted(Zn),
    }


def gamma_orbit(t: CayleyTable, groups=None) -> list[int]:
    """Orbit of 1 under LMlt n RMlt, found by brute-force intersection (small loops only)."""
    from .perm import mult_groups, naive_closure

    G = groups or mult_groups(t)
    L = naive_closure(t.order, G["LMlt"].subgroup_generators())
    R = naive_closure(t.order, G["RMlt"].subgroup_generators())
    both = L & R
    return sorted({int(np.frombuffer(p, dtype=np.int32)[0]) for p in both})
