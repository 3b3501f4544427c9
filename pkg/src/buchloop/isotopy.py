"""Isotopes, the canonical isomorphism onto an isotope, and an isomorphism search."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .table import CayleyTable, LoopError, Perm, validate_table


class NotBuchsteiner(LoopError):
    def __init__(self, witness):
        super().__init__(f"loop is not Buchsteiner (witness {witness})")
        self.witness = witness


@dataclass
class IsotopeResult:
    base: str
    designator: str
    table: CayleyTable
    relabeling: Perm | None = field(default=None)


def right_isotope_table(t: CayleyTable, e: int) -> np.ndarray:
    """``x o y = (x . ye) / e``."""
    M = t.mul
    n = t.order
    return t.rdiv[M[np.arange(n)[:, None], M[np.arange(n)[None, :], e]], e]


def left_isotope_table(t: CayleyTable, e: int) -> np.ndarray:
    """``x o y = e \\ (ex . y)``."""
    M = t.mul
    n = t.order
    return t.ldiv[e, M[M[e, np.arange(n)][:, None], np.arange(n)[None, :]]]


def isotope_at(t: CayleyTable, side: str, e: int) -> IsotopeResult:
    t._check(e)
    if side == "right":
        raw = right_isotope_table(t, e)
    elif side == "left":
        raw = left_isotope_table(t, e)
    else:
        raise ValueError(f"side must be left or right, not {side!r}")
    designator = f"{side}-at-{e}"
    return IsotopeResult(t.label, designator, validate_table(raw, label=f"{t.label}[{designator}]"))


def principal_isotope(t: CayleyTable, a: int, b: int) -> IsotopeResult:
    """``x * y = (x/b) . (a\\y)``, relabeled so that its identity ``ab`` becomes 0."""
    t._check(a, b)
    n = t.order
    raw = t.mul[t.rdiv[np.arange(n), b][:, None], t.ldiv[a, np.arange(n)][None, :]]
    u = int(t.mul[a, b])
    swap = np.arange(n)
    swap[0], swap[u] = u, 0
    table = validate_table(raw, label=f"{t.label}[principal({a},{b})]", relabel_identity=True)
    return IsotopeResult(t.label, f"principal({a},{b})", table, Perm(swap))


def lemma_transport_check(t: CayleyTable, e: int) -> bool:
    """``y -> y e`` maps the right isotope at ``e`` onto the ``(1, e)`` principal isotope."""
    n = t.order
    right = right_isotope_table(t, e)
    star = t.mul[t.rdiv[np.arange(n), e][:, None], np.arange(n)[None, :]]  # (x/e) . y
    Re = t.mul[:, e]
    return bool(np.array_equal(Re[right], star[Re[:, None], Re[None, :]]))


# -- canonical isomorphism ---------------------------------------------------------

def wwip_map(t: CayleyTable, x: int) -> Perm:
    """``alpha_u = L_{I(eta(u))}^-1 I L_u R_u^-1 J`` with ``u = J^4(x)``."""
    J, I, M = t.J.images, t.I.images, t.mul
    u = int(J[J[J[J[x]]]])
    eta = int(M[u, J[u]])
    w = t.rdiv[J, u]          # R_u^-1 J
    w = M[u, w]               # L_u
    w = I[w]                  # I
    return Perm(t.ldiv[I[eta], w])


def wwip_isomorphism(t: CayleyTable, x: int, check_buchsteiner: bool = True) -> dict:
    from .identities import check_identity

    if check_buchsteiner:
        r = check_identity(t, "buchsteiner")
        if not r.passed:
            raise NotBuchsteiner(r.witness)
    t._check(x)
    f = wwip_map(t, x)
    iso = right_isotope_table(t, x)
    a = f.images
    verified = bool(np.array_equal(a[t.mul], iso[a[:, None], a[None, :]]))
    return {"map": f, "verified": verified}


# -- isomorphism search -----------------------------------------------------------

def _invariants(t: CayleyTable) -> np.ndarray:
    """Per-element isomorphism invariants."""
    from .substructure import nucleus

    n = t.order
    M = t.mul
    sq = M[np.arange(n), np.arange(n)]
    # number of distinct elements visited by repeated squaring
    depth = np.zeros(n, dtype=np.int64)
    for x in range(n):
        seen = set()
        y = x
        while y not in seen:
            seen.add(y)
            y = int(sq[y])
        depth[x] = len(seen)
    in_n = np.zeros(n, dtype=np.int64)
    in_n[list(nucleus(t).members)] = 1
    commutes = (M == M.T).sum(axis=1)
    two_sided = (t.I.images == t.J.images).astype(np.int64)
    sq_count = np.bincount(sq, minlength=n)
    return np.stack([depth, in_n, commutes, two_sided, sq_count[np.arange(n)], (sq == 0)], axis=1)


def _generators(t: CayleyTable) -> list[int]:
    from .substructure import generate

    gens: list[int] = []
    inside = {0}
    for x in range(t.order):
        if x not in inside:
            gens.append(x)
            inside = set(generate(t, gens).members)
    return gens


def _extend(t1, t2, phi, used):
    """Close the partial map under the three operations; False on conflict."""
    ops = ((t1.mul, t2.mul), (t1.ldiv, t2.ldiv), (t1.rdiv, t2.rdiv))
    while True:
        known = np.flatnonzero(phi >= 0)
        grew = False
        for o1, o2 in ops:
            src = o1[np.ix_(known, known)].ravel()
            dst = o2[np.ix_(phi[known], phi[known])].ravel()
            # consistency with existing assignments
            have = phi[src]
            if ((have >= 0) & (have != dst)).any():
                return False
            new = have < 0
            if new.any():
                for a, b in zip(src[new].tolist(), dst[new].tolist()):
                    if phi[a] >= 0 and phi[a] != b:
                        return False
                    if phi[a] < 0:
                        if used[b]:
                            return False
                        phi[a] = b
                        used[b] = True
                grew = True
        if not grew:
            return True


def is_isomorphic(t1: CayleyTable, t2: CayleyTable) -> Perm | None:
    """Backtracking search for ``phi`` with ``phi(xy) = phi(x)phi(y)``.

    Candidates for each generator are restricted to elements with equal
    invariants (squaring profile, nucleus membership and a few counts).
    """
    n = t1.order
    if t2.order != n:
        return None
    inv1, inv2 = _invariants(t1), _invariants(t2)
    key1 = [tuple(r) for r in inv1.tolist()]
    key2 = [tuple(r) for r in inv2.tolist()]
    if sorted(key1) != sorted(key2):
        return None
    gens = _generators(t1)

    def search(k, phi, used):
        if k == len(gens):
            return phi if (phi >= 0).all() else None
        g = gens[k]
        if phi[g] >= 0:
            return search(k + 1, phi, used)
        for cand in range(n):
            if used[cand] or key2[cand] != key1[g]:
                continue
            p2, u2 = phi.copy(), used.copy()
            p2[g] = cand
            u2[cand] = True
            if _extend(t1, t2, p2, u2):
                out = search(k + 1, p2, u2)
                if out is not None:
                    return out
        return None

    phi = -np.ones(n, dtype=np.int64)
    used = np.zeros(n, dtype=bool)
    phi[0] = 0
    used[0] = True
    res = search(0, phi, used)
    if res is None:
        return None
    if not np.array_equal(res[t1.mul], t2.mul[res[:, None], res[None, :]]):
        return None
    return Perm(res)
