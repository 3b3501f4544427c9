"""Permutation groups with deterministic Schreier–Sims stabilizer chains.

Internally permutations are plain ``int32`` image arrays; :class:`Perm` is the
public wrapper.  Composition is right-to-left, ``(f g)(x) = f(g(x))``, which on
arrays reads ``f[g]``.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .table import CayleyTable, DegreeMismatch, LoopError, Perm

NAIVE_LIMIT = 100_000


class NotASubgroup(LoopError):
    pass


def _arr(p) -> np.ndarray:
    a = p.images if isinstance(p, Perm) else np.asarray(p)
    return a.astype(np.int32, copy=False)


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


class _Level:
    """One level of the chain: base point, strong generators, orbit transversal."""

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[np.ndarray] = []
        # transversal[k] maps `point` to orbit[k]
        self.orbit: list[int] = [point]
        self.where = {point: 0}
        self.transversal: list[np.ndarray] = [np.arange(degree, dtype=np.int32)]
        self.transversal_inv: list[np.ndarray] = [self.transversal[0]]
        self.checked: set[tuple[int, int]] = set()

    def add_gen(self, g: np.ndarray) -> None:
        self.gens.append(g)
        self._extend()

    def _extend(self) -> None:
        # Breadth-first extension of the orbit; only new images are processed.
        queue = deque(range(len(self.orbit)))
        while queue:
            k = queue.popleft()
            beta = self.orbit[k]
            u = self.transversal[k]
            for g in self.gens:
                delta = int(g[beta])
                if delta not in self.where:
                    self.where[delta] = len(self.orbit)
                    self.orbit.append(delta)
                    v = g[u]
                    self.transversal.append(v)
                    self.transversal_inv.append(_inv(v))
                    queue.append(len(self.orbit) - 1)


class PermGroup:
    """A finitely generated permutation group of a given degree.

    The stabilizer chain is built on first use.  Base points are chosen as the
    smallest point moved by the element that needs a new level, so the chain
    is a deterministic function of the generator order.
    """

    def __init__(self, degree: int, generators: Iterable = ()):
        self.degree = int(degree)
        self.generators: list[Perm] = []
        for g in generators:
            g = g if isinstance(g, Perm) else Perm(g)
            if g.degree != self.degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a group of degree {self.degree}")
            self.generators.append(g)
        self._levels: list[_Level] | None = None
        self.reduced_generators: list[Perm] = []

    # -- chain construction -------------------------------------------------
    def _chain(self) -> list[_Level]:
        if self._levels is None:
            self._levels = []
            for g in self.generators:
                self._add_generator(_arr(g))
        return self._levels

    def _sift(self, h: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        levels = self._levels
        for i in range(start, len(levels)):
            lv = levels[i]
            k = lv.where.get(int(h[lv.point]))
            if k is None:
                return h, i
            h = lv.transversal_inv[k][h]
        return h, len(levels)

    def _is_id(self, h: np.ndarray) -> bool:
        return bool((h == np.arange(self.degree, dtype=h.dtype)).all())

    def _add_generator(self, g: np.ndarray) -> bool:
        """Add ``g`` to the chain unless it is already a member."""
        h, j = self._sift(g)
        if j == len(self._levels) and self._is_id(h):
            return False
        self.reduced_generators.append(Perm(g))
        self._complete(self._insert_from(g, 0))
        return True

    def _complete(self, i: int) -> None:
        levels = self._levels
        while i >= 0:
            lv = levels[i]
            found = None
            for k in range(len(lv.orbit)):
                beta = lv.orbit[k]
                u = lv.transversal[k]
                for gi, s in enumerate(lv.gens):
                    if (beta, gi) in lv.checked:
                        continue
                    lv.checked.add((beta, gi))
                    delta = int(s[beta])
                    sch = lv.transversal_inv[lv.where[delta]][s[u]]
                    h, j = self._sift(sch, i + 1)
                    if j < len(levels) or not self._is_id(h):
                        found = h
                        break
                if found is not None:
                    break
            if found is None:
                i -= 1
                continue
            # restart at the deepest level that received the residue
            i = self._insert_from(found, i + 1)

    def _insert_from(self, h: np.ndarray, start: int) -> int:
        """Add ``h`` (fixing base points before ``start``) as a strong generator.

        It joins every level from ``start`` down to the first base point it
        moves, creating a new level if it fixes them all.  Returns that level.
        """
        levels = self._levels
        k = start
        while k < len(levels) and int(h[levels[k].point]) == levels[k].point:
            levels[k].add_gen(h)
            k += 1
        if k == len(levels):
            moved = np.flatnonzero(h != np.arange(self.degree))
            levels.append(_Level(int(moved[0]), self.degree))
        levels[k].add_gen(h)
        return k

    # -- queries --------------------------------------------------------------
    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self._chain()]

    def orbit_lengths(self) -> list[int]:
        return [len(lv.orbit) for lv in self._chain()]

    def order(self) -> int:
        n = 1
        for k in self.orbit_lengths():
            n *= k
        return n

    def contains(self, p) -> bool:
        a = _arr(p)
        if len(a) != self.degree:
            raise DegreeMismatch(f"permutation of degree {len(a)} vs group of degree {self.degree}")
        self._chain()
        h, j = self._sift(a)
        return j == len(self._levels) and self._is_id(h)

    def __contains__(self, p) -> bool:
        return self.contains(p)

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        queue = deque([point])
        gens = [_arr(g) for g in self.generators]
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(g[x])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def stabilizer_of_first_base_point(self) -> "PermGroup":
        """Subgroup fixing ``base[0]``, generated by the level-1 strong generators."""
        levels = self._chain()
        gens = levels[1].gens if len(levels) > 1 else []
        return PermGroup(self.degree, [Perm(g) for g in gens])

    def strong_generators(self) -> list[Perm]:
        seen: dict[bytes, Perm] = {}
        for lv in self._chain():
            for g in lv.gens:
                seen.setdefault(g.tobytes(), Perm(g))
        return list(seen.values())

    def subgroup_generators(self) -> list[Perm]:
        """A generating set of this group, with redundant input generators dropped."""
        self._chain()
        return list(self.reduced_generators)


def build_group(degree: int, generators: Iterable) -> PermGroup:
    G = PermGroup(degree, generators)
    G._chain()
    return G


def naive_closure(degree: int, generators: Sequence, limit: int = NAIVE_LIMIT) -> set[bytes]:
    """All elements of the generated group by breadth-first closure (the oracle)."""
    gens = [_arr(g) for g in generators]
    ident = np.arange(degree, dtype=np.int32)
    seen = {ident.tobytes()}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g[x]
            key = y.tobytes()
            if key not in seen:
                seen.add(key)
                if len(seen) > limit:
                    raise OverflowError(f"closure exceeds {limit} elements")
                queue.append(y)
    return seen


def naive_contains(closure: set[bytes], p) -> bool:
    return _arr(p).astype(np.int32).tobytes() in closure


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    """``H`` normal in ``G``; every generator of ``H`` must already lie in ``G``."""
    hgens = H.subgroup_generators()
    for h in hgens:
        if not G.contains(h):
            raise NotASubgroup(f"generator {h!r} of H is not in G")
    for g in G.subgroup_generators():
        ga = _arr(g)
        gi = _inv(ga)
        for h in hgens:
            if not H.contains(ga[_arr(h)[gi]]):
                return False
    return True


# -- multiplication groups of a loop ------------------------------------------

def left_inner(t: CayleyTable, x: int, y: int) -> Perm:
    """``L(x,y) = L_{xy}^-1 L_x L_y``."""
    m = t.mul
    return Perm(t.ldiv[m[x, y], m[x, m[y]]])


def right_inner(t: CayleyTable, x: int, y: int) -> Perm:
    """``R(x,y) = R_{yx}^-1 R_x R_y``."""
    m = t.mul
    return Perm(t.rdiv[m[m[:, y], x], m[y, x]])


def middle_inner(t: CayleyTable, x: int) -> Perm:
    """``T_x = R_x^-1 L_x``."""
    return Perm(t.rdiv[t.mul[x], x])


def _gen_pairs(t: CayleyTable, fn):
    n = t.order
    for x in range(1, n):
        for y in range(1, n):
            yield fn(t, x, y)


def mult_groups(t: CayleyTable, inner: str = "auto") -> dict[str, PermGroup]:
    """Mlt, LMlt, RMlt, Inn, LMlt_1 and RMlt_1 of a loop.

    ``inner="generators"`` builds the three stabilizers from their defining
    generators T_x, L(x,y), R(x,y) in lexicographic order.  ``"stabilizer"``
    takes the level-1 subgroup of the chain instead, which is much cheaper for
    large loops.  ``"auto"`` uses generators up to order 128.
    """
    n = t.order
    if inner == "auto":
        inner = "generators" if n <= 128 else "stabilizer"
    Ls = [t.L(x) for x in range(1, n)]
    Rs = [t.R(x) for x in range(1, n)]
    G = {
        "Mlt": build_group(n, [p for pair in zip(Ls, Rs) for p in pair]),
        "LMlt": build_group(n, Ls),
        "RMlt": build_group(n, Rs),
    }
    if inner == "generators":
        G["LMlt_1"] = build_group(n, _gen_pairs(t, left_inner))
        G["RMlt_1"] = build_group(n, _gen_pairs(t, right_inner))
        inn_gens = [middle_inner(t, x) for x in range(1, n)]
        inn = PermGroup(n, inn_gens)
        inn._chain()
        for gens in (G["LMlt_1"].subgroup_generators(), G["RMlt_1"].subgroup_generators()):
            for g in gens:
                inn._add_generator(_arr(g))
        G["Inn"] = inn
    elif inner == "stabilizer":
        for key, src in (("Inn", "Mlt"), ("LMlt_1", "LMlt"), ("RMlt_1", "RMlt")):
            grp = G[src]
            if n == 1 or grp.base[:1] != [0]:
                G[key] = build_group(n, [])
            else:
                G[key] = grp.stabilizer_of_first_base_point()
    else:
        raise ValueError(f"unknown inner mode {inner!r}")
    return G


def group_order(G: PermGroup) -> int:
    return G.order()
