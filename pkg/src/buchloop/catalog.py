"""Small standard loops used as references and test inputs."""

from __future__ import annotations

import itertools

import numpy as np

from .table import CayleyTable, validate_table


def cyclic(n: int) -> CayleyTable:
    i = np.arange(n)
    return validate_table((i[:, None] + i[None, :]) % n, label=f"C{n}")


def direct_product(a: CayleyTable, b: CayleyTable) -> CayleyTable:
    """Product loop with ``(x, y)`` at index ``x * |b| + y``."""
    m = b.order
    mul = a.mul[:, None, :, None] * m + b.mul[None, :, None, :]
    n = a.order * m
    return validate_table(mul.reshape(n, n), label=f"{a.label}x{b.label}")


def abelian(*orders: int) -> CayleyTable:
    t = cyclic(orders[0])
    for k in orders[1:]:
        t = direct_product(t, cyclic(k))
    return t


def permutation_group(perms, label: str = "") -> CayleyTable:
    """Cayley table of an explicit list of permutations (identity first)."""
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    mul = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[k]] for k in range(len(p)))]
    return validate_table(mul, label=label)


def symmetric(k: int) -> CayleyTable:
    perms = sorted(itertools.permutations(range(k)))
    return permutation_group(perms, label=f"S{k}")


def dihedral(k: int) -> CayleyTable:
    """Dihedral group of order ``2k`` acting on a ``k``-gon."""
    rots = [tuple((i + r) % k for i in range(k)) for r in range(k)]
    refl = [tuple((r - i) % k for i in range(k)) for r in range(k)]
    return permutation_group(rots + refl, label=f"D{2 * k}")


def quaternion() -> CayleyTable:
    # Q8 as unit quaternions {+-1, +-i, +-j, +-k}, encoded (sign, unit).
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    els = [(s, u) for s in (1, -1) for u in "1ijk"]
    idx = {e: i for i, e in enumerate(els)}
    mul = np.empty((8, 8), dtype=np.int64)
    for (s1, u1), (s2, u2) in itertools.product(els, repeat=2):
        s, u = units[(u1, u2)]
        mul[idx[(s1, u1)], idx[(s2, u2)]] = idx[(s1 * s2 * s, u)]
    return validate_table(mul, label="Q8")


def from_elements(elements, product, label: str = "") -> CayleyTable:
    """Cayley table from an element list (identity first) and a product function."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mul[i, j] = index[product(a, b)]
    return validate_table(mul, label=label)


def metacyclic(m: int, n: int, k: int, label: str = "") -> CayleyTable:
    """Split extension ``C_m : C_n`` where the generator of C_n acts by ``a -> k a``."""
    if pow(k, n, m) != 1 % m:
        raise ValueError(f"{k}^{n} is not 1 mod {m}")
    els = [(a, b) for b in range(n) for a in range(m)]
    return from_elements(els, lambda x, y: ((x[0] + pow(k, x[1], m) * y[0]) % m, (x[1] + y[1]) % n),
                         label)


def dicyclic(m: int, label: str = "") -> CayleyTable:
    """Dicyclic group of order ``4m``: ``<r, s | r^(2m), s^2 = r^m, s r s^-1 = r^-1>``."""
    mod = 2 * m

    def prod(x, y):
        a, b = x
        c, d = y
        if b == 0:
            return ((a + c) % mod, d)
        if d == 0:
            return ((a - c) % mod, 1)
        return ((a - c + m) % mod, 0)

    els = [(a, b) for b in range(2) for a in range(mod)]
    return from_elements(els, prod, label)


def _c2sq_by_c4() -> CayleyTable:
    # C2^2 : C4 with the generator of C4 swapping the two coordinates.
    def swap(v, t):
        return (v[1], v[0]) if t % 2 else v

    els = [((p, q), t) for t in range(4) for p in range(2) for q in range(2)]
    return from_elements(
        els,
        lambda x, y: (tuple((u + w) % 2 for u, w in zip(x[0], swap(y[0], x[1]))), (x[1] + y[1]) % 4),
        "C2^2:C4")


def _pauli() -> CayleyTable:
    # Phases i^k times Pauli matrices; sign table of the products P*Q.
    table = {("I", p): (0, p) for p in "IXYZ"}
    table.update({(p, "I"): (0, p) for p in "IXYZ"})
    table.update({(p, p): (0, "I") for p in "XYZ"})
    table.update({("X", "Y"): (1, "Z"), ("Y", "Z"): (1, "X"), ("Z", "X"): (1, "Y"),
                  ("Y", "X"): (3, "Z"), ("Z", "Y"): (3, "X"), ("X", "Z"): (3, "Y")})
    els = [(k, p) for p in "IXYZ" for k in range(4)]

    def prod(x, y):
        k, p = table[(x[1], y[1])]
        return ((x[0] + y[0] + k) % 4, p)

    return from_elements(els, prod, "Pauli")


def alternating4() -> CayleyTable:
    def even(p):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        return inv % 2 == 0

    perms = sorted(p for p in itertools.permutations(range(4)) if even(p))
    return permutation_group(perms, label="A4")


def groups_up_to(order: int = 16) -> list[CayleyTable]:
    """One table per isomorphism type of group of order at most ``order`` (<= 16)."""
    if order > 16:
        raise ValueError("only orders up to 16 are catalogued")
    d8 = dihedral(4)
    q8 = quaternion()
    c2 = cyclic(2)
    out = [cyclic(1)]
    for p in (2, 3, 5, 7, 11, 13):
        out.append(cyclic(p))
    out += [cyclic(4), abelian(2, 2)]
    out += [cyclic(6), symmetric(3)]
    out += [cyclic(8), abelian(4, 2), abelian(2, 2, 2), d8, q8]
    out += [cyclic(9), abelian(3, 3)]
    out += [cyclic(10), dihedral(5)]
    out += [cyclic(12), abelian(6, 2), alternating4(), dihedral(6), metacyclic(3, 4, 2, "Dic12")]
    out += [cyclic(14), dihedral(7)]
    out += [cyclic(15)]
    out += [cyclic(16), abelian(8, 2), abelian(4, 4), abelian(4, 2, 2), abelian(2, 2, 2, 2),
            dihedral(8), dicyclic(4, "Q16"), metacyclic(8, 2, 3, "SD16"), metacyclic(8, 2, 5, "M16"),
            direct_product(d8, c2), direct_product(q8, c2), metacyclic(4, 4, 3, "C4:C4"),
            _c2sq_by_c4(), _pauli()]
    return [t for t in out if t.order <= order]


def smallest_nonassociative() -> CayleyTable:
    """A nonassociative loop of order 5."""
    rows = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    return validate_table(rows, label="L5")


def random_loop(n: int, seed: int, max_tries: int = 200) -> CayleyTable:
    """A random loop of order ``n`` with reduced Latin square form.

    Uses randomized row-by-row completion; deterministic given ``seed``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        mul = -np.ones((n, n), dtype=np.int64)
        mul[0] = np.arange(n)
        mul[:, 0] = np.arange(n)
        ok = True
        for i in range(1, n):
            row = _random_row(mul, i, n, rng)
            if row is None:
                ok = False
                break
            mul[i] = row
        if ok:
            return validate_table(mul, label=f"random{n}_{seed}")
    raise RuntimeError("random Latin square completion failed")


def _random_row(mul, i, n, rng):
    used_cols = [set(mul[:i, j].tolist()) for j in range(n)]

    def rec(j, row, taken):
        if j == n:
            return row
        cand = [v for v in range(n) if v not in taken and v not in used_cols[j]]
        rng.shuffle(cand)
        for v in cand:
            row.append(v)
            taken.add(v)
            out = rec(j + 1, row, taken)
            if out is not None:
                return out
            row.pop()
            taken.discard(v)
        return None

    return rec(1, [i], {i})
