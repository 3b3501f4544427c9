"""Finite loops as Cayley tables, permutations of their elements, and autotopisms.

Elements are the integers ``0 .. n-1`` and element ``0`` is always the neutral
element.  Permutations compose right-to-left: ``(f * g)(x) == f(g(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 4096


class LoopError(ValueError):
    """Base class for malformed-table and bad-argument errors."""


class NotSquare(LoopError):
    pass


class EntryOutOfRange(LoopError):
    pass


class RowNotPermutation(LoopError):
    def __init__(self, row: int):
        super().__init__(f"row {row} is not a permutation")
        self.row = row


class ColNotPermutation(LoopError):
    def __init__(self, col: int):
        super().__init__(f"column {col} is not a permutation")
        self.col = col


class NoIdentity(LoopError):
    def __init__(self):
        super().__init__("no two-sided identity element")


class IdentityNotZero(LoopError):
    def __init__(self, identity: int):
        super().__init__(f"identity element is {identity}, not 0 (use relabel)")
        self.identity = identity


class IndexOutOfRange(LoopError):
    pass


class DegreeMismatch(LoopError):
    pass


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class Perm:
    """A permutation of ``range(n)`` stored as its image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        self.images = _readonly(np.asarray(images))
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(np.arange(n))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x):
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Perm(self.images[other.images])

    def inverse(self) -> "Perm":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree)
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(k)):
            result = base * result
        return result

    def is_identity(self) -> bool:
        return bool((self.images == np.arange(self.degree)).all())

    def is_bijection(self) -> bool:
        return bool((np.sort(self.images) == np.arange(self.degree)).all())

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def __repr__(self) -> str:
        if self.degree <= 16:
            return f"Perm({self.images.tolist()})"
        return f"Perm(<degree {self.degree}>)"

    def to_line(self) -> str:
        """One-line image array, as used in reports."""
        return " ".join(map(str, self.images.tolist()))


def commutator(f: Perm, g: Perm) -> Perm:
    """Group commutator ``f^-1 g^-1 f g``."""
    return f.inverse() * g.inverse() * f * g


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """A validated finite loop with precomputed left and right division tables.

    ``mul[a, b] = a*b``, ``ldiv[a, b] = a\\b`` and ``rdiv[b, a] = b/a``.
    Build instances with :func:`validate_table` rather than directly.
    """

    mul: np.ndarray
    ldiv: np.ndarray
    rdiv: np.ndarray
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def elements(self) -> range:
        return range(self.order)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"CayleyTable(order={self.order}, label={self.label!r})"

    def _check(self, *xs) -> None:
        n = self.order
        for x in xs:
            if not 0 <= int(x) < n:
                raise IndexOutOfRange(f"element {x} not in [0, {n})")

    # -- elementwise operations (accept ints or broadcastable arrays) --
    def prod(self, x, y):
        return self.mul[x, y]

    def left_div(self, a, b):
        """``a\\b``: the unique ``x`` with ``a*x = b``."""
        return self.ldiv[a, b]

    def right_div(self, b, a):
        """``b/a``: the unique ``y`` with ``y*a = b``."""
        return self.rdiv[b, a]

    def L(self, x: int) -> Perm:
        self._check(x)
        return Perm(self.mul[x, :])

    def R(self, x: int) -> Perm:
        self._check(x)
        return Perm(self.mul[:, x])

    @property
    def I(self) -> Perm:  # noqa: E743
        """Right inverse map ``x -> x\\1``."""
        if "I" not in self._cache:
            self._cache["I"] = Perm(self.ldiv[:, 0])
        return self._cache["I"]

    @property
    def J(self) -> Perm:
        """Left inverse map ``x -> 1/x``."""
        if "J" not in self._cache:
            self._cache["J"] = Perm(self.rdiv[0, :])
        return self._cache["J"]

    def I_power(self, k: int) -> Perm:
        """``I^k`` as a permutation; negative ``k`` uses ``J = I^-1``."""
        key = ("Ipow", k)
        if key not in self._cache:
            self._cache[key] = self.I ** k
        return self._cache[key]

    def eta(self, x: int) -> tuple[int, bool]:
        """Return ``x*J(x)`` and whether it equals ``I(x)*x``."""
        self._check(x)
        a = int(self.mul[x, self.J(x)])
        b = int(self.mul[self.I(x), x])
        return a, a == b

    def square(self, x):
        return self.mul[x, x]

    def is_associative(self) -> bool:
        m = self.mul
        return all(np.array_equal(m[m[x]][:, :], m[x][m]) for x in self.elements)

    def with_label(self, label: str) -> "CayleyTable":
        return CayleyTable(self.mul, self.ldiv, self.rdiv, label)


def basic_ops(t: CayleyTable, x: int, y: int) -> dict:
    """Product, both divisions and the two translations for a pair of elements."""
    t._check(x, y)
    return {
        "mul": int(t.mul[x, y]),
        "ldiv": int(t.ldiv[x, y]),
        "rdiv": int(t.rdiv[x, y]),
        "L": t.L(x),
        "R": t.R(x),
    }


def inverse_maps(t: CayleyTable, x: int, k: int = 2) -> dict:
    t._check(x)
    e, agrees = t.eta(x)
    return {
        "I": int(t.I(x)),
        "J": int(t.J(x)),
        "I_iter": [int(t.I_power(j)(x)) for j in range(1, k + 1)],
        "J_iter": [int(t.I_power(-j)(x)) for j in range(1, k + 1)],
        "eta": e,
        "eta_two_sided": agrees,
    }


def _division_tables(mul: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = mul.shape[0]
    idx = np.arange(n)
    ldiv = np.empty_like(mul)
    rdiv = np.empty_like(mul)
    rows = np.repeat(idx, n)
    ldiv[rows, mul.ravel()] = np.tile(idx, n)
    # rdiv[mul[y, a], a] = y
    rdiv[mul.ravel(), np.tile(idx, n)] = rows
    return ldiv, rdiv


def find_identity(mul: np.ndarray) -> int | None:
    n = mul.shape[0]
    idx = np.arange(n)
    left = np.flatnonzero((mul == idx[None, :]).all(axis=1))
    for e in left:
        if (mul[:, e] == idx).all():
            return int(e)
    return None


def relabel(mul: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Transport a table along the bijection ``x -> perm[x]``."""
    p = np.asarray(perm)
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p))
    return p[mul[inv][:, inv]]


def validate_table(raw, label: str = "", relabel_identity: bool = False) -> CayleyTable:
    """Check the loop axioms and build a :class:`CayleyTable`.

    With ``relabel_identity`` a table whose identity is some ``e != 0`` is
    conjugated by the transposition ``(0 e)`` instead of being rejected.
    """
    mul = np.array(raw, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise NotSquare(f"table of shape {mul.shape} is not square")
    n = mul.shape[0]
    if n > MAX_ORDER:
        raise LoopError(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    if mul.min() < 0 or mul.max() >= n:
        raise EntryOutOfRange(f"entries must lie in [0, {n})")
    target = np.arange(n)
    rows_ok = (np.sort(mul, axis=1) == target).all(axis=1)
    if not rows_ok.all():
        raise RowNotPermutation(int(np.flatnonzero(~rows_ok)[0]))
    cols_ok = (np.sort(mul, axis=0) == target[:, None]).all(axis=0)
    if not cols_ok.all():
        raise ColNotPermutation(int(np.flatnonzero(~cols_ok)[0]))
    e = find_identity(mul)
    if e is None:
        raise NoIdentity()
    if e != 0:
        if not relabel_identity:
            raise IdentityNotZero(e)
        swap = np.arange(n)
        swap[0], swap[e] = e, 0
        mul = relabel(mul, swap)
    ldiv, rdiv = _division_tables(mul)
    return CayleyTable(_readonly(mul), _readonly(ldiv), _readonly(rdiv), label)


# -- text format -------------------------------------------------------------

def parse_table(text: str) -> tuple[np.ndarray, list[str]]:
    """Parse the plain table format; returns the raw array and comment lines."""
    comments: list[str] = []
    body: list[str] = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            comments.append(s[1:].strip())
        else:
            body.append(s)
    if not body:
        raise LoopError("empty table file")
    try:
        n = int(body[0])
    except ValueError:
        raise LoopError(f"expected the order on the first line, got {body[0]!r}") from None
    if len(body) - 1 != n:
        raise LoopError(f"expected {n} rows, found {len(body) - 1}")
    rows = []
    for i, line in enumerate(body[1:]):
        row = []
        for tok in line.split():
            try:
                row.append(int(tok))
            except ValueError:
                raise LoopError(f"row {i}: {tok!r} is not an integer") from None
        if len(row) != n:
            raise LoopError(f"row {i} has {len(row)} entries, expected {n}")
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(n, n), comments


def format_table(t: CayleyTable, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(str(t.order))
    lines.extend(" ".join(map(str, row)) for row in t.mul.tolist())
    return "\n".join(lines) + "\n"


def read_table(path, relabel_identity: bool = False) -> CayleyTable:
    path = Path(path)
    raw, _ = parse_table(path.read_text())
    return validate_table(raw, label=path.name, relabel_identity=relabel_identity)


def write_table(t: CayleyTable, path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_table(t, comments))


# -- autotopisms -------------------------------------------------------------

@dataclass(frozen=True)
class Autotopism:
    alpha: Perm
    beta: Perm
    gamma: Perm

    def __mul__(self, other: "Autotopism") -> "Autotopism":
        return Autotopism(self.alpha * other.alpha, self.beta * other.beta,
                          self.gamma * other.gamma)

    def inverse(self) -> "Autotopism":
        return Autotopism(self.alpha.inverse(), self.beta.inverse(), self.gamma.inverse())


def is_autotopism(t: CayleyTable, a: Autotopism) -> tuple[bool, tuple[int, int] | None]:
    """Test ``alpha(x)*beta(y) == gamma(x*y)`` on all pairs.

    Returns ``(True, None)`` or ``(False, (x, y))`` with the lexicographically
    first violating pair.
    """
    n = t.order
    for p in (a.alpha, a.beta, a.gamma):
        if p.degree != n:
            raise DegreeMismatch(f"permutation of degree {p.degree} on a loop of order {n}")
    lhs = t.mul[a.alpha.images[:, None], a.beta.images[None, :]]
    rhs = a.gamma.images[t.mul]
    bad = lhs != rhs
    if not bad.any():
        return True, None
    x, y = np.argwhere(bad)[0]
    return False, (int(x), int(y))


def is_automorphism(t: CayleyTable, f: Perm) -> bool:
    return is_autotopism(t, Autotopism(f, f, f))[0]


def buch(t: CayleyTable, x: int) -> Autotopism:
    Lx, Rx = t.L(x), t.R(x)
    Rxi = Rx.inverse()
    return Autotopism(Lx, Rxi, Lx * Rxi)


def bbuch(t: CayleyTable, x: int, y: int) -> Autotopism:
    Lxy = t.L(int(t.mul[x, y]))
    Ryx_inv = t.R(int(t.mul[y, x])).inverse()
    return Autotopism(Lxy, Ryx_inv, Lxy * Ryx_inv)


def extra(t: CayleyTable, a: int) -> Autotopism:
    La, Rai = t.L(a), t.R(a).inverse()
    return Autotopism(La, Rai, Rai * La)


def moufang(t: CayleyTable, a: int) -> Autotopism:
    La, Ra = t.L(a), t.R(a)
    return Autotopism(La, Ra, La * Ra)


def lcc(t: CayleyTable, x: int) -> Autotopism:
    Lx = t.L(x)
    return Autotopism(t.R(x).inverse() * Lx, Lx, Lx)


def rcc(t: CayleyTable, x: int) -> Autotopism:
    Rx = t.R(x)
    return Autotopism(Rx, t.L(x).inverse() * Rx, Rx)


def nuc_left(t: CayleyTable, a: int) -> Autotopism:
    La = t.L(a)
    return Autotopism(La, Perm.identity(t.order), La)


def nuc_mid(t: CayleyTable, a: int) -> Autotopism:
    return Autotopism(t.R(a), t.L(a).inverse(), Perm.identity(t.order))


def nuc_right(t: CayleyTable, a: int) -> Autotopism:
    Ra = t.R(a)
    return Autotopism(Perm.identity(t.order), Ra, Ra)


def m_inverse_transform(t: CayleyTable, m: int, inner: Autotopism,
                        variant: str = "first") -> Autotopism:
    """The two autotopisms an ``m``-inverse loop derives from a given one."""
    P = t.I_power
    al, be, ga = inner.alpha, inner.beta, inner.gamma
    if variant == "first":
        return Autotopism(P(-(m + 1)) * be * P(m + 1), P(-m) * ga * P(m), P(-m) * al * P(m))
    if variant == "second":
        return Autotopism(P(m) * ga * P(-m), P(m + 1) * al * P(-(m + 1)), P(m) * be * P(-m))
    raise ValueError(f"unknown variant {variant!r}")


_BUILDERS = {
    "buch": buch,
    "bbuch": bbuch,
    "extra": extra,
    "moufang": moufang,
    "lcc": lcc,
    "rcc": rcc,
    "nuc_left": nuc_left,
    "nuc_mid": nuc_mid,
    "nuc_right": nuc_right,
    "m_inverse": m_inverse_transform,
}


def build_autotopism(t: CayleyTable, kind: str, *params) -> Autotopism:
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown autotopism kind {kind!r}") from None
    for p in params:
        if isinstance(p, (int, np.integer)) and kind != "m_inverse":
            t._check(p)
    return builder(t, *params)
