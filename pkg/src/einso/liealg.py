"""The Lie algebra so(n) in the e_ab basis and its three-block decomposition.

Basis elements are e_ab = E_ab - E_ba for a < b.  A decomposition
n = k1 + k2 + k3 (with k1 >= k2 >= k3 >= 1) splits so(n) into six modules
m1, m2, m3 (the diagonal so(k_i) blocks) and m12, m13, m23 (off-diagonal
blocks).  Structure-constant triplets are computed both by brute force over
the basis and from closed forms; the brute-force path is the oracle.

Normalization: the Killing form of so(n) is B(X, Y) = (n-2) tr(XY), so
-B(e_ab, e_ab) = 2(n-2) and each nonzero bracket of (-B)-orthonormalized
basis vectors contributes exactly 1/(2(n-2)) to a squared structure
constant.  Only squared constants are ever stored, so every value stays
rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .exact import StructuralError

__all__ = [
    "MODULE_LABELS",
    "BasisElement",
    "Decomposition",
    "TripletTable",
    "so_basis",
    "bracket",
    "module_of",
    "triplets_bruteforce",
    "triplets_closed_form",
]

MODULE_LABELS = ("m1", "m2", "m3", "m12", "m13", "m23")
_LABEL_POS = {lab: i for i, lab in enumerate(MODULE_LABELS)}


class BasisElement(NamedTuple):
    """e_ab = E_ab - E_ba with a < b."""

    a: int
    b: int


def so_basis(n: int) -> list:
    """The n(n-1)/2 basis elements of so(n)."""
    return [BasisElement(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]


def bracket(x: BasisElement, y: BasisElement):
    """[e_ab, e_cd] as (sign, BasisElement) or (0, None).

    Expanding E-matrices gives
        [e_ab, e_cd] = d_bc e_ad + d_ad e_bc - d_bd e_ac - d_ac e_bd,
    zero when the index pairs are disjoint or identical.
    """
    a, b = x
    c, d = y
    if len({a, b, c, d}) == 4 or (a, b) == (c, d):
        return 0, None
    acc = {}

    def put(sign, p, q):
        if p == q:
            return
        if p > q:
            p, q, sign = q, p, -sign
        key = (p, q)
        acc[key] = acc.get(key, 0) + sign

    if b == c:
        put(1, a, d)
    if a == d:
        put(1, b, c)
    if b == d:
        put(-1, a, c)
    if a == c:
        put(-1, b, d)
    items = [(k, v) for k, v in acc.items() if v]
    if not items:
        return 0, None
    assert len(items) == 1, "bracket of basis elements is a single signed element"
    (p, q), sign = items[0]
    assert sign in (-1, 1)
    return sign, BasisElement(p, q)


@dataclass(frozen=True)
class Decomposition:
    """n = k1 + k2 + k3 with k1 >= k2 >= k3 >= 1 (unsorted input is rejected)."""

    k1: int
    k2: int
    k3: int

    def __post_init__(self):
        if not (self.k1 >= self.k2 >= self.k3 >= 1):
            raise StructuralError(
                f"block sizes must satisfy k1 >= k2 >= k3 >= 1, got {(self.k1, self.k2, self.k3)}"
            )

    @property
    def n(self) -> int:
        return self.k1 + self.k2 + self.k3

    @property
    def k(self) -> tuple:
        return (self.k1, self.k2, self.k3)

    def block_of(self, index: int) -> int:
        if 1 <= index <= self.k1:
            return 1
        if index <= self.k1 + self.k2:
            return 2
        if index <= self.n:
            return 3
        raise StructuralError(f"index {index} out of range for n={self.n}")

    def dim(self, label: str) -> int:
        k = {"m1": self.k1, "m2": self.k2, "m3": self.k3}
        if label in k:
            return k[label] * (k[label] - 1) // 2
        pairs = {"m12": self.k1 * self.k2, "m13": self.k1 * self.k3, "m23": self.k2 * self.k3}
        try:
            return pairs[label]
        except KeyError:
            raise StructuralError(f"unknown module label {label!r}") from None

    def nonempty_modules(self) -> list:
        return [lab for lab in MODULE_LABELS if self.dim(lab) > 0]


def module_of(x: BasisElement, d: Decomposition) -> str:
    """Which of the six modules e_ab belongs to, by block membership."""
    i, j = d.block_of(x.a), d.block_of(x.b)
    if i == j:
        return f"m{i}"
    return f"m{min(i, j)}{max(i, j)}"


def canonical_triple(i: str, j: str, k: str) -> tuple:
    """Triplets are fully symmetric; store them as sorted label triples."""
    return tuple(sorted((i, j, k), key=_LABEL_POS.__getitem__))


@dataclass
class TripletTable:
    """Nonzero squared-structure-constant sums [k;ij], keyed by sorted triple."""

    decomposition: Decomposition
    entries: dict

    def get(self, i: str, j: str, k: str) -> Fraction:
        return self.entries.get(canonical_triple(i, j, k), Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, TripletTable)
            and self.decomposition == other.decomposition
            and self.entries == other.entries
        )

    def as_json_dict(self) -> dict:
        return {
            "k": list(self.decomposition.k),
            "entries": [
                {"triple": list(triple), "value": str(value)}
                for triple, value in sorted(
                    self.entries.items(), key=lambda kv: tuple(_LABEL_POS[x] for x in kv[0])
                )
            ],
        }


def triplets_bruteforce(d: Decomposition) -> TripletTable:
    """Count nonzero ordered bracket pairs per module triple, scaled by the
    squared normalized structure constant 1/(2(n-2)).

    Accumulates per ordered slot pattern first and asserts the full
    [k;ij] = [k;ji] = [j;ki] symmetry before folding to canonical triples.
    """
    n = d.n
    if n < 3:
        raise StructuralError("need n >= 3")
    basis = so_basis(n)
    weight = Fraction(1, 2 * (n - 2))
    patterns: dict = {}
    for x in basis:
        mx = module_of(x, d)
        for y in basis:
            sign, z = bracket(x, y)
            if sign == 0:
                continue
            key = (module_of(z, d), mx, module_of(y, d))
            patterns[key] = patterns.get(key, 0) + 1
    folded: dict = {}
    for (k, i, j), count in patterns.items():
        triple = canonical_triple(i, j, k)
        value = count * weight
        prev = folded.get(triple)
        if prev is None:
            folded[triple] = value
        elif prev != value:
            raise AssertionError(f"triplet symmetry violated at {(k, i, j)}")
    return TripletTable(d, folded)


def triplets_closed_form(d: Decomposition) -> TripletTable:
    """The closed forms: with n = k1+k2+k3 and distinct a, b, c,

        [a;aa]       = k_a (k_a - 1)(k_a - 2) / (2(n-2))
        [a;(ab)(ab)] = k_a k_b (k_a - 1)     / (2(n-2))
        [(ac);(ab)(bc)] = k_a k_b k_c        / (2(n-2))

    Zero entries are simply not stored.
    """
    n = d.n
    if n < 3:
        raise StructuralError("need n >= 3")
    k = {1: d.k1, 2: d.k2, 3: d.k3}
    den = 2 * (n - 2)
    entries = {}

    def put(i, j, kk, value):
        if value:
            entries[canonical_triple(i, j, kk)] = value

    for a in (1, 2, 3):
        put(f"m{a}", f"m{a}", f"m{a}", Fraction(k[a] * (k[a] - 1) * (k[a] - 2), den))
        for b in (1, 2, 3):
            if b == a:
                continue
            ab = f"m{min(a, b)}{max(a, b)}"
            put(f"m{a}", ab, ab, Fraction(k[a] * k[b] * (k[a] - 1), den))
    put("m12", "m13", "m23", Fraction(k[1] * k[2] * k[3], den))
    return TripletTable(d, entries)


@lru_cache(maxsize=None)
def _cached_table(k1: int, k2: int, k3: int) -> TripletTable:
    return triplets_closed_form(Decomposition(k1, k2, k3))


def triplet_table(d: Decomposition) -> TripletTable:
    """Closed-form table (cached); equals the brute-force table by the
    equivalence property suite."""
    return _cached_table(d.k1, d.k2, d.k3)
