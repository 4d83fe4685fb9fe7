"""Conjugacy types for GL_n(q): per-polynomial partition data, the
modification/lift calculus between ambient ranks, canonical block
representatives, and exact q-series counting formulas.

A *plain* type records the full Jordan data of a matrix (norm = matrix size).
A *modified* type additionally decrements every part of the t-1 partition,
which is exactly the data preserved when a class is transported between
GL_n(q) for varying n.  Both are carried by the same immutable GLType value;
which reading applies is part of each operation's contract.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from . import matfq, polyalg
from .errors import ClassEmptyError

if TYPE_CHECKING:
    from .field import Field

__all__ = [
    "Partition", "is_partition", "conjugate_partition", "enumerate_partitions",
    "GLType", "gltype_make", "empty_type", "gltype_sort_key",
    "norm", "type_of", "modified_type_of", "modify", "lift",
    "canonical_matrix", "reflection_length", "det_of_type",
    "q_int", "q_factorial", "q_binomial", "a_partition",
    "centralizer_order", "gl_order", "class_size", "enumerate_plain_types",
    "format_gltype", "parse_gltype",
]

Partition = tuple[int, ...]


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def is_partition(parts) -> bool:
    return all(isinstance(p, int) and p > 0 for p in parts) and \
        all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))


def conjugate_partition(parts: Partition) -> Partition:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, parts[0] + 1))


@lru_cache(maxsize=None)
def _partitions(n: int, maxpart: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n, parts descending, listed largest-first."""
    if n < 0:
        raise ValueError("partitions of a negative integer")
    return list(_partitions(n, n if n else 1))


# ---------------------------------------------------------------------------
# the type value
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GLType:
    """Sorted, immutable map from monic irreducibles to partitions."""

    field: "Field"
    entries: tuple[tuple[tuple[int, ...], Partition], ...]

    def __post_init__(self):
        seen = []
        for f, parts in self.entries:
            if len(f) < 2 or f[-1] != 1:
                raise ValueError(f"type key {f} is not monic non-constant")
            if f[0] == 0:
                raise ValueError("type key t is not allowed (units only)")
            if not parts or not is_partition(parts):
                raise ValueError(f"bad partition {parts}")
            seen.append(polyalg.poly_key(self.field, f))
        if sorted(seen) != seen or len(set(seen)) != len(seen):
            raise ValueError("entries must be strictly sorted by polynomial")

    def get(self, f) -> Partition:
        for g, parts in self.entries:
            if g == f:
                return parts
        return ()

    def __str__(self) -> str:
        return format_gltype(self)


def gltype_make(field: "Field", items) -> GLType:
    """Build a GLType from any iterable/mapping of poly → partition."""
    pairs = items.items() if hasattr(items, "items") else items
    entries = sorted(
        ((tuple(f), tuple(parts)) for f, parts in pairs),
        key=lambda fp: polyalg.poly_key(field, fp[0]),
    )
    return GLType(field, tuple(entries))


def empty_type(field: "Field") -> GLType:
    return GLType(field, ())


def gltype_sort_key(T: GLType):
    return tuple((polyalg.poly_key(T.field, f), parts) for f, parts in T.entries)


def norm(T: GLType) -> int:
    """Total degree-weighted size Σ d(f)·|λ(f)|."""
    return sum((len(f) - 1) * sum(parts) for f, parts in T.entries)


# ---------------------------------------------------------------------------
# extraction from matrices
# ---------------------------------------------------------------------------

def type_of(field: "Field", A: np.ndarray) -> GLType:
    """Plain conjugacy type of an invertible matrix from its kernel
    filtrations: the i-th column of the partition at f has height
    (ker f(A)^i − ker f(A)^{i−1}) / d(f)."""
    _, data = matfq.conjugacy_invariant(field, A)
    entries = []
    for f, dims in data:
        d = len(f) - 1
        cols = []
        prev = 0
        for k in dims:
            c, rem = divmod(k - prev, d)
            assert rem == 0, "kernel filtration not divisible by degree"
            cols.append(c)
            prev = k
        assert all(cols[i] >= cols[i + 1] for i in range(len(cols) - 1)), \
            "kernel filtration increments must decrease"
        entries.append((f, conjugate_partition(tuple(cols))))
    return gltype_make(field, entries)


def modified_type_of(field: "Field", A: np.ndarray) -> GLType:
    return modify(type_of(field, A))


# ---------------------------------------------------------------------------
# modification and lifting
# ---------------------------------------------------------------------------

def modify(T: GLType) -> GLType:
    """Decrement every part of the t-1 partition; other entries unchanged."""
    unit = polyalg.t_minus_one(T.field)
    entries = []
    for f, parts in T.entries:
        if f == unit:
            parts = tuple(p - 1 for p in parts if p > 1)
            if not parts:
                continue
        entries.append((f, parts))
    return gltype_make(T.field, entries)


def lift(T: GLType, n: int) -> GLType:
    """Inverse of modify into GL_n: increment the t-1 parts and pad with 1's.

    Raises ClassEmptyError when n < ‖T‖ + ℓ(T(t−1)), i.e. the class has no
    members in GL_n(q).
    """
    unit = polyalg.t_minus_one(T.field)
    e_parts = T.get(unit)
    k = norm(T) + len(e_parts)
    if n < k:
        raise ClassEmptyError(
            f"class empty in G_{n}: modified type needs n >= {k}")
    new_e = tuple(p + 1 for p in e_parts) + (1,) * (n - k)
    entries = [(f, parts) for f, parts in T.entries if f != unit]
    if new_e:
        entries.append((unit, new_e))
    return gltype_make(T.field, entries)


def min_rank(T: GLType) -> int:
    """Smallest n in which the modified type T has members: ‖T‖ + ℓ(T(t−1))."""
    return norm(T) + len(T.get(polyalg.t_minus_one(T.field)))


# ---------------------------------------------------------------------------
# canonical representatives
# ---------------------------------------------------------------------------

def _block_key(field: "Field", f) -> tuple:
    # t-1 blocks come last so that lifting a type pads with a trailing
    # identity: the canonical matrix at rank n is diag(canonical at rank k, I).
    if f == polyalg.t_minus_one(field):
        return (1 << 30,)
    return polyalg.poly_key(field, f)


def canonical_matrix(T: GLType) -> np.ndarray:
    """Block representative J of a plain type: one block tower per polynomial,
    parts in descending order, t-1 blocks trailing."""
    blocks = []
    for f, parts in sorted(T.entries, key=lambda fp: _block_key(T.field, fp[0])):
        for m in parts:
            blocks.append(polyalg.jordan_block(T.field, f, m))
    return matfq.block_diag(blocks) if blocks else np.zeros((0, 0), dtype=np.uint8)


def reflection_length(field: "Field", A: np.ndarray) -> int:
    """Word length of an invertible matrix over the set of all reflections,
    which equals rank(A − I)."""
    n = A.shape[0]
    r = matfq.rank(field, matfq.mat_sub(field, A, matfq.identity(n)))
    if __debug__ and n <= 4:
        assert r == norm(modified_type_of(field, A)), \
            "rank(A - I) disagrees with the modified-type norm"
    return r


def det_of_type(T: GLType) -> int:
    """Determinant (a field element) shared by all matrices whose plain or
    modified type is T; t-1 parts and identity padding contribute 1."""
    F = T.field
    out = F.one
    for f, parts in T.entries:
        d = len(f) - 1
        block_det = f[0] if d % 2 == 0 else F.neg(f[0])
        out = F.mul(out, F.pow(block_det, sum(parts)))
    return out


# ---------------------------------------------------------------------------
# q-series and counting
# ---------------------------------------------------------------------------

def q_int(q: int, m: int) -> int:
    """[m] = 1 + q + … + q^{m−1}."""
    if m < 0:
        raise ValueError("q_int needs m >= 0")
    return (q ** m - 1) // (q - 1)


def q_factorial(q: int, m: int) -> int:
    out = 1
    for i in range(1, m + 1):
        out *= q_int(q, i)
    return out


def q_binomial(q: int, m: int, b: int) -> int:
    if not 0 <= b <= m:
        raise ValueError(f"q_binomial needs 0 <= b <= m, got ({m}, {b})")
    num = q_factorial(q, m)
    den = q_factorial(q, b) * q_factorial(q, m - b)
    out, rem = divmod(num, den)
    assert rem == 0, "q-binomial must be integral"
    return out


def a_partition(parts: Partition, Q: int) -> int:
    """Centralizer-order factor a_λ(Q) = Q^{|λ|+2n(λ)} ∏_i ∏_{j≤m_i} (1−Q^{−j})."""
    if Q < 2:
        raise ValueError("a_partition needs Q >= 2")
    if not is_partition(parts):
        raise ValueError(f"bad partition {parts}")
    n_stat = sum(i * p for i, p in enumerate(parts))
    total = Fraction(Q) ** (sum(parts) + 2 * n_stat)
    for m in Counter(parts).values():
        for j in range(1, m + 1):
            total *= 1 - Fraction(1, Q) ** j
    assert total.denominator == 1 and total > 0, "a_λ(Q) must be a positive integer"
    return int(total)


def centralizer_order(T: GLType) -> int:
    """|centralizer in GL_‖T‖(q)| of a matrix of plain type T."""
    q = T.field.q
    out = 1
    for f, parts in T.entries:
        out *= a_partition(parts, q ** (len(f) - 1))
    return out


def gl_order(field: "Field", n: int) -> int:
    """|GL_n(q)| = ∏_{i<n} (q^n − q^i)."""
    q = field.q
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def class_size(T: GLType, n: int, field: "Field" = None) -> int:
    """Number of members of the modified-type-T class inside GL_n(q)."""
    F = field if field is not None else T.field
    if F != T.field:
        raise ValueError("field mismatch")
    plain = lift(T, n)
    out, rem = divmod(gl_order(F, n), centralizer_order(plain))
    assert rem == 0, "centralizer order must divide the group order"
    return out


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_plain_types(field: "Field", n: int) -> list[GLType]:
    """All plain types of norm exactly n, sorted canonically."""
    if n < 0:
        raise ValueError("norm must be nonnegative")
    polys = polyalg.enumerate_phi(field, n) if n else []
    out: list[GLType] = []

    def rec(i: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(gltype_make(field, list(acc)))
            return
        if i == len(polys):
            return
        f = polys[i]
        d = len(f) - 1
        rec(i + 1, remaining, acc)
        for m in range(1, remaining // d + 1):
            for parts in enumerate_partitions(m):
                acc.append((f, parts))
                rec(i + 1, remaining - m * d, acc)
                acc.pop()

    rec(0, n, [])
    return sorted(out, key=gltype_sort_key)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _format_key(field: "Field", f) -> str:
    if len(f) == 2:  # linear keys display by root: t-ξ
        root = field.neg(f[0])
        txt = field.format_element(root)
        if "+" in txt or "-" in txt:
            txt = f"({txt})"
        return f"t-{txt}"
    return polyalg.format_poly(field, f)


def format_gltype(T: GLType) -> str:
    """Semicolon-joined `partition@poly` items, e.g. "1@t-1;2,1@t^2+t+2"."""
    if not T.entries:
        return "∅"
    return ";".join(
        ",".join(str(p) for p in parts) + "@" + _format_key(T.field, f)
        for f, parts in T.entries
    )


def parse_gltype(field: "Field", s: str) -> GLType:
    s = s.strip()
    if s in ("", "∅"):
        return empty_type(field)
    items = []
    for chunk in s.split(";"):
        head, sep, tail = chunk.partition("@")
        if not sep:
            raise ValueError(f"missing '@' in type item {chunk!r}")
        parts = tuple(int(x) for x in head.split(","))
        if not is_partition(parts):
            raise ValueError(f"bad partition {head!r} (descending positive parts)")
        f = polyalg.parse_poly(field, tail)
        if not polyalg.is_irreducible(field, f):
            raise ValueError(f"type key {tail!r} is reducible over {field!r}")
        items.append((f, parts))
    T = gltype_make(field, items)
    if len(T.entries) != len(items):
        raise ValueError(f"repeated polynomial in {s!r}")
    return T
