"""Exact dense linear algebra over F_q on small numpy matrices.

Matrices are numpy uint8 arrays of canonical field-element codes.
Products of prime-field matrices run through int64 numpy matmul; everything
scalar-heavy (elimination, Hessenberg reduction) runs on plain int lists
indexed into the field's lookup tables, which is both exact and fast at
desk scale (n <= 8 or so).
"""

from __future__ import annotations

import itertools
import random
from typing import TYPE_CHECKING

import numpy as np

from . import polyalg
from .errors import InconclusiveError

if TYPE_CHECKING:
    from .field import Field

__all__ = [
    "mat_from_rows", "identity", "scalar_matrix", "mat_mul", "mat_add",
    "mat_sub", "mat_neg", "block_diag", "transpose", "mat_eq", "rank",
    "kernel_dim", "inverse", "nullspace", "char_poly", "poly_at_matrix",
    "conjugacy_invariant", "commuting_space", "conjugator",
    "format_matrix", "parse_matrix",
]

CONJUGATOR_RETRIES = 64
CONJUGATOR_EXHAUSTIVE_LIMIT = 2 ** 20


# ---------------------------------------------------------------------------
# construction and ring operations
# ---------------------------------------------------------------------------

def mat_from_rows(field: Field, rows) -> np.ndarray:
    A = np.array(rows, dtype=np.uint8)
    if A.ndim != 2:
        raise ValueError("matrix rows must form a rectangular grid")
    if A.size and A.max() >= field.q:
        raise ValueError(f"entry out of range for {field!r}")
    return A


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def scalar_matrix(field: Field, c: int, n: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=np.uint8)
    np.fill_diagonal(M, c)
    return M


def mat_mul(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if field.e == 1:
        return ((A.astype(np.int64) @ B.astype(np.int64)) % field.p).astype(np.uint8)
    add, mul = field.add_table, field.mul_table
    a, b = A.tolist(), B.tolist()
    m, k, n = A.shape[0], A.shape[1], B.shape[1]
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        ai, oi = a[i], out[i]
        for s in range(k):
            c = ai[s]
            if c:
                row, bs = mul[c], b[s]
                for j in range(n):
                    if bs[j]:
                        oi[j] = add[oi[j]][row[bs[j]]]
    return np.array(out, dtype=np.uint8)


def mat_add(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} + {B.shape}")
    return field.add_np[A, B]


def mat_neg(field: Field, A: np.ndarray) -> np.ndarray:
    return field.neg_np[A]


def mat_sub(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} - {B.shape}")
    return field.add_np[A, field.neg_np[B]]


def block_diag(blocks) -> np.ndarray:
    """Diagonal sum of square blocks."""
    sizes = [b.shape[0] for b in blocks]
    n = sum(sizes)
    M = np.zeros((n, n), dtype=np.uint8)
    at = 0
    for b, s in zip(blocks, sizes):
        if b.shape != (s, s):
            raise ValueError("block_diag requires square blocks")
        M[at:at + s, at:at + s] = b
        at += s
    return M


def transpose(A: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(A.T)


def mat_eq(A: np.ndarray, B: np.ndarray) -> bool:
    return np.array_equal(A, B)


# ---------------------------------------------------------------------------
# elimination: rank, inverse, nullspace
# ---------------------------------------------------------------------------

def rank(field: Field, A: np.ndarray) -> int:
    """Gaussian elimination with exact pivoting."""
    rows = A.tolist()
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    add, mul, neg, inv = (field.add_table, field.mul_table,
                          field.neg_table, field.inv_table)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c]), -1)
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pinv = inv[prow[c]]
        for i in range(r + 1, m):
            a = rows[i][c]
            if a:
                u = mul[a][pinv]
                ri, urow = rows[i], mul[u]
                for j in range(c, ncols):
                    if prow[j]:
                        ri[j] = add[ri[j]][neg[urow[prow[j]]]]
        r += 1
        if r == m:
            break
    return r


def kernel_dim(field: Field, A: np.ndarray) -> int:
    return A.shape[1] - rank(field, A)


def inverse(field: Field, A: np.ndarray) -> np.ndarray:
    """Inverse by augmented elimination; singular input signals non-membership
    in GL_n(q)."""
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse requires a square matrix")
    add, mul, neg, inv = (field.add_table, field.mul_table,
                          field.neg_table, field.inv_table)
    rows = [a + e for a, e in zip(A.tolist(), identity(n).tolist())]
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), -1)
        if piv < 0:
            raise ValueError("matrix is singular over " + repr(field))
        rows[c], rows[piv] = rows[piv], rows[c]
        prow = rows[c]
        pinv = inv[prow[c]]
        if pinv != 1:
            rows[c] = prow = [mul[pinv][v] for v in prow]
        for i in range(n):
            if i == c:
                continue
            a = rows[i][c]
            if a:
                ri, arow = rows[i], mul[a]
                for j in range(c, 2 * n):
                    if prow[j]:
                        ri[j] = add[ri[j]][neg[arow[prow[j]]]]
    return np.array([r[n:] for r in rows], dtype=np.uint8)


def nullspace(field: Field, A: np.ndarray) -> list[np.ndarray]:
    """Basis of the right kernel {v : A v = 0} as length-cols vectors."""
    m, ncols = A.shape
    add, mul, neg, inv = (field.add_table, field.mul_table,
                          field.neg_table, field.inv_table)
    rows = A.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c]), -1)
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pinv = inv[prow[c]]
        if pinv != 1:
            rows[r] = prow = [mul[pinv][v] for v in prow]
        for i in range(m):
            if i == r:
                continue
            a = rows[i][c]
            if a:
                ri, arow = rows[i], mul[a]
                for j in range(c, ncols):
                    if prow[j]:
                        ri[j] = add[ri[j]][neg[arow[prow[j]]]]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for c in free:
        v = [0] * ncols
        v[c] = 1
        for i, pc in enumerate(pivots):
            v[pc] = neg[rows[i][c]]
        basis.append(np.array(v, dtype=np.uint8))
    return basis


# ---------------------------------------------------------------------------
# characteristic polynomial
# ---------------------------------------------------------------------------

def char_poly(field: Field, A: np.ndarray) -> tuple[int, ...]:
    """det(tI - A) by similarity reduction to Hessenberg form followed by the
    leading-principal-minor recurrence.  O(n^3) field operations, no zero-pivot
    trouble, and valid for any q (interpolation would need q > n)."""
    n = A.shape[0]
    if A.shape != (n, n) or n < 1:
        raise ValueError("char_poly requires a square matrix, n >= 1")
    add, mul, neg, inv = (field.add_table, field.mul_table,
                          field.neg_table, field.inv_table)
    H = A.tolist()
    for m in range(n - 2):
        piv = next((i for i in range(m + 1, n) if H[i][m]), -1)
        if piv < 0:
            continue
        if piv != m + 1:
            H[m + 1], H[piv] = H[piv], H[m + 1]
            for row in H:
                row[m + 1], row[piv] = row[piv], row[m + 1]
        pinv = inv[H[m + 1][m]]
        for i in range(m + 2, n):
            a = H[i][m]
            if a:
                u = mul[a][pinv]
                urow = mul[u]
                Hi, Hm = H[i], H[m + 1]
                for j in range(m, n):
                    if Hm[j]:
                        Hi[j] = add[Hi[j]][neg[urow[Hm[j]]]]
                for r in range(n):
                    if H[r][i]:
                        H[r][m + 1] = add[H[r][m + 1]][urow[H[r][i]]]
    # p_0 = 1; p_m = (t - H[m-1][m-1]) p_{m-1}
    #              - sum_i H[i-1][m-1] (prod_{j=i..m-1} H[j][j-1]) p_{i-1}
    polys: list[tuple[int, ...]] = [(1,)]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        pm = [0] * (m + 1)
        for k, c in enumerate(prev):
            pm[k + 1] = c
        nh = neg[H[m - 1][m - 1]]
        if nh:
            row = mul[nh]
            for k, c in enumerate(prev):
                if c:
                    pm[k] = add[pm[k]][row[c]]
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = mul[prod][H[i][i - 1]]
            if not prod:
                break
            a = H[i - 1][m - 1]
            if a:
                coef = neg[mul[a][prod]]
                row = mul[coef]
                pi = polys[i - 1]
                for k, c in enumerate(pi):
                    if c:
                        pm[k] = add[pm[k]][row[c]]
        polys.append(tuple(pm))
    return polys[n]


def poly_at_matrix(field: Field, f, A: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial at a square matrix by Horner's rule."""
    n = A.shape[0]
    M = np.zeros((n, n), dtype=np.uint8)
    idx = np.arange(n)
    for c in reversed(f):
        M = mat_mul(field, M, A)
        if c:
            M[idx, idx] = field.add_np[M[idx, idx], c]
    return M


# ---------------------------------------------------------------------------
# conjugacy invariants and conjugator search
# ---------------------------------------------------------------------------

def conjugacy_invariant(field: Field, A: np.ndarray):
    """Complete conjugacy invariant for GL: the characteristic polynomial with,
    per irreducible factor f of degree d and multiplicity m, the kernel
    dimensions of f(A)^i for i = 1, 2, ... until they stabilize at d*m.

    Multiplicity-1 factors contribute (d,) with no matrix work.
    """
    cp = char_poly(field, A)
    if cp[0] == 0:
        raise ValueError("matrix is singular over " + repr(field))
    data = []
    for f, mult in polyalg.factor_monic(field, cp):
        d = len(f) - 1
        full = d * mult
        if mult == 1:
            data.append((f, (d,)))
            continue
        B = poly_at_matrix(field, f, A)
        k = kernel_dim(field, B)
        dims = [k]
        P = B
        while k < full:
            P = mat_mul(field, P, B)
            k_next = kernel_dim(field, P)
            assert k_next > k, "kernel filtration must strictly grow"
            dims.append(k_next)
            k = k_next
        data.append((f, tuple(dims)))
    return cp, tuple(data)


def commuting_space(field: Field, A: np.ndarray, B: np.ndarray) -> list[np.ndarray]:
    """Basis of {X : X A = B X} as n x n matrices (the Sylvester-type kernel)."""
    n = A.shape[0]
    if A.shape != B.shape or A.shape != (n, n):
        raise ValueError("commuting_space requires equal square shapes")
    add, neg = field.add_table, field.neg_table
    a, b = A.tolist(), B.tolist()
    M = [[0] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            row = M[i * n + j]
            for s in range(n):
                row[i * n + s] = add[row[i * n + s]][a[s][j]]
            for r in range(n):
                row[r * n + j] = add[row[r * n + j]][neg[b[i][r]]]
    basis = nullspace(field, np.array(M, dtype=np.uint8))
    return [v.reshape(n, n) for v in basis]


def _combine(field: Field, coeffs, basis_stack: np.ndarray) -> np.ndarray:
    """Linear combination of stacked basis matrices with scalar coefficients."""
    if field.e == 1:
        cs = np.array(coeffs, dtype=np.int64)
        flat = basis_stack.reshape(len(coeffs), -1).astype(np.int64)
        out = (cs @ flat) % field.p
        return out.reshape(basis_stack.shape[1:]).astype(np.uint8)
    X = np.zeros(basis_stack.shape[1:], dtype=np.uint8)
    for c, M in zip(coeffs, basis_stack):
        if c:
            X = field.add_np[X, field.mul_np[c, M]]
    return X


def conjugator(field: Field, A: np.ndarray, B: np.ndarray,
               rng: random.Random | None = None,
               retries: int = CONJUGATOR_RETRIES,
               exhaustive_limit: int = CONJUGATOR_EXHAUSTIVE_LIMIT) -> np.ndarray | None:
    """Invertible X with X A X^-1 = B, or None if A and B are not conjugate.

    Non-conjugacy is decided definitively by comparing complete conjugacy
    invariants.  For conjugate pairs, random elements of the solution space of
    X A = B X are sampled up to `retries`, then the space is scanned
    exhaustively when small enough; InconclusiveError is raised rather than
    ever returning a false None.
    """
    n = A.shape[0]
    if A.shape != B.shape or A.shape != (n, n):
        raise ValueError("conjugator requires equal square shapes")
    if conjugacy_invariant(field, A) != conjugacy_invariant(field, B):
        return None
    basis = commuting_space(field, A, B)
    assert basis, "conjugate matrices have a nonzero intertwiner space"
    stack = np.stack(basis)
    s = len(basis)
    rng = rng if rng is not None else random.Random(0)
    q = field.q
    for _ in range(retries):
        coeffs = [rng.randrange(q) for _ in range(s)]
        X = _combine(field, coeffs, stack)
        if X.any() and rank(field, X) == n:
            return X
    if q ** s <= exhaustive_limit:
        for coeffs in itertools.product(range(q), repeat=s):
            X = _combine(field, coeffs, stack)
            if X.any() and rank(field, X) == n:
                return X
        raise AssertionError(
            "matching invariants but no invertible intertwiner: invariant bug")
    raise InconclusiveError(
        f"no invertible intertwiner found in {retries} samples from a space "
        f"of size {q}^{s}; re-seed and retry")


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def format_matrix(field: Field, A: np.ndarray) -> str:
    """Rows separated by ';', entries by ',', e.g. "2,0;0,1"."""
    return ";".join(
        ",".join(field.format_element(int(v)) for v in row) for row in A
    )


def parse_matrix(field: Field, s: str) -> np.ndarray:
    rows = [
        [field.parse_element(entry) for entry in row.split(",")]
        for row in s.strip().split(";")
    ]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix text")
    return np.array(rows, dtype=np.uint8)
