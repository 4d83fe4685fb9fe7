"""Polynomial arithmetic over F_q, irreducibility, and the canonical list of
monic irreducibles (other than t) that indexes conjugacy data.

A polynomial is a tuple of field-element codes in ascending degree with no
trailing zeros; () is zero.  The canonical ordering used everywhere is
poly_key: by degree, then degree-1 polynomials t - xi by their root xi, then
higher degrees by ascending integer encoding of the coefficient tuple.
"""

from __future__ import annotations

from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from .field import format_terms, parse_term, split_terms

if TYPE_CHECKING:
    from .field import Field

__all__ = [
    "poly_trim", "poly_degree", "poly_add", "poly_neg", "poly_sub",
    "poly_scale", "poly_mul", "poly_divmod", "poly_mod", "poly_make_monic",
    "poly_gcd", "poly_pow", "poly_pow_mod", "poly_eval", "poly_t", "t_minus",
    "t_minus_one", "poly_key", "is_irreducible", "enumerate_phi",
    "factor_monic", "companion", "jordan_block", "format_poly", "parse_poly",
]


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def poly_trim(coeffs) -> tuple[int, ...]:
    """Drop trailing zeros; the zero polynomial is ()."""
    cs = tuple(coeffs)
    end = len(cs)
    while end and not cs[end - 1]:
        end -= 1
    return cs[:end]


def poly_degree(f) -> int:
    """Degree, with deg 0 = -1 by convention."""
    return len(f) - 1


def poly_t() -> tuple[int, int]:
    return (0, 1)


def t_minus(field: Field, xi: int) -> tuple[int, int]:
    """The linear polynomial t - xi."""
    return (field.neg(xi), 1)


def t_minus_one(field: Field) -> tuple[int, int]:
    return (field.neg(1), 1)


def poly_add(field: Field, f, g) -> tuple[int, ...]:
    add = field.add_table
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = add[out[i]][c]
    return poly_trim(out)


def poly_neg(field: Field, f) -> tuple[int, ...]:
    neg = field.neg_table
    return tuple(neg[c] for c in f)


def poly_sub(field: Field, f, g) -> tuple[int, ...]:
    return poly_add(field, f, poly_neg(field, g))


def poly_scale(field: Field, a: int, f) -> tuple[int, ...]:
    if not a:
        return ()
    mul = field.mul_table[a]
    return poly_trim(mul[c] for c in f)


def poly_mul(field: Field, f, g) -> tuple[int, ...]:
    if not f or not g:
        return ()
    add, mul = field.add_table, field.mul_table
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        row = mul[a]
        for j, b in enumerate(g):
            if b:
                out[i + j] = add[out[i + j]][row[b]]
    return poly_trim(out)


def poly_divmod(field: Field, f, g) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Quotient and remainder of f by nonzero g."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    add, mul, neg = field.add_table, field.mul_table, field.neg_table
    lead_inv = field.inv(g[-1])
    dg = len(g) - 1
    rem = list(f)
    quo = [0] * max(len(f) - dg, 0)
    for i in range(len(rem) - 1, dg - 1, -1):
        c = rem[i]
        if not c:
            continue
        factor = mul[c][lead_inv]
        quo[i - dg] = factor
        row = mul[factor]
        for j, b in enumerate(g):
            rem[i - dg + j] = add[rem[i - dg + j]][neg[row[b]]]
    return poly_trim(quo), poly_trim(rem)


def poly_mod(field: Field, f, g) -> tuple[int, ...]:
    return poly_divmod(field, f, g)[1]


def poly_make_monic(field: Field, f) -> tuple[int, ...]:
    if not f:
        return ()
    if f[-1] == 1:
        return poly_trim(f)
    return poly_scale(field, field.inv(f[-1]), f)


def poly_gcd(field: Field, f, g) -> tuple[int, ...]:
    """Monic-normalized greatest common divisor."""
    f, g = poly_trim(f), poly_trim(g)
    while g:
        f, g = g, poly_mod(field, f, g)
    return poly_make_monic(field, f)


def poly_pow(field: Field, f, k: int) -> tuple[int, ...]:
    """f**k by square-and-multiply."""
    if k < 0:
        raise ValueError("negative exponent")
    result = (1,)
    base = poly_trim(f)
    while k:
        if k & 1:
            result = poly_mul(field, result, base)
        base = poly_mul(field, base, base)
        k >>= 1
    return result


def poly_pow_mod(field: Field, f, k: int, m) -> tuple[int, ...]:
    """f**k reduced mod m, by square-and-multiply."""
    if k < 0:
        raise ValueError("negative exponent")
    result = poly_mod(field, (1,), m)
    base = poly_mod(field, f, m)
    while k:
        if k & 1:
            result = poly_mod(field, poly_mul(field, result, base), m)
        base = poly_mod(field, poly_mul(field, base, base), m)
        k >>= 1
    return result


def poly_eval(field: Field, f, a: int) -> int:
    """Horner evaluation at a field element."""
    add, mul = field.add_table, field.mul_table
    acc = 0
    for c in reversed(f):
        acc = add[mul[acc][a]][c]
    return acc


# ---------------------------------------------------------------------------
# canonical ordering, irreducibility, Phi
# ---------------------------------------------------------------------------

def poly_key(field: Field, f) -> tuple[int, int]:
    """Canonical sort key: (degree, root) for linear, (degree, encoding) else."""
    d = len(f) - 1
    if d == 1:
        return (1, field.neg(f[0]))
    enc = 0
    for c in reversed(f[:-1]):
        enc = enc * field.q + c
    return (d, enc)


def _prime_factors(d: int) -> list[int]:
    out = []
    r = 2
    while r * r <= d:
        if d % r == 0:
            out.append(r)
            while d % r == 0:
                d //= r
        r += 1
    if d > 1:
        out.append(d)
    return out


def is_irreducible(field: Field, f) -> bool:
    """Rabin's criterion: t^{q^d} = t mod f and gcd(t^{q^{d/r}} - t, f) = 1
    for each prime r dividing d."""
    d = poly_degree(f)
    if d < 1:
        return False
    if d == 1:
        return True
    q = field.q
    t = poly_t()
    t_red = poly_mod(field, t, f)
    if poly_pow_mod(field, t, q ** d, f) != t_red:
        return False
    for r in _prime_factors(d):
        y = poly_pow_mod(field, t, q ** (d // r), f)
        if poly_gcd(field, poly_sub(field, y, t_red), f) != (1,):
            return False
    return True


@lru_cache(maxsize=None)
def _phi_cached(field: Field, dmax: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for d in range(1, dmax + 1):
        found = []
        for enc in range(field.q ** d):
            if enc % field.q == 0:  # constant term 0: divisible by t
                continue
            coeffs = []
            m = enc
            for _ in range(d):
                coeffs.append(m % field.q)
                m //= field.q
            f = (*coeffs, 1)
            if d == 1 or is_irreducible(field, f):
                found.append(f)
        found.sort(key=lambda g: poly_key(field, g))
        out.extend(found)
    return tuple(out)


def enumerate_phi(field: Field, dmax: int) -> list[tuple[int, ...]]:
    """All monic irreducibles of degree <= dmax except t, canonically ordered."""
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    return list(_phi_cached(field, dmax))


def factor_monic(field: Field, f) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Factor a monic polynomial into (irreducible, multiplicity) pairs.

    Trial division: powers of t come off via the constant term, linear factors
    via root scans, then enumerated irreducibles of degree <= deg/2; whatever
    remains is itself irreducible.  Result sorted by poly_key (t first when
    present, encoded as degree-1 with root 0).
    """
    f = poly_trim(f)
    if not f or f[-1] != 1:
        raise ValueError("factor_monic requires a monic polynomial")
    factors: list[tuple[tuple[int, ...], int]] = []
    # powers of t
    k = 0
    while len(f) > 1 and f[0] == 0:
        f = f[1:]
        k += 1
    if k:
        factors.append((poly_t(), k))
    # linear factors by root scan
    for xi in field.units():
        if len(f) == 1:
            break
        if poly_eval(field, f, xi) == 0:
            g = t_minus(field, xi)
            m = 0
            while True:
                quo, rem = poly_divmod(field, f, g)
                if rem:
                    break
                f, m = quo, m + 1
            factors.append((g, m))
    # higher-degree factors by trial division
    for g in _phi_cached(field, max(poly_degree(f) // 2, 1)):
        if poly_degree(g) < 2:
            continue
        if 2 * poly_degree(g) > poly_degree(f):
            break
        m = 0
        while True:
            quo, rem = poly_divmod(field, f, g)
            if rem:
                break
            f, m = quo, m + 1
        if m:
            factors.append((g, m))
    if len(f) > 1:
        factors.append((f, 1))
    factors.sort(key=lambda fm: poly_key(field, fm[0]))
    return tuple(factors)


# ---------------------------------------------------------------------------
# companion and block matrices
# ---------------------------------------------------------------------------

def companion(field: Field, f) -> np.ndarray:
    """Companion matrix: 1's on the superdiagonal, negated low coefficients
    of f across the last row."""
    d = poly_degree(f)
    if d < 1 or f[-1] != 1:
        raise ValueError("companion requires a monic polynomial of degree >= 1")
    neg = field.neg_table
    M = np.zeros((d, d), dtype=np.uint8)
    for i in range(d - 1):
        M[i, i + 1] = 1
    M[d - 1, :] = [neg[c] for c in f[:-1]]
    return M


def jordan_block(field: Field, f, m: int) -> np.ndarray:
    """m diagonal copies of companion(f) with identity blocks on the block
    superdiagonal."""
    if m < 1:
        raise ValueError("block count must be >= 1")
    d = poly_degree(f)
    J = companion(field, f)
    M = np.zeros((d * m, d * m), dtype=np.uint8)
    eye = np.eye(d, dtype=np.uint8)
    for i in range(m):
        M[i * d:(i + 1) * d, i * d:(i + 1) * d] = J
        if i + 1 < m:
            M[i * d:(i + 1) * d, (i + 1) * d:(i + 2) * d] = eye
    return M


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

def format_poly(field: Field, f, var: str = "t") -> str:
    """Descending-degree text with coefficients in the field's element syntax;
    composite coefficients are parenthesized."""

    def fmt(c: int) -> str:
        text = field.format_element(c)
        return f"({text})" if ("+" in text or "-" in text) else text

    return format_terms(poly_trim(f), var, fmt)


def parse_poly(field: Field, s: str, var: str = "t") -> tuple[int, ...]:
    """Parse polynomial text, normalizing to canonical ascending coefficients."""
    add = field.add_table
    coeffs: dict[int, int] = {}
    for sign, term in split_terms(s):
        coeff_text, k = parse_term(term, var)
        if coeff_text is None:
            c = 1
        else:
            if coeff_text.startswith("(") and coeff_text.endswith(")"):
                coeff_text = coeff_text[1:-1]
            c = field.parse_element(coeff_text)
        if sign < 0:
            c = field.neg_table[c]
        coeffs[k] = add[coeffs.get(k, 0)][c]
    out = [0] * (max(coeffs) + 1 if coeffs else 0)
    for k, c in coeffs.items():
        out[k] = c
    return poly_trim(out)
