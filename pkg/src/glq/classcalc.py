"""Conjugacy-class orbits in GL_n(q), exact class-sum products and structure
constants, their stable large-n values, and the block normal form for
length-additive factorizations.

The product of two class sums K_λ(n)·K_μ(n) = Σ_ν a^ν_λμ(n)·K_ν(n) is
computed by counting, never by floating point: a^ν_λμ(n) is the number of
ways one fixed element of 𝒦_ν factors as g·h with g ∈ 𝒦_λ and h ∈ 𝒦_μ.
Only the smaller of the two classes is ever enumerated.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterator

import numpy as np

from . import matfq, polyalg
from .errors import (ClassEmptyError, ClassTooLargeError,
                     LengthNotAdditiveError, ResourceBoundError)
from .field import field_make
from .gltype import (GLType, canonical_matrix, class_size, empty_type,
                     enumerate_plain_types, gl_order, gltype_sort_key, lift,
                     min_rank, modified_type_of, norm, reflection_length,
                     type_of)

if TYPE_CHECKING:
    from .field import Field

__all__ = [
    "ClassOrbit", "ClassSumExpansion", "TripleNormalForm", "StabilityReport",
    "generators", "enumerate_class", "enumerate_group",
    "enumerate_modified_types", "structure_constant_at", "multiply_class_sums",
    "multiply_oracle", "stable_constant", "stable_product", "verify_stability",
    "normalize_triple",
    "DEFAULT_MEMORY_BOUND", "DEFAULT_PAIR_BOUND", "DEFAULT_GROUP_BOUND",
]

DEFAULT_MEMORY_BOUND = 5_000_000
DEFAULT_PAIR_BOUND = 10 ** 8
DEFAULT_GROUP_BOUND = 10 ** 7


# ---------------------------------------------------------------------------
# result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassOrbit:
    """A fully enumerated conjugacy class 𝒦_μ(n) with stored inverses."""

    field: "Field"
    mu: GLType
    n: int
    rep: np.ndarray
    elements: list
    inverses: list
    index: dict
    size: int

    def __contains__(self, A) -> bool:
        return A.tobytes() in self.index

    def __len__(self) -> int:
        return self.size


@dataclass
class ClassSumExpansion:
    """Terms of K_λ(n)·K_μ(n) = Σ a^ν·K_ν(n); n is None for stable products."""

    field: "Field"
    n: int | None
    lam: GLType
    mu: GLType
    terms: dict

    def get(self, nu: GLType) -> int:
        return self.terms.get(nu, 0)

    def items_sorted(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (norm(kv[0]), gltype_sort_key(kv[0])))


@dataclass
class TripleNormalForm:
    """z conjugates (g, h, gh) simultaneously into diag(·, I) block form."""

    z: np.ndarray
    gbar: np.ndarray
    hbar: np.ndarray


@dataclass
class StabilityReport:
    lam: GLType
    mu: GLType
    nu: GLType
    values: tuple
    passed: bool
    constant: int | None


# ---------------------------------------------------------------------------
# class enumeration
# ---------------------------------------------------------------------------

def generators(field: "Field", n: int) -> list:
    """A standard generating set of GL_n(q): diag(γ,1,…), the n-cycle, and
    the transvection I + E_{12} (the first alone for n = 1)."""
    gamma = field.multiplicative_generator()
    D = matfq.identity(n)
    D[0, 0] = gamma
    if n == 1:
        return [D]
    P = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        P[i, (i + 1) % n] = 1
    T = matfq.identity(n)
    T[0, 1] = 1
    return [D, P, T]


def _bfs_orbit(field: "Field", J: np.ndarray, expected: int):
    """Closure of J under conjugation by the generators, carrying inverses
    along for free: (sxs⁻¹)⁻¹ = sx⁻¹s⁻¹."""
    n = J.shape[0]
    gens = [(s, matfq.inverse(field, s)) for s in generators(field, n)]
    elements = [J.copy()]
    inverses = [matfq.inverse(field, J)]
    index = {J.tobytes(): 0}
    if field.e == 1:
        p = field.p
        gens64 = [(s.astype(np.int64), si.astype(np.int64)) for s, si in gens]
        i = 0
        while i < len(elements):
            g, gi = elements[i], inverses[i]
            i += 1
            for s, si in gens64:
                ng = ((s @ g @ si) % p).astype(np.uint8)
                key = ng.tobytes()
                if key not in index:
                    index[key] = len(elements)
                    elements.append(ng)
                    inverses.append(((s @ gi @ si) % p).astype(np.uint8))
    else:
        i = 0
        while i < len(elements):
            g, gi = elements[i], inverses[i]
            i += 1
            for s, si in gens:
                ng = matfq.mat_mul(field, matfq.mat_mul(field, s, g), si)
                key = ng.tobytes()
                if key not in index:
                    index[key] = len(elements)
                    elements.append(ng)
                    inverses.append(
                        matfq.mat_mul(field, matfq.mat_mul(field, s, gi), si))
    assert len(elements) == expected, \
        f"orbit size {len(elements)} != class size {expected}"
    return elements, inverses, index


def enumerate_class(mu: GLType, n: int, field: "Field" = None,
                    memory_bound: int = DEFAULT_MEMORY_BOUND) -> ClassOrbit:
    """All members of the modified-type-μ class in GL_n(q), with inverses."""
    F = field if field is not None else mu.field
    if F != mu.field:
        raise ValueError("field mismatch")
    size = class_size(mu, n)
    if size > memory_bound:
        raise ClassTooLargeError(
            f"class of size {size} exceeds the memory bound {memory_bound}; "
            "raise memory_bound, or compute coefficients via "
            "structure_constant_at against a smaller partner class")
    if memory_bound == DEFAULT_MEMORY_BOUND:
        return _enumerate_class_cached(mu, n)
    return _build_orbit(mu, n)


@lru_cache(maxsize=4)
def _enumerate_class_cached(mu: GLType, n: int) -> ClassOrbit:
    return _build_orbit(mu, n)


def _build_orbit(mu: GLType, n: int) -> ClassOrbit:
    F = mu.field
    J = canonical_matrix(lift(mu, n))
    elements, inverses, index = _bfs_orbit(F, J, class_size(mu, n))
    return ClassOrbit(field=F, mu=mu, n=n, rep=J, elements=elements,
                      inverses=inverses, index=index, size=len(elements))


def enumerate_group(field: "Field", n: int,
                    bound: int = DEFAULT_GROUP_BOUND) -> Iterator[np.ndarray]:
    """Every invertible n×n matrix exactly once, built row by row and pruning
    any prefix whose rows are dependent."""
    total = gl_order(field, n)
    if total > bound:
        raise ResourceBoundError(
            f"|GL_{n}({field.q})| = {total} exceeds the bound {bound}")
    add, mul = field.add_table, field.mul_table
    all_rows = list(itertools.product(range(field.q), repeat=n))
    zero = (0,) * n

    def extend(chosen: list, span: frozenset) -> Iterator[np.ndarray]:
        if len(chosen) == n:
            yield np.array(chosen, dtype=np.uint8)
            return
        for row in all_rows:
            if row in span:
                continue
            new_span = frozenset(
                tuple(add[a][mul[c][b]] for a, b in zip(v, row))
                for v in span for c in range(field.q)
            )
            yield from extend(chosen + [row], new_span)

    yield from extend([], frozenset({zero}))


def enumerate_modified_types(field: "Field", max_norm: int, n: int) -> list:
    """All modified types ν with ‖ν‖ ≤ max_norm that have members in GL_n(q),
    sorted by (norm, canonical type order)."""
    out = []
    for m in range(max_norm + 1):
        for ty in enumerate_plain_types(field, m):  # same data read as modified
            if min_rank(ty) <= n:
                out.append(ty)
    return sorted(out, key=lambda t: (norm(t), gltype_sort_key(t)))


# ---------------------------------------------------------------------------
# matching a target type without refactoring every product
# ---------------------------------------------------------------------------

def _target_profile(field: "Field", plain: GLType):
    """(char poly, per-repeated-factor expected kernel filtration) of a plain
    type; equality of both is equivalent to equality of plain types."""
    cp = (1,)
    repeated = []
    for f, parts in plain.entries:
        fm = polyalg.poly_pow(field, f, sum(parts))
        cp = polyalg.poly_mul(field, cp, fm)
        if sum(parts) > 1:
            d = len(f) - 1
            dims = tuple(d * sum(min(i, p) for p in parts)
                         for i in range(1, parts[0] + 1))
            repeated.append((f, dims))
    return cp, tuple(repeated)


def _matches_profile(field: "Field", M: np.ndarray, profile) -> bool:
    cp, repeated = profile
    if matfq.char_poly(field, M) != cp:
        return False
    for f, dims in repeated:
        B = matfq.poly_at_matrix(field, f, M)
        P = B
        for i, expected in enumerate(dims):
            if i:
                P = matfq.mat_mul(field, P, B)
            if matfq.kernel_dim(field, P) != expected:
                return False
    return True


# ---------------------------------------------------------------------------
# parallel work units (top level so they fork cleanly)
# ---------------------------------------------------------------------------

def _count_worker(payload) -> int:
    p, e, n, stacked, count, z_bytes, enum_on_left, profile = payload
    field = field_make(p, e)
    z = np.frombuffer(z_bytes, dtype=np.uint8).reshape(n, n)
    arr = np.frombuffer(stacked, dtype=np.uint8).reshape(count, n, n)
    total = 0
    for i in range(count):
        M = arr[i]
        prod = matfq.mat_mul(field, M, z) if enum_on_left \
            else matfq.mat_mul(field, z, M)
        if _matches_profile(field, prod, profile):
            total += 1
    return total


def _classify_worker(payload) -> Counter:
    p, e, n, stacked, count, fixed_bytes, enum_on_left = payload
    field = field_make(p, e)
    fixed = np.frombuffer(fixed_bytes, dtype=np.uint8).reshape(n, n)
    arr = np.frombuffer(stacked, dtype=np.uint8).reshape(count, n, n)
    counts: Counter = Counter()
    for i in range(count):
        M = arr[i]
        prod = matfq.mat_mul(field, M, fixed) if enum_on_left \
            else matfq.mat_mul(field, fixed, M)
        counts[modified_type_of(field, prod)] += 1
    return counts


def _run_chunked(worker, field: "Field", n: int, mats: list, tail, jobs: int):
    """Map `worker` over the matrix list in deterministic chunks; jobs == 1
    runs inline, larger values fork — results are bit-identical either way."""
    if jobs <= 1 or len(mats) < 2 * jobs:
        stacked = np.stack(mats).tobytes() if mats else b""
        return [worker((field.p, field.e, n, stacked, len(mats), *tail))]
    bounds = np.linspace(0, len(mats), jobs + 1, dtype=int)
    payloads = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        chunk = mats[lo:hi]
        payloads.append((field.p, field.e, n, np.stack(chunk).tobytes(),
                         len(chunk), *tail))
    import multiprocessing
    with multiprocessing.get_context("fork").Pool(jobs) as pool:
        return pool.map(worker, payloads)


# ---------------------------------------------------------------------------
# structure constants and class-sum products
# ---------------------------------------------------------------------------

def structure_constant_at(lam: GLType, mu: GLType, nu: GLType, n: int,
                          field: "Field" = None, jobs: int = 1,
                          memory_bound: int = DEFAULT_MEMORY_BOUND) -> int:
    """a^ν_λμ(n): the number of factorizations J_{ν↑n} = g·h with g ∈ 𝒦_λ(n)
    and h ∈ 𝒦_μ(n), counted over the smaller of the two classes."""
    F = field if field is not None else lam.field
    z = canonical_matrix(lift(nu, n))
    if class_size(lam, n) <= class_size(mu, n):
        orbit = enumerate_class(lam, n, F, memory_bound)
        profile = _target_profile(F, lift(mu, n))
        # g^{-1}·z must land in 𝒦_μ
        results = _run_chunked(_count_worker, F, n, orbit.inverses,
                               (z.tobytes(), True, profile), jobs)
    else:
        orbit = enumerate_class(mu, n, F, memory_bound)
        profile = _target_profile(F, lift(lam, n))
        # z·h^{-1} must land in 𝒦_λ
        results = _run_chunked(_count_worker, F, n, orbit.inverses,
                               (z.tobytes(), False, profile), jobs)
    return sum(results)


def multiply_class_sums(lam: GLType, mu: GLType, n: int,
                        field: "Field" = None, jobs: int = 1,
                        memory_bound: int = DEFAULT_MEMORY_BOUND,
                        ) -> ClassSumExpansion:
    """Full expansion K_λ(n)·K_μ(n) = Σ_ν a^ν·K_ν(n) from a single pass over
    the smaller class: with h₀ ∈ 𝒦_μ fixed, #{g ∈ 𝒦_λ : g·h₀ ∈ 𝒦_ν} is
    independent of the choice of h₀, so a^ν = |𝒦_μ|·#/|𝒦_ν|."""
    F = field if field is not None else lam.field
    size_lam = class_size(lam, n)
    size_mu = class_size(mu, n)
    if size_lam <= size_mu:
        orbit = enumerate_class(lam, n, F, memory_bound)
        fixed = canonical_matrix(lift(mu, n))
        results = _run_chunked(_classify_worker, F, n, orbit.elements,
                               (fixed.tobytes(), True), jobs)
        other_size = size_mu
    else:
        orbit = enumerate_class(mu, n, F, memory_bound)
        fixed = canonical_matrix(lift(lam, n))
        results = _run_chunked(_classify_worker, F, n, orbit.elements,
                               (fixed.tobytes(), False), jobs)
        other_size = size_lam
    counts: Counter = Counter()
    for c in results:
        counts.update(c)
    candidates = enumerate_modified_types(F, norm(lam) + norm(mu), n)
    assert set(counts) <= set(candidates), \
        "observed a product type outside the candidate set"
    terms = {}
    total = 0
    for nu in candidates:
        c = counts.get(nu, 0)
        if not c:
            continue
        size_nu = class_size(nu, n)
        a, rem = divmod(c * other_size, size_nu)
        assert rem == 0, "structure constant must be integral"
        terms[nu] = a
        total += a * size_nu
    assert total == size_lam * size_mu, \
        "counting identity Σ a^ν|𝒦_ν| = |𝒦_λ||𝒦_μ| failed"
    return ClassSumExpansion(field=F, n=n, lam=lam, mu=mu, terms=terms)


def multiply_oracle(lam: GLType, mu: GLType, n: int, field: "Field" = None,
                    pair_bound: int = DEFAULT_PAIR_BOUND,
                    memory_bound: int = DEFAULT_MEMORY_BOUND,
                    ) -> ClassSumExpansion:
    """Brute-force expansion over all |𝒦_λ|·|𝒦_μ| products; independent of
    the streaming path and used to validate it."""
    F = field if field is not None else lam.field
    size_lam = class_size(lam, n)
    size_mu = class_size(mu, n)
    if size_lam * size_mu > pair_bound:
        raise ResourceBoundError(
            f"{size_lam}·{size_mu} products exceed the oracle bound {pair_bound}")
    K_lam = enumerate_class(lam, n, F, memory_bound)
    K_mu = enumerate_class(mu, n, F, memory_bound)
    counts: Counter = Counter()
    for g in K_lam.elements:
        for h in K_mu.elements:
            counts[modified_type_of(F, matfq.mat_mul(F, g, h))] += 1
    terms = {}
    for nu, c in counts.items():
        a, rem = divmod(c, class_size(nu, n))
        assert rem == 0, "every class must be hit uniformly"
        terms[nu] = a
    return ClassSumExpansion(field=F, n=n, lam=lam, mu=mu, terms=terms)


# ---------------------------------------------------------------------------
# stable values
# ---------------------------------------------------------------------------

def stable_constant(lam: GLType, mu: GLType, nu: GLType,
                    field: "Field" = None, jobs: int = 1) -> int:
    """The n-independent top-degree coefficient a^ν_λμ, computed once at the
    smallest rank where 𝒦_ν is nonempty."""
    if norm(nu) != norm(lam) + norm(mu):
        raise ValueError(
            "stable constants exist only in top degree: "
            f"‖ν‖ = {norm(nu)} but ‖λ‖+‖μ‖ = {norm(lam) + norm(mu)}")
    k = min_rank(nu)
    if min_rank(lam) > k or min_rank(mu) > k:
        return 0  # a factor class is empty at rank k, hence at every n >= k
    return structure_constant_at(lam, mu, nu, k, field, jobs)


def stable_product(lam: GLType, mu: GLType, field: "Field" = None,
                   jobs: int = 1) -> ClassSumExpansion:
    """Top-degree part of K_λ·K_μ: every candidate ν with ‖ν‖ = ‖λ‖+‖μ‖,
    each evaluated at its own minimal rank."""
    F = field if field is not None else lam.field
    terms = {}
    for nu in enumerate_plain_types(F, norm(lam) + norm(mu)):  # as modified
        a = stable_constant(lam, mu, nu, F, jobs)
        if a:
            terms[nu] = a
    return ClassSumExpansion(field=F, n=None, lam=lam, mu=mu, terms=terms)


def verify_stability(lam: GLType, mu: GLType, nu: GLType,
                     field: "Field" = None, n_list=None,
                     jobs: int = 1) -> StabilityReport:
    """Recompute a^ν_λμ(n) at several n and check the values agree."""
    if norm(nu) != norm(lam) + norm(mu):
        raise ValueError("stability applies to top-degree coefficients only")
    k = min_rank(nu)
    ns = tuple(n_list) if n_list is not None else (k, k + 1, k + 2)
    if any(n < k for n in ns):
        raise ValueError(f"every test rank must be at least k = {k}")
    values = []
    for n in ns:
        try:
            a = structure_constant_at(lam, mu, nu, n, field, jobs)
        except ClassEmptyError:
            a = 0
        values.append((n, a))
    distinct = {a for _, a in values}
    passed = len(distinct) == 1
    return StabilityReport(lam=lam, mu=mu, nu=nu, values=tuple(values),
                           passed=passed,
                           constant=distinct.pop() if passed else None)


# ---------------------------------------------------------------------------
# the block normal form
# ---------------------------------------------------------------------------

def normalize_triple(field: "Field", g: np.ndarray, h: np.ndarray,
                     rng: random.Random | None = None) -> TripleNormalForm:
    """For a length-additive pair, produce z with z·g·z⁻¹ = diag(ḡ, I),
    z·h·z⁻¹ = diag(h̄, I), and z·gh·z⁻¹ the canonical block matrix."""
    n = g.shape[0]
    if g.shape != (n, n) or h.shape != (n, n):
        raise ValueError("normalize_triple requires equal square shapes")
    gh = matfq.mat_mul(field, g, h)
    l_g = reflection_length(field, g)
    l_h = reflection_length(field, h)
    l_gh = reflection_length(field, gh)
    if l_gh != l_g + l_h:
        raise LengthNotAdditiveError(
            f"length not additive: ℓ(gh) = {l_gh} but ℓ(g)+ℓ(h) = {l_g + l_h}")
    nu = modified_type_of(field, gh)
    k = min_rank(nu)
    J = canonical_matrix(lift(nu, n))
    z = matfq.conjugator(field, gh, J, rng=rng)
    assert z is not None, "gh is conjugate to its canonical matrix"
    zinv = matfq.inverse(field, z)
    gp = matfq.mat_mul(field, matfq.mat_mul(field, z, g), zinv)
    hp = matfq.mat_mul(field, matfq.mat_mul(field, z, h), zinv)
    eye = matfq.identity(n - k)
    for name, M in (("g", gp), ("h", hp)):
        if not (matfq.mat_eq(M[k:, k:], eye) and not M[:k, k:].any()
                and not M[k:, :k].any()):
            raise AssertionError(
                f"conjugated {name} is not in diag(·, I) block form")
    gbar = np.ascontiguousarray(gp[:k, :k])
    hbar = np.ascontiguousarray(hp[:k, :k])
    if not matfq.mat_eq(matfq.mat_mul(field, gbar, hbar), J[:k, :k]):
        raise AssertionError("block product does not match the canonical form")
    if k:
        if modified_type_of(field, gbar) != modified_type_of(field, g) or \
                modified_type_of(field, hbar) != modified_type_of(field, h):
            raise AssertionError("corner blocks changed modified type")
    return TripleNormalForm(z=z, gbar=gbar, hbar=hbar)
