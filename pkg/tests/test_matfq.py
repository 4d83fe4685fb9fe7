"""Exact linear algebra over F_q: elimination, characteristic polynomials,
conjugacy invariants, and conjugator search."""

import itertools
import random

import numpy as np
import pytest

from glq import matfq, polyalg
from glq.field import field_make

F2 = field_make(2)
F3 = field_make(3)
F4 = field_make(2, 2)
F5 = field_make(5)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def det_oracle(field, entries):
    """Determinant of a matrix of polynomials by the Leibniz permutation sum."""
    n = len(entries)
    total = ()
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = (1,)
        for i in range(n):
            term = polyalg.poly_mul(field, term, entries[i][perm[i]])
        if inversions % 2:
            term = polyalg.poly_neg(field, term)
        total = polyalg.poly_add(field, total, term)
    return total


def char_poly_oracle(field, A):
    """det(tI - A) via the permutation-sum determinant, entrywise polynomials."""
    n = A.shape[0]
    entries = [
        [
            polyalg.poly_sub(
                field,
                (0, 1) if i == j else (),
                (int(A[i][j]),),
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    return det_oracle(field, entries)


def kernel_count_oracle(field, A):
    """Count of kernel vectors by exhaustive scan (tiny matrices only)."""
    m, n = A.shape
    count = 0
    for vec in itertools.product(field.elements(), repeat=n):
        v = np.array(vec, dtype=np.uint8)
        if not matfq.mat_mul(field, A, v.reshape(n, 1)).any():
            count += 1
    return count


def random_matrix(field, n, rng):
    return np.array(
        [[rng.randrange(field.q) for _ in range(n)] for _ in range(n)],
        dtype=np.uint8,
    )


def random_invertible(field, n, rng):
    while True:
        A = random_matrix(field, n, rng)
        if matfq.rank(field, A) == n:
            return A


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def test_mat_mul_prime_field():
    A = matfq.mat_from_rows(F3, [[1, 2], [0, 1]])
    B = matfq.mat_from_rows(F3, [[2, 1], [1, 1]])
    assert matfq.mat_mul(F3, A, B).tolist() == [[1, 0], [1, 1]]


def test_mat_mul_extension_field():
    x = matfq.mat_from_rows(F4, [[2]])
    assert matfq.mat_mul(F4, x, x).tolist() == [[3]]  # x * x = x + 1
    A = matfq.mat_from_rows(F4, [[2, 1], [0, 3]])
    B = matfq.mat_from_rows(F4, [[1, 2], [2, 0]])
    # row 0: [x*1 + 1*x, x*x + 0] = [0, x+1]; row 1: [(x+1)x, 0] = [x^2+x, 0] = [1, 0]
    assert matfq.mat_mul(F4, A, B).tolist() == [[0, 3], [1, 0]]


def test_mat_add_sub_neg():
    A = matfq.mat_from_rows(F5, [[1, 4], [2, 3]])
    B = matfq.mat_from_rows(F5, [[3, 3], [4, 4]])
    assert matfq.mat_add(F5, A, B).tolist() == [[4, 2], [1, 2]]
    assert matfq.mat_sub(F5, A, B).tolist() == [[3, 1], [3, 4]]
    assert matfq.mat_add(F5, A, matfq.mat_neg(F5, A)).tolist() == [[0, 0], [0, 0]]


def test_block_diag_and_transpose():
    A = matfq.mat_from_rows(F3, [[1, 2], [0, 1]])
    B = matfq.mat_from_rows(F3, [[2]])
    M = matfq.block_diag([A, B])
    assert M.tolist() == [[1, 2, 0], [0, 1, 0], [0, 0, 2]]
    assert matfq.transpose(M).tolist() == [[1, 0, 0], [2, 1, 0], [0, 0, 2]]


def test_mat_from_rows_rejects_bad_entries():
    with pytest.raises(ValueError):
        matfq.mat_from_rows(F3, [[0, 3]])
    with pytest.raises(ValueError):
        matfq.mat_from_rows(F3, [1, 2])


@pytest.mark.parametrize("field", [F2, F3, F4, F5])
def test_mat_mul_associative_sweep(field):
    rng = random.Random(11)
    for _ in range(10):
        A = random_matrix(field, 3, rng)
        B = random_matrix(field, 3, rng)
        C = random_matrix(field, 3, rng)
        left = matfq.mat_mul(field, matfq.mat_mul(field, A, B), C)
        right = matfq.mat_mul(field, A, matfq.mat_mul(field, B, C))
        assert matfq.mat_eq(left, right)


# ---------------------------------------------------------------------------
# rank / kernel / inverse / nullspace
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("field", [F2, F3, F4])
@pytest.mark.parametrize("shape", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_rank_matches_kernel_count(field, shape):
    rng = random.Random(shape[0] * 10 + shape[1])
    for _ in range(8):
        A = np.array(
            [[rng.randrange(field.q) for _ in range(shape[1])]
             for _ in range(shape[0])],
            dtype=np.uint8,
        )
        r = matfq.rank(field, A)
        assert kernel_count_oracle(field, A) == field.q ** (shape[1] - r)
        assert matfq.kernel_dim(field, A) == shape[1] - r


@pytest.mark.parametrize("field", [F2, F3, F4, F5])
def test_rank_equals_rank_of_transpose(field):
    rng = random.Random(7)
    for _ in range(12):
        A = random_matrix(field, 4, rng)
        assert matfq.rank(field, A) == matfq.rank(field, matfq.transpose(A))


def test_inverse_frozen_cases():
    assert matfq.inverse(F3, matfq.mat_from_rows(F3, [[2, 0], [0, 1]])).tolist() \
        == [[2, 0], [0, 1]]
    J = polyalg.jordan_block(F3, polyalg.t_minus_one(F3), 2)
    assert matfq.inverse(F3, J).tolist() == [[1, 2], [0, 1]]


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        matfq.inverse(F3, matfq.mat_from_rows(F3, [[1, 2], [2, 1]]))


@pytest.mark.parametrize("field", [F2, F3, F4, F5])
def test_inverse_round_trip_sweep(field):
    rng = random.Random(23)
    for n in (1, 2, 3, 4):
        A = random_invertible(field, n, rng)
        Ainv = matfq.inverse(field, A)
        assert matfq.mat_eq(matfq.mat_mul(field, A, Ainv), matfq.identity(n))
        assert matfq.mat_eq(matfq.mat_mul(field, Ainv, A), matfq.identity(n))


@pytest.mark.parametrize("field", [F2, F3, F4])
def test_nullspace_spans_kernel(field):
    rng = random.Random(31)
    for _ in range(8):
        A = np.array(
            [[rng.randrange(field.q) for _ in range(4)] for _ in range(2)],
            dtype=np.uint8,
        )
        basis = matfq.nullspace(field, A)
        assert len(basis) == matfq.kernel_dim(field, A)
        for v in basis:
            assert not matfq.mat_mul(field, A, v.reshape(-1, 1)).any()
        if basis:
            assert matfq.rank(field, np.stack(basis)) == len(basis)


# ---------------------------------------------------------------------------
# characteristic polynomial
# ---------------------------------------------------------------------------

def test_char_poly_frozen():
    assert matfq.char_poly(F3, matfq.mat_from_rows(F3, [[2, 0], [0, 1]])) == (2, 0, 1)
    J = polyalg.jordan_block(F3, polyalg.t_minus_one(F3), 2)
    assert matfq.char_poly(F3, J) == (1, 1, 1)  # (t-1)^2 = t^2 + t + 1 over F_3


@pytest.mark.parametrize("field", [F2, F3])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_char_poly_of_companion(field, d):
    for f in polyalg.enumerate_phi(field, d):
        if len(f) - 1 != d:
            continue
        assert matfq.char_poly(field, polyalg.companion(field, f)) == f


@pytest.mark.parametrize("field", [F2, F3, F4, F5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_char_poly_matches_oracle(field, n):
    rng = random.Random(100 * n + field.q)
    for _ in range(6):
        A = random_matrix(field, n, rng)
        assert matfq.char_poly(field, A) == char_poly_oracle(field, A)


@pytest.mark.parametrize("field", [F2, F3, F5])
def test_cayley_hamilton(field):
    rng = random.Random(41)
    for n in (2, 3, 4):
        A = random_matrix(field, n, rng)
        cp = matfq.char_poly(field, A)
        assert not matfq.poly_at_matrix(field, cp, A).any()


def test_char_poly_invariant_under_conjugation():
    rng = random.Random(55)
    A = random_matrix(F3, 4, rng)
    X = random_invertible(F3, 4, rng)
    B = matfq.mat_mul(F3, matfq.mat_mul(F3, X, A), matfq.inverse(F3, X))
    assert matfq.char_poly(F3, A) == matfq.char_poly(F3, B)


def test_poly_at_matrix_constant_and_linear():
    A = matfq.mat_from_rows(F3, [[1, 1], [0, 1]])
    assert matfq.poly_at_matrix(F3, (2,), A).tolist() == [[2, 0], [0, 2]]
    # A - 1 kills the diagonal
    assert matfq.poly_at_matrix(F3, (2, 1), A).tolist() == [[0, 1], [0, 0]]


# ---------------------------------------------------------------------------
# conjugacy invariants
# ---------------------------------------------------------------------------

def test_conjugacy_invariant_separates_unipotent_shapes():
    J = polyalg.jordan_block(F3, polyalg.t_minus_one(F3), 2)
    assert matfq.conjugacy_invariant(F3, J) != \
        matfq.conjugacy_invariant(F3, matfq.identity(2))


def test_conjugacy_invariant_rejects_singular():
    with pytest.raises(ValueError):
        matfq.conjugacy_invariant(F3, matfq.mat_from_rows(F3, [[1, 2], [2, 1]]))


def test_conjugacy_invariant_kernel_filtration():
    f = polyalg.t_minus_one(F3)
    A = matfq.block_diag([
        polyalg.jordan_block(F3, f, 2),
        polyalg.jordan_block(F3, f, 1),
    ])
    cp, data = matfq.conjugacy_invariant(F3, A)
    assert cp == polyalg.poly_pow_mod(F3, (2, 1), 3, (0, 0, 0, 0, 1))
    assert data == (((2, 1), (2, 3)),)


@pytest.mark.parametrize("field", [F2, F3, F4])
def test_conjugacy_invariant_constant_on_conjugates(field):
    rng = random.Random(field.q)
    for n in (2, 3):
        A = random_invertible(field, n, rng)
        inv = matfq.conjugacy_invariant(field, A)
        for _ in range(4):
            X = random_invertible(field, n, rng)
            B = matfq.mat_mul(field, matfq.mat_mul(field, X, A),
                              matfq.inverse(field, X))
            assert matfq.conjugacy_invariant(field, B) == inv


# ---------------------------------------------------------------------------
# commuting space
# ---------------------------------------------------------------------------

def test_commuting_space_solves_sylvester():
    rng = random.Random(3)
    A = random_matrix(F3, 3, rng)
    B = random_matrix(F3, 3, rng)
    for X in matfq.commuting_space(F3, A, B):
        assert matfq.mat_eq(matfq.mat_mul(F3, X, A), matfq.mat_mul(F3, B, X))


@pytest.mark.parametrize("field", [F2, F3])
def test_commuting_space_zero_for_coprime_blocks(field):
    """Intertwiners between blocks with coprime characteristic polynomials
    vanish."""
    linears = [f for f in polyalg.enumerate_phi(field, 2) if len(f) == 2]
    quads = [f for f in polyalg.enumerate_phi(field, 2) if len(f) == 3]
    for f1 in linears:
        for f2 in quads:
            A = polyalg.jordan_block(field, f1, 2)
            B = polyalg.companion(field, f2)
            assert matfq.commuting_space(field, A, B) == []
            assert matfq.commuting_space(field, B, A) == []
    for f1, f2 in itertools.permutations(linears, 2):
        A = polyalg.jordan_block(field, f1, 2)
        B = polyalg.jordan_block(field, f2, 2)
        assert matfq.commuting_space(field, A, B) == []


@pytest.mark.parametrize("field", [F2, F3])
def test_commutant_dimension_formula(field):
    """dim{X : XA = AX} = sum_f d(f) * sum_{i,j} min(lambda_i, lambda_j)."""
    f_lin = polyalg.t_minus_one(field)
    quad = next(f for f in polyalg.enumerate_phi(field, 2) if len(f) == 3)
    cases = [
        ([(f_lin, (1,))], 1),
        ([(f_lin, (2,))], 2),
        ([(f_lin, (1, 1))], 4),
        ([(f_lin, (2, 1))], 1 * (2 + 1 + 1 + 1)),
        ([(quad, (1,))], 2),
        ([(quad, (1, 1))], 8),
        ([(f_lin, (1,)), (quad, (1,))], 1 + 2),
    ]
    for spec_blocks, expected in cases:
        blocks = []
        for f, parts in spec_blocks:
            for m in parts:
                blocks.append(polyalg.jordan_block(field, f, m))
        A = matfq.block_diag(blocks)
        assert len(matfq.commuting_space(field, A, A)) == expected


# ---------------------------------------------------------------------------
# conjugator
# ---------------------------------------------------------------------------

def test_conjugator_frozen_pair():
    A = matfq.mat_from_rows(F3, [[1, 0], [0, 2]])
    B = matfq.mat_from_rows(F3, [[2, 0], [0, 1]])
    X = matfq.conjugator(F3, A, B, rng=random.Random(0))
    assert X is not None
    left = matfq.mat_mul(F3, matfq.mat_mul(F3, X, A), matfq.inverse(F3, X))
    assert matfq.mat_eq(left, B)


def test_conjugator_definitive_none():
    assert matfq.conjugator(
        F3,
        matfq.identity(2),
        matfq.mat_from_rows(F3, [[1, 0], [0, 2]]),
    ) is None
    # same characteristic polynomial, different block shape
    J = polyalg.jordan_block(F3, polyalg.t_minus_one(F3), 2)
    assert matfq.conjugator(F3, J, matfq.identity(2)) is None


@pytest.mark.parametrize("field", [F2, F3, F4, F5])
def test_conjugator_round_trip_sweep(field):
    rng = random.Random(field.q * 17)
    for n in (2, 3):
        A = random_invertible(field, n, rng)
        X0 = random_invertible(field, n, rng)
        B = matfq.mat_mul(field, matfq.mat_mul(field, X0, A),
                          matfq.inverse(field, X0))
        X = matfq.conjugator(field, A, B, rng=rng)
        assert X is not None
        got = matfq.mat_mul(field, matfq.mat_mul(field, X, A),
                            matfq.inverse(field, X))
        assert matfq.mat_eq(got, B)


def test_conjugator_scalar_versus_nonscalar():
    assert matfq.conjugator(
        F5,
        matfq.scalar_matrix(F5, 2, 2),
        matfq.mat_from_rows(F5, [[2, 1], [0, 2]]),
    ) is None


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def test_matrix_text_round_trip():
    A = matfq.parse_matrix(F3, "2,0;0,1")
    assert A.tolist() == [[2, 0], [0, 1]]
    assert matfq.format_matrix(F3, A) == "2,0;0,1"


def test_matrix_text_extension_field():
    A = matfq.parse_matrix(F4, "x,1;0,x+1")
    assert A.tolist() == [[2, 1], [0, 3]]
    assert matfq.format_matrix(F4, A) == "x,1;0,x+1"


def test_parse_matrix_rejects_ragged():
    with pytest.raises(ValueError):
        matfq.parse_matrix(F3, "1,2;1")
