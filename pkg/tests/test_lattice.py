"""Tests for lattices, Hermite form, enumeration, and orders."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfint.errors import MaximalOrderNotFoundError
from halfint.lattice import (
    Lattice4,
    Order,
    count_by_value,
    eichler_order,
    frac_gcd,
    hnf_rows,
    left_order_lattice,
    mat_det,
    mat_inv,
    mat_mul,
    maximal_order,
    right_order_lattice,
    short_vectors,
)
from halfint.quat import ONE, QuaternionAlgebra, conj, qelt, qscale

B25 = QuaternionAlgebra(2, 5)
B11 = QuaternionAlgebra(1, 1)


# ---------------------------------------------------------------------------
# linear algebra helpers
# ---------------------------------------------------------------------------


def test_mat_inv_roundtrip():
    A = [[Fraction(1), Fraction(2), Fraction(0)],
         [Fraction(0), Fraction(1), Fraction(5, 2)],
         [Fraction(3), Fraction(0), Fraction(1)]]
    eye = mat_mul(A, mat_inv(A))
    assert eye == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_mat_det():
    A = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    assert mat_det(A) == 1
    assert mat_det([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 0


def test_frac_gcd():
    assert frac_gcd([Fraction(4), Fraction(6)]) == 2
    assert frac_gcd([Fraction(1, 2), Fraction(1, 3)]) == Fraction(1, 6)
    assert frac_gcd([Fraction(3, 4), Fraction(9, 2)]) == Fraction(3, 4)
    assert frac_gcd([]) == 0


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _random_unimodular(rng, n=4):
    """Product of elementary matrices: determinant +-1."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(12):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        for t in range(n):
            M[i][t] += c * M[j][t]
    return M


def test_hnf_shape_and_idempotence():
    rows = [[2, 1, 0, 5], [0, 3, 1, 1], [4, 1, 1, 0], [0, 0, 0, 7]]
    h = hnf_rows(rows)
    assert len(h) == 4
    for i in range(4):
        assert h[i][i] > 0
        for j in range(i):
            assert h[i][j] == 0
        for r in range(i):
            assert 0 <= h[r][i] < h[i][i]
    assert hnf_rows(h) == h


def test_hnf_invariant_under_unimodular():
    rng = random.Random(7)
    rows = [[2, 1, 0, 5], [0, 3, 1, 1], [4, 1, 1, 0], [1, 0, 0, 7]]
    h = hnf_rows(rows)
    for _ in range(25):
        U = _random_unimodular(rng)
        transformed = mat_mul(U, rows)
        assert hnf_rows([[int(x) for x in r] for r in transformed]) == h


def test_hnf_rank_deficient():
    assert hnf_rows([[1, 2, 3, 4], [2, 4, 6, 8]]) == [[1, 2, 3, 4]]
    assert hnf_rows([[0, 0, 0, 0]]) == []


# ---------------------------------------------------------------------------
# exact short-vector enumeration vs. box brute force
# ---------------------------------------------------------------------------


def _brute_counts(gram, bound, box):
    n = len(gram)
    out = {}
    for c in itertools.product(range(-box, box + 1), repeat=n):
        q = sum(gram[i][j] * c[i] * c[j] for i in range(n) for j in range(n))
        if q <= bound:
            out[Fraction(q)] = out.get(Fraction(q), 0) + 1
    return out


@pytest.mark.parametrize(
    "gram,bound,box",
    [
        ([[2, 1], [1, 2]], 12, 6),
        ([[1, 0, 0], [0, 2, 1], [0, 1, 3]], 10, 6),
        ([[2, 0, 1, 0], [0, 3, 0, 1], [1, 0, 4, 0], [0, 1, 0, 5]], 9, 5),
        ([[Fraction(1, 2), 0], [0, Fraction(5, 3)]], 7, 8),
    ],
)
def test_short_vectors_match_brute_force(gram, bound, box):
    got = count_by_value(gram, bound)
    want = _brute_counts(gram, bound, box)
    assert got == want


def test_short_vectors_includes_zero_and_signs():
    pairs = list(short_vectors([[1, 0], [0, 1]], 2))
    vecs = [v for v, _ in pairs]
    assert (0, 0) in vecs
    assert ((1, 0) in vecs) and ((-1, 0) in vecs)
    assert len(vecs) == len(set(vecs))  # no duplicates


def test_short_vectors_deterministic():
    gram = [[2, 1], [1, 4]]
    assert list(short_vectors(gram, 9)) == list(short_vectors(gram, 9))


def test_short_vectors_rejects_indefinite():
    with pytest.raises(ValueError):
        list(short_vectors([[1, 0], [0, -1]], 5))


# ---------------------------------------------------------------------------
# lattice basics
# ---------------------------------------------------------------------------


def _std(alg):
    return Lattice4.standard_order(alg)


def test_canonical_form_and_equality():
    L1 = Lattice4.from_frac_rows(
        B25, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    )
    L2 = Lattice4.from_frac_rows(
        B25, [[1, 1, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
    )
    assert L1 == L2 == _std(B25)
    assert hash(L1) == hash(L2)


def test_from_vectors_rejects_degenerate():
    with pytest.raises(ValueError):
        Lattice4.from_vectors(B25, [qelt(1), qelt(2), qelt(0, 1), qelt(0, 0, 1)])


def test_contains_and_index():
    L = _std(B25)
    half = L.scale(Fraction(1, 2))
    assert half.contains_lattice(L)
    assert half.index_over(L) == 16
    assert L.index_over(half) == Fraction(1, 16)
    assert L.contains(qelt(3, -2, 1, 0))
    assert not L.contains(qelt(Fraction(1, 2)))


def test_add_intersect_duality():
    L = _std(B25)
    M = L.scale(Fraction(3, 2))
    assert L.add(M) == L.scale(Fraction(1, 2))
    assert L.intersect(M) == L.scale(3)
    # distributes around: (L + M) contains both, (L cap M) contained in both
    S, C = L.add(M), L.intersect(M)
    for X in (L, M):
        assert S.contains_lattice(X)
        assert X.contains_lattice(C)


def test_product_of_standard_order():
    L = _std(B25)
    assert L.product(L) == L


def test_conjugate_involution():
    L = Lattice4.from_vectors(
        B25,
        [qelt(Fraction(1, 2), Fraction(1, 2)), qelt(0, 1), qelt(0, 0, 1), qelt(0, 0, 0, 1)],
    )
    assert L.conjugate().conjugate() == L


def test_norm_content():
    L = _std(B25)
    assert L.norm_content() == 1
    assert L.scale(2).norm_content() == 4
    assert L.scale(Fraction(1, 3)).norm_content() == Fraction(1, 9)


def test_reduced_discriminant_standard():
    # disc of Z<1,i,j,k> is 4ab
    assert _std(B25).reduced_discriminant() == 40
    assert _std(B11).reduced_discriminant() == 4


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------


def test_standard_lattice_is_order():
    assert _std(B25).is_order()
    assert not _std(B25).scale(Fraction(1, 2)).is_order()


def test_right_order_of_order_is_itself():
    L = _std(B25)
    assert right_order_lattice(L) == L
    assert left_order_lattice(L) == L


def test_order_units_of_standard():
    # Z<1,i,j,k> in Hamilton's algebra has units {+-1, +-i, +-j, +-k}
    assert Order(_std(B11)).unit_count == 8


def test_hurwitz_order():
    M = maximal_order(B11)
    assert M.reduced_discriminant == 2
    # the Hurwitz order has 24 units
    assert M.unit_count == 24
    assert M.lattice.contains(qelt(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))


@pytest.mark.parametrize(
    "alg,disc",
    [
        (QuaternionAlgebra(1, 1), 2),
        (QuaternionAlgebra(1, 3), 3),
        (QuaternionAlgebra(2, 5), 5),
        (QuaternionAlgebra(1, 7), 7),
        (QuaternionAlgebra(1, 11), 11),
        (QuaternionAlgebra(2, 37), 37),
    ],
)
def test_maximal_orders(alg, disc):
    M = maximal_order(alg)
    assert M.reduced_discriminant == disc
    assert M.lattice.is_order()
    assert M.lattice.contains(ONE)


def test_right_order_conjugation_covariance():
    # O_r(O x) = x^{-1} O x
    M = maximal_order(B25)
    x = qelt(1, 1, 0, 1)
    nx = B25.nrd(x)
    xinv = qscale(1 / nx, conj(x))
    ideal = Lattice4.from_vectors(B25, [B25.mul(b, x) for b in M.basis()])
    got = right_order_lattice(ideal)
    want = Lattice4.from_vectors(
        B25, [B25.mul(B25.mul(xinv, b), x) for b in M.basis()]
    )
    assert got == want
    assert left_order_lattice(ideal) == M.lattice


@pytest.mark.parametrize(
    "signs,level,a_b",
    [
        ({3: 1, 5: -1}, 15, (2, 5)),
        ({11: -1}, 11, (1, 11)),
        ({3: -1, 7: 1}, 21, (1, 3)),
        ({3: -1, 11: 1}, 33, (1, 3)),
        ({3: 1, 11: -1}, 33, (1, 11)),
        ({5: -1, 7: 1}, 35, (2, 5)),
        ({37: -1}, 37, (2, 37)),
    ],
)
def test_eichler_orders(signs, level, a_b):
    from halfint.quat import algebra_for_level

    alg = algebra_for_level(level, signs)
    assert (alg.a, alg.b) == a_b
    E = eichler_order(alg, level)
    assert E.reduced_discriminant == level
    assert E.lattice.is_order()


def test_eichler_rejects_bad_level():
    with pytest.raises(ValueError):
        eichler_order(B25, 7)  # not a multiple of disc 5
    with pytest.raises(ValueError):
        eichler_order(B25, 25)  # cofactor shares a prime with disc
