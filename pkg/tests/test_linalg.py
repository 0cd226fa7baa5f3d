from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from acterwilliger.linalg import (
    DimensionMismatch,
    EchelonBasis,
    RatMatrix,
    format_rat,
    min_poly,
    null_space,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_lcm,
    poly_mul,
    rational_roots,
    rref_insert,
    solve_homogeneous,
)

small = st.integers(-3, 3).map(F)


def naive_rank(vectors):
    """Plain Gaussian elimination on a list-of-lists copy."""
    rows = [list(map(F, v)) for v in vectors]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def mat_poly(p, m):
    acc = RatMatrix.zeros(m.rows)
    power = RatMatrix.identity(m.rows)
    for c in p:
        acc = acc + power.scale(c)
        power = power @ m
    return acc


class TestRatMatrix:
    def test_arithmetic(self):
        a = RatMatrix.from_rows([[1, 2], [3, 4]])
        b = RatMatrix.from_rows([[0, 1], [1, 0]])
        assert (a @ b).to_rows() == [[2, 1], [4, 3]]
        assert (a + b).to_rows() == [[1, 3], [4, 4]]
        assert (a - a).is_zero()
        assert a.transpose().to_rows() == [[1, 3], [2, 4]]
        assert a.trace() == 5
        assert (F(1, 2) * a)[1, 1] == 2

    def test_shape_errors(self):
        with pytest.raises(DimensionMismatch):
            RatMatrix.identity(2) @ RatMatrix.identity(3)
        with pytest.raises(DimensionMismatch):
            RatMatrix.identity(2) + RatMatrix.identity(3)

    def test_csv_uses_num_den(self):
        m = RatMatrix.from_rows([[F(1, 2), -1], [0, 3]])
        assert m.to_csv() == "1/2,-1/1\n0/1,3/1\n"
        assert format_rat(F(-2, 4)) == "-1/2"

    def test_inverse_pairs_multiply_to_one(self):
        for a, b in [(3, 7), (-5, 2), (1, 1)]:
            assert F(a, b) * F(b, a) == 1


class TestEchelon:
    def test_insert_into_empty(self):
        b, new = rref_insert(EchelonBasis(3), [1, 2, 0])
        assert new and b.rank == 1

    def test_insert_in_span(self):
        b = EchelonBasis(3, [[1, 2, 0]])
        b2, new = rref_insert(b, [2, 4, 0])
        assert not new and b2 == b

    def test_rref_normalisation(self):
        b = EchelonBasis(3, [[1, 0, 0], [1, 1, 0]])
        assert b.pivot_cols == [0, 1]
        assert b.vectors[1] == {1: F(1)}

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            EchelonBasis(3).insert([1, 2])

    def test_coordinates(self):
        b = EchelonBasis(3, [[1, 0, 1], [0, 1, 1]])
        assert b.coordinates([2, 3, 5]) == {0: 2, 1: 3}
        with pytest.raises(ValueError):
            b.coordinates([0, 0, 1])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.lists(small, min_size=20, max_size=20), min_size=1, max_size=12),
           st.lists(small, min_size=20, max_size=20))
    def test_membership_matches_naive(self, vectors, probe):
        b = EchelonBasis(20, vectors)
        assert b.rank == naive_rank(vectors)
        assert (probe in b) == (naive_rank(vectors + [probe]) == naive_rank(vectors))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.lists(small, min_size=6, max_size=6), min_size=1, max_size=8))
    def test_rref_is_canonical(self, vectors):
        b = EchelonBasis(6, vectors)
        again = EchelonBasis(6, b.vectors)
        assert again == b
        assert EchelonBasis(6, list(reversed(vectors))) == b
        piv = b.pivot_cols
        for p, row in zip(piv, b.vectors):
            assert row[p] == 1 and min(row) == p
            assert all(q == p or q not in row for q in piv)


class TestNullSpace:
    def test_identity(self):
        assert solve_homogeneous(RatMatrix.identity(3)).rank == 0

    def test_zero(self):
        assert solve_homogeneous(RatMatrix.zeros(3)).rank == 3

    def test_single_row(self):
        ns = solve_homogeneous(RatMatrix.from_rows([[1, 1]]))
        assert ns.rank == 1 and [F(1), F(-1)] in ns

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=5))
    def test_rank_nullity(self, rows):
        ns = null_space(rows, 5)
        assert ns.rank == 5 - naive_rank(rows)
        for v in ns.dense_vectors():
            assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in rows)


class TestPolynomials:
    def test_min_poly_examples(self):
        assert min_poly(RatMatrix.identity(3)) == [-1, 1]
        assert min_poly(RatMatrix.zeros(3)) == [0, 1]
        assert min_poly(RatMatrix.diagonal([1, 2])) == [2, -3, 1]

    def test_min_poly_jordan_block(self):
        j = RatMatrix.from_rows([[2, 1], [0, 2]])
        assert min_poly(j) == [4, -4, 1]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.sampled_from([0, 0, 1, -1, 2]).map(F), min_size=n, max_size=n),
                           min_size=n, max_size=n)))
    def test_min_poly_annihilates_and_is_minimal(self, rows):
        m = RatMatrix.from_rows(rows)
        p = min_poly(m)
        assert p[-1] == 1 and len(p) - 1 <= m.rows
        assert mat_poly(p, m).is_zero()
        powers = EchelonBasis(m.rows ** 2)
        power, deg = RatMatrix.identity(m.rows), 0
        while powers.insert(power.flatten()):
            deg += 1
            power = power @ m
        assert deg == len(p) - 1

    def test_rational_roots_examples(self):
        assert rational_roots([2, -3, 1]) == ([1, 2], [1])
        assert rational_roots([1, 0, 1]) == ([], [1, 0, 1])
        assert rational_roots([0, -1, 1])[0] == [0, 1]

    def test_rational_roots_fractional(self):
        # (2t - 1)(3t + 2)(t^2 + 2)
        p = poly_mul(poly_mul([-1, 2], [2, 3]), [2, 0, 1])
        roots, rest = rational_roots(p)
        assert roots == [F(-2, 3), F(1, 2)]
        assert len(rest) == 3

    def test_rational_roots_large_coefficients_fall_back(self):
        big = 10 ** 12 + 39
        roots, rest = rational_roots(poly_mul([-big, 1], [3, 0, 1]))
        assert roots == [big] and len(rest) == 3

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4), max_size=4),
           st.sampled_from([[1], [1, 0, 1], [2, 0, 1], [1, 1, 1]]))
    def test_rational_roots_reconstruct(self, roots, residual):
        p = list(residual)
        for r in roots:
            p = poly_mul(p, [-r, 1])
        found, rest = rational_roots(p)
        assert sorted(found) == sorted(roots)
        q = rest
        for r in found:
            q = poly_mul(q, [-r, 1])
        lead = p[-1] / q[-1]
        assert [lead * c for c in q] == p

    def test_poly_helpers(self):
        a = poly_mul([-1, 1], [-2, 1])
        q, r = poly_divmod(a, [-1, 1])
        assert q == [-2, 1] and not any(r)
        assert poly_gcd(a, poly_mul([-1, 1], [5, 1])) == [-1, 1]
        assert poly_lcm([-1, 1], [-2, 1]) == a
        assert poly_eval(a, 3) == 2
