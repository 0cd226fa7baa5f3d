import pytest

from acterwilliger.catalog import CATALOG_SPECS, three2_q8
from acterwilliger.groups import cyclic, group_from_permutations
from acterwilliger.linalg import RatMatrix
from acterwilliger.scheme import (
    adjacency_matrix,
    brute_force_tensor,
    build_scheme,
    class_product_expansion,
    dual_idempotent,
    is_almost_commutative,
    verify_scheme_axioms,
)

from reference_data import label_map

ALL = sorted(CATALOG_SPECS)


def test_cyclic_tensor():
    for n in (1, 2, 5, 6):
        s = build_scheme(cyclic(n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert s.p(i, j, k) == ((i + j - k) % n == 0)


def test_s3_products():
    s = build_scheme(group_from_permutations([[1, 2, 0], [1, 0, 2]]))
    three_cycles = next(i for i, c in enumerate(s.partition.classes) if len(c) == 2)
    assert s.p(three_cycles, three_cycles, 0) == 2
    assert s.p(three_cycles, three_cycles, three_cycles) == 1


def test_three2_q8_square_of_order_four_class():
    g = three2_q8()
    s = build_scheme(g)
    lab = label_map(g)
    c3 = lab[3]
    assert [s.p(c3, c3, lab[k]) for k in (0, 1, 2)] == [18, 18, 18]
    assert class_product_expansion(s, lab[1], lab[1])[lab[2]] == 9


@pytest.mark.parametrize("name", ALL)
def test_counting_matches_brute_force(name, group, scheme):
    assert brute_force_tensor(group(name)) == scheme(name).p_tensor


@pytest.mark.parametrize("name", ALL)
def test_axioms(name, scheme):
    report = verify_scheme_axioms(scheme(name))
    assert report and all(report.values()), report
    if scheme(name).group.order <= 72:
        assert "products_expand" in report and "representative_independence" in report


def test_small_matrices():
    s = build_scheme(cyclic(2))
    assert adjacency_matrix(s, 0) == RatMatrix.identity(2)
    assert adjacency_matrix(s, 1).to_rows() == [[0, 1], [1, 0]]
    s = build_scheme(group_from_permutations([[1, 2, 0], [1, 0, 2]]))
    n, m = 6, s.n_classes
    total = adjacency_matrix(s, 0)
    for i in range(1, m):
        total = total + adjacency_matrix(s, i)
    assert total == RatMatrix.from_rows([[1] * n] * n)
    e_sum = dual_idempotent(s, 0)
    for i in range(1, m):
        e_sum = e_sum + dual_idempotent(s, i)
    assert e_sum == RatMatrix.identity(n)
    assert dual_idempotent(s, 0)[0, 0] == 1 and dual_idempotent(s, 0).trace() == 1
    assert (dual_idempotent(s, 1) @ dual_idempotent(s, 2)).is_zero()


def test_adjacency_rows_and_transposes(scheme):
    s = scheme("Q8")
    for i in range(s.n_classes):
        a = adjacency_matrix(s, i)
        assert all(sum(a.row(r)) == s.class_sizes[i] for r in range(8))
        assert a.transpose() == adjacency_matrix(s, s.partition.inverse_class[i])


def test_index_errors():
    s = build_scheme(cyclic(3))
    with pytest.raises(IndexError):
        adjacency_matrix(s, 3)
    with pytest.raises(IndexError):
        dual_idempotent(s, -1)
    with pytest.raises(IndexError):
        class_product_expansion(s, 0, 7)


def test_ac_examples(scheme):
    assert is_almost_commutative(scheme("Z12")).holds
    assert is_almost_commutative(scheme("(Z3)^2:Q8")).holds
    res = is_almost_commutative(scheme("S4"))
    assert not res.holds
    h, i, js = res.witness
    assert h != i and len(js) != 1
    assert sorted(j for j in range(5) if scheme("S4").p(i, j, h)) == js


def test_ac_matches_definition(scheme):
    """Direct count of j's per ordered pair, independent of the witness search."""
    for name in ALL:
        s = scheme(name)
        m = s.n_classes
        direct = all(sum(1 for j in range(m) if s.p(i, j, h)) == 1
                     for h in range(m) for i in range(m) if h != i)
        assert is_almost_commutative(s).holds == direct


def test_rebuild_is_identical():
    a = build_scheme(three2_q8())
    b = build_scheme(three2_q8())
    assert a.p_tensor == b.p_tensor and list(a.p_tensor) == list(b.p_tensor)
    assert a.triple_count() == b.triple_count() == 44
