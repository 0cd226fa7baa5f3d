"""The group association scheme of a finite group.

Classes ``C_0 = {e}, C_1, ..., C_d`` give 0/1 adjacency matrices with
``(A_i)[x, y] = 1`` iff ``y x^-1`` lies in ``C_i`` and diagonal dual
idempotents ``E_i^*`` supported on ``C_i`` (base point: the identity).

Intersection numbers are counted combinatorially; matrix products are only
used to verify them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .groups import ConjugacyPartition, FiniteGroup, conjugacy_classes
from .linalg import RatMatrix

__all__ = [
    "GroupScheme",
    "ACResult",
    "build_scheme",
    "adjacency_matrix",
    "adjacency_rows",
    "dual_idempotent",
    "verify_scheme_axioms",
    "is_almost_commutative",
    "class_product_expansion",
    "brute_force_tensor",
]

Triple = Tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class GroupScheme:
    group: FiniteGroup
    partition: ConjugacyPartition
    class_sizes: Tuple[int, ...]
    p_tensor: Dict[Triple, int]

    @property
    def d(self) -> int:
        return len(self.class_sizes) - 1

    @property
    def n_classes(self) -> int:
        return len(self.class_sizes)

    def p(self, i: int, j: int, k: int) -> int:
        """Intersection number ``p_ij^k`` (zero if absent)."""
        return self.p_tensor.get((i, j, k), 0)

    def nonzero_triples(self) -> List[Triple]:
        return sorted(self.p_tensor)

    def triple_count(self) -> int:
        return len(self.p_tensor)

    def _check_index(self, i: int) -> None:
        if not 0 <= i <= self.d:
            raise IndexError(f"class index {i} outside 0..{self.d}")


def _count_from(group: FiniteGroup, class_of, z: int) -> Dict[Tuple[int, int], int]:
    counts: Dict[Tuple[int, int], int] = {}
    mul, inv = group.mul, group.inv
    for a in range(group.order):
        key = (class_of[a], class_of[mul[inv[a]][z]])
        counts[key] = counts.get(key, 0) + 1
    return counts


def build_scheme(group: FiniteGroup, check_representatives: bool = False) -> GroupScheme:
    """Conjugacy classes plus ``p_ij^k = #{a in C_i : a^-1 z in C_j}`` for ``z`` in ``C_k``.

    One pass over the group per class. With ``check_representatives`` every
    ``z`` in every class is recounted and must agree.
    """
    part = conjugacy_classes(group)
    tensor: Dict[Triple, int] = {}
    for k, cls in enumerate(part.classes):
        counts = _count_from(group, part.class_of, cls[0])
        for (i, j), c in counts.items():
            tensor[(i, j, k)] = c
        if check_representatives:
            for z in cls[1:]:
                if _count_from(group, part.class_of, z) != counts:
                    raise AssertionError(f"intersection numbers depend on the representative of C_{k}")
    return GroupScheme(group, part, tuple(len(c) for c in part.classes),
                       dict(sorted(tensor.items())))


def brute_force_tensor(group: FiniteGroup, part: Optional[ConjugacyPartition] = None
                       ) -> Dict[Triple, int]:
    """Independent route: tally every product ``a b`` over all pairs, then divide by ``|C_k|``."""
    part = part or conjugacy_classes(group)
    cof = part.class_of
    tally: Dict[Triple, int] = {}
    for a in range(group.order):
        row = group.mul[a]
        for b in range(group.order):
            key = (cof[a], cof[b], cof[row[b]])
            tally[key] = tally.get(key, 0) + 1
    out = {}
    for (i, j, k), c in tally.items():
        size = len(part.classes[k])
        if c % size:
            raise AssertionError("class products are not constant on classes")
        out[(i, j, k)] = c // size
    return dict(sorted(out.items()))


def adjacency_rows(scheme: GroupScheme, i: int) -> List[List[int]]:
    """Sparse form of ``A_i``: for each row ``x`` the sorted columns ``c x`` with ``c`` in ``C_i``."""
    scheme._check_index(i)
    g = scheme.group
    cls = scheme.partition.classes[i]
    return [sorted(g.mul[c][x] for c in cls) for x in range(g.order)]


def adjacency_matrix(scheme: GroupScheme, i: int) -> RatMatrix:
    n = scheme.group.order
    e = [0] * (n * n)
    for x, cols in enumerate(adjacency_rows(scheme, i)):
        for y in cols:
            e[x * n + y] = 1
    return RatMatrix(n, n, e)


def dual_idempotent(scheme: GroupScheme, i: int) -> RatMatrix:
    scheme._check_index(i)
    members = set(scheme.partition.classes[i])
    return RatMatrix.diagonal([1 if y in members else 0 for y in range(scheme.group.order)])


def class_product_expansion(scheme: GroupScheme, i: int, j: int) -> List[int]:
    """Coefficients of ``C_i C_j`` on ``C_0, ..., C_d`` in the class algebra."""
    scheme._check_index(i)
    scheme._check_index(j)
    return [scheme.p(i, j, k) for k in range(scheme.n_classes)]


class ACResult(NamedTuple):
    holds: bool
    witness: Optional[Tuple[int, int, List[int]]]
    """``(h, i, js)``: a pair of distinct classes and the j's with ``p_ij^h != 0``."""


def is_almost_commutative(scheme: GroupScheme) -> ACResult:
    """For all distinct ``h, i`` there must be exactly one ``j`` with ``p_ij^h != 0``."""
    js: Dict[Tuple[int, int], List[int]] = {}
    for (i, j, h) in scheme.p_tensor:
        js.setdefault((h, i), []).append(j)
    m = scheme.n_classes
    for h in range(m):
        for i in range(m):
            if h == i:
                continue
            found = sorted(js.get((h, i), []))
            if len(found) != 1:
                return ACResult(False, (h, i, found))
    return ACResult(True, None)


def _sparse_product(rows_a: Sequence[Sequence[int]], rows_b: Sequence[Sequence[int]]
                    ) -> List[Dict[int, int]]:
    out = []
    for cols in rows_a:
        acc: Dict[int, int] = {}
        for y in cols:
            for z in rows_b[y]:
                acc[z] = acc.get(z, 0) + 1
        out.append(acc)
    return out


def verify_scheme_axioms(scheme: GroupScheme, direct_limit: int = 128,
                         representative_limit: int = 72) -> Dict[str, bool]:
    """Association-scheme axioms and tensor identities, one flag per check.

    Matrix-level checks (transposes, products, the all-ones sum) run when
    ``|G| <= direct_limit``; tensor-level checks always run.
    """
    g, part = scheme.group, scheme.partition
    n, m = g.order, scheme.n_classes
    sizes = scheme.class_sizes
    report: Dict[str, bool] = {}

    report["mass_balance"] = all(
        sum(scheme.p(i, j, k) * sizes[k] for k in range(m)) == sizes[i] * sizes[j]
        for i in range(m) for j in range(m))
    report["identity_rows"] = all(
        scheme.p(0, j, k) == (j == k) and scheme.p(j, 0, k) == (j == k)
        for j in range(m) for k in range(m))
    report["inverse_pairing"] = all(
        scheme.p(i, j, 0) == (sizes[i] if j == part.inverse_class[i] else 0)
        for i in range(m) for j in range(m))
    report["commutative_tensor"] = all(
        scheme.p(j, i, k) == v for (i, j, k), v in scheme.p_tensor.items())
    if n <= representative_limit:
        try:
            build_scheme(g, check_representatives=True)
            report["representative_independence"] = True
        except AssertionError:
            report["representative_independence"] = False

    if n > direct_limit:
        return report
    rows = [adjacency_rows(scheme, i) for i in range(m)]
    row_sets = [[set(r) for r in rs] for rs in rows]
    report["A0_identity"] = all(rows[0][x] == [x] for x in range(n))
    transpose_ok = True
    for i in range(m):
        ip = part.inverse_class[i]
        for x in range(n):
            for y in rows[i][x]:
                if x not in row_sets[ip][y]:
                    transpose_ok = False
    report["transpose_closed"] = transpose_ok
    report["nonzero_and_partition_J"] = (
        all(any(rs) for rs in rows)
        and all(sorted(y for i in range(m) for y in rows[i][x]) == list(range(n))
                for x in range(n)))
    prod_ok = comm_ok = True
    for i in range(m):
        for j in range(m):
            prod = _sparse_product(rows[i], rows[j])
            for x in range(n):
                expected = {}
                for k in range(m):
                    c = scheme.p(i, j, k)
                    if c:
                        for y in rows[k][x]:
                            expected[y] = c
                if prod[x] != expected:
                    prod_ok = False
            if j > i and prod != _sparse_product(rows[j], rows[i]):
                comm_ok = False
    report["products_expand"] = prod_ok
    report["commutative_matrices"] = comm_ok
    return report
