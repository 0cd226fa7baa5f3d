"""Terwilliger algebra of a group association scheme, base point the identity.

T contains every ``E_i^*``, so it is the direct sum of its blocks
``E_i^* T E_k^*``. All heavy work (closure, center, splitting) is done on
these ``|C_i| x |C_k|`` blocks; full ``|G| x |G|`` matrices are assembled
only for reports and for the independent dense checks.

Block-local vectors are row-major flattenings of a block. Because classes are
sorted lists of elements, block-local order is monotone in the global
``x * n + y`` order, so per-block echelon forms glue into a global one.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import FiniteGroup, derived_subgroup
from .linalg import EchelonBasis, RatMatrix, min_poly, null_space, rational_roots, poly_divmod, poly_eval
from .scheme import GroupScheme, adjacency_rows, build_scheme, is_almost_commutative

log = logging.getLogger(__name__)

DEFAULT_MAX_ENTRIES = 2 ** 24
ABELIAN_WARN_ORDER = 24
SPLIT_ATTEMPTS = 5

__all__ = [
    "DimensionLimitExceeded",
    "InternalInconsistency",
    "SingletonClass",
    "TerwilligerBasis",
    "Component",
    "WedderburnReport",
    "t0_basis",
    "algebra_closure",
    "terwilliger_basis",
    "center_basis",
    "primary_idempotent",
    "frobenius_B",
    "verify_frobenius_ideal",
    "split_center",
    "wedderburn_report",
]


class DimensionLimitExceeded(RuntimeError):
    pass


class InternalInconsistency(AssertionError):
    pass


class SingletonClass(ValueError):
    pass


Block = Tuple[int, int]
# Block-diagonal elements: class index -> flattened |C_i| x |C_i| block.
Diag = Dict[int, List[Fraction]]


# ---------------------------------------------------------------------------
# Block geometry
# ---------------------------------------------------------------------------


class _Layout:
    """Index bookkeeping between elements, classes and block-local positions."""

    def __init__(self, scheme: GroupScheme):
        self.scheme = scheme
        self.n = scheme.group.order
        self.classes = scheme.partition.classes
        self.sizes = scheme.class_sizes
        self.local = [0] * self.n
        for cls in self.classes:
            for r, x in enumerate(cls):
                self.local[x] = r

    def block_dim(self, b: Block) -> int:
        return self.sizes[b[0]] * self.sizes[b[1]]

    def to_global(self, b: Block, v) -> Dict[int, Fraction]:
        i, k = b
        ck = self.sizes[k]
        rows, cols = self.classes[i], self.classes[k]
        items = v.items() if isinstance(v, dict) else enumerate(v)
        return {rows[p // ck] * self.n + cols[p % ck]: Fraction(x) for p, x in items if x}

    def diag_to_matrix(self, z: Diag) -> RatMatrix:
        n = self.n
        e = [0] * (n * n)
        for i, blk in z.items():
            cls, s = self.classes[i], self.sizes[i]
            for p, x in enumerate(blk):
                if x:
                    e[cls[p // s] * n + cls[p % s]] = x
        return RatMatrix(n, n, e)

    def identity_diag(self) -> Diag:
        out = {}
        for i, s in enumerate(self.sizes):
            blk = [Fraction(0)] * (s * s)
            for r in range(s):
                blk[r * s + r] = Fraction(1)
            out[i] = blk
        return out


def _pieces(scheme: GroupScheme, lay: _Layout) -> Dict[Tuple[int, int, int], List[List[int]]]:
    """``E_i^* A_j E_k^*`` for every nonzero triple, as per-row lists of local columns."""
    out = {}
    rows_by_j = [adjacency_rows(scheme, j) for j in range(scheme.n_classes)]
    cof = scheme.partition.class_of
    for (i, j, k) in scheme.nonzero_triples():
        blk = []
        for x in lay.classes[i]:
            blk.append(sorted(lay.local[y] for y in rows_by_j[j][x] if cof[y] == k))
        out[(i, j, k)] = blk
    return out


def _left(p: List[List[int]], x: Sequence[Fraction], ck: int) -> List[Fraction]:
    """``P X`` with P given by row column-lists and X flattened with ``ck`` columns."""
    out: List[Fraction] = []
    zero = Fraction(0)
    for cols in p:
        acc = [zero] * ck
        for c in cols:
            base = c * ck
            for q in range(ck):
                v = x[base + q]
                if v:
                    acc[q] += v
        out.extend(acc)
    return out


def _right(x: Sequence[Fraction], p: List[List[int]], ci: int, ck: int, cl: int) -> List[Fraction]:
    """``X P`` for X of shape ``ci x ck`` and P of shape ``ck x cl``."""
    out = [Fraction(0)] * (ci * cl)
    for r in range(ci):
        base = r * ck
        obase = r * cl
        for c in range(ck):
            v = x[base + c]
            if v:
                for q in p[c]:
                    out[obase + q] += v
    return out


def _matmul_sq(a: Sequence[Fraction], b: Sequence[Fraction], s: int) -> List[Fraction]:
    out = [Fraction(0)] * (s * s)
    for r in range(s):
        for c in range(s):
            v = a[r * s + c]
            if v:
                brow = c * s
                orow = r * s
                for q in range(s):
                    w = b[brow + q]
                    if w:
                        out[orow + q] += v * w
    return out


def _dense(v: Dict[int, Fraction], dim: int) -> List[Fraction]:
    out = [Fraction(0)] * dim
    for k, x in v.items():
        out[k] = x
    return out


# ---------------------------------------------------------------------------
# T_0 and the closure
# ---------------------------------------------------------------------------


def t0_basis(scheme: GroupScheme) -> EchelonBasis:
    """Echelon basis of ``span{E_i^* A_j E_k^* : p_ij^k != 0}`` in ``Q^(n^2)``.

    The spanning matrices have disjoint supports, so the rank must equal the
    number of nonzero intersection numbers.
    """
    lay = _Layout(scheme)
    basis = EchelonBasis(lay.n * lay.n)
    for (i, j, k), rows in _pieces(scheme, lay).items():
        v = {}
        ck = lay.sizes[k]
        for r, cols in enumerate(rows):
            for c in cols:
                v[r * ck + c] = 1
        basis.insert(lay.to_global((i, k), v))
    if basis.rank != scheme.triple_count():
        raise InternalInconsistency(
            f"T0 rank {basis.rank} != nonzero triple count {scheme.triple_count()}")
    return basis


def _sparse_mat_mul(a: Dict[int, Fraction], b: Dict[int, Fraction], n: int) -> Dict[int, Fraction]:
    b_rows: Dict[int, List[Tuple[int, Fraction]]] = {}
    for k, x in b.items():
        b_rows.setdefault(k // n, []).append((k % n, x))
    out: Dict[int, Fraction] = {}
    for k, x in a.items():
        r, c = divmod(k, n)
        for q, y in b_rows.get(c, ()):
            key = r * n + q
            v = out.get(key, 0) + x * y
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def algebra_closure(generators: Sequence[RatMatrix],
                    max_entries: int = DEFAULT_MAX_ENTRIES) -> EchelonBasis:
    """Span of all words in ``generators``, by worklist closure.

    Each newly inserted element is multiplied by every generator on both
    sides; the span is closed once the worklist drains. The generating set
    should contain the identity (or span it) for the result to be unital.
    """
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].rows
    if any(g.shape != (n, n) for g in generators):
        raise ValueError("generators must be square of equal size")
    gens = [g.sparse() for g in generators]
    basis = EchelonBasis(n * n)
    work = deque()
    for g in gens:
        if basis.insert(g):
            work.append(g)
    while work:
        x = work.popleft()
        for g in gens:
            for y in (_sparse_mat_mul(g, x, n), _sparse_mat_mul(x, g, n)):
                if y and basis.insert(y):
                    if basis.rank * n * n > max_entries:
                        raise DimensionLimitExceeded(
                            f"closure rank {basis.rank} on {n}x{n} matrices exceeds the cap")
                    work.append(y)
    return basis


@dataclass(eq=False)
class TerwilligerBasis:
    scheme: GroupScheme
    t0_basis: EchelonBasis
    blocks: Dict[Block, EchelonBasis]
    _t_cache: Optional[EchelonBasis] = field(default=None, repr=False)

    @property
    def dim_T(self) -> int:
        return sum(b.rank for b in self.blocks.values())

    @property
    def dim_T0(self) -> int:
        return self.t0_basis.rank

    @property
    def triply_regular(self) -> bool:
        return self.dim_T == self.dim_T0

    @property
    def t_basis(self) -> EchelonBasis:
        """The closed algebra as one echelon basis of ``Q^(n^2)``."""
        if self._t_cache is None:
            lay = _Layout(self.scheme)
            out = EchelonBasis(lay.n * lay.n)
            for b in sorted(self.blocks):
                for row in self.blocks[b].vectors:
                    out.insert(lay.to_global(b, row))
            self._t_cache = out
        return self._t_cache

    def block_vectors(self, b: Block) -> List[List[Fraction]]:
        basis = self.blocks.get(b)
        return basis.dense_vectors() if basis is not None else []

    def matrices(self) -> List[RatMatrix]:
        n = self.scheme.group.order
        return [RatMatrix.from_sparse(n, n, v) for v in self.t_basis.vectors]


def terwilliger_basis(scheme: GroupScheme, max_entries: int = DEFAULT_MAX_ENTRIES
                      ) -> TerwilligerBasis:
    """Close T_0 under multiplication, block by block.

    Seeds are the T_0 spanning blocks ``E_i^* A_j E_k^*``; they generate T
    (``A_j`` is their sum over ``i, k`` and ``E_i^* = E_i^* A_0 E_i^*``), so
    closing under left and right multiplication by them yields T.
    """
    g = scheme.group
    if g.order > ABELIAN_WARN_ORDER and scheme.n_classes == g.order:
        log.warning("abelian group of order %d: dim T = %d", g.order, g.order ** 2)
    lay = _Layout(scheme)
    n2 = lay.n * lay.n
    t0 = t0_basis(scheme)
    pieces = _pieces(scheme, lay)
    by_left: Dict[int, List[Tuple[int, List[List[int]]]]] = {}
    by_right: Dict[int, List[Tuple[int, List[List[int]]]]] = {}
    for (m, _j, l), p in pieces.items():
        by_left.setdefault(l, []).append((m, p))
        by_right.setdefault(m, []).append((l, p))

    blocks: Dict[Block, EchelonBasis] = {}
    total = 0
    work = deque()

    def add(b: Block, v: List[Fraction]) -> None:
        nonlocal total
        basis = blocks.get(b)
        if basis is None:
            basis = blocks[b] = EchelonBasis(lay.block_dim(b))
        if basis.insert(v):
            total += 1
            if total * n2 > max_entries:
                raise DimensionLimitExceeded(
                    f"dim T exceeds {max_entries // n2} for a group of order {lay.n}")
            work.append((b, v))

    for (i, _j, k), p in pieces.items():
        ck = lay.sizes[k]
        v = [Fraction(0)] * lay.block_dim((i, k))
        for r, cols in enumerate(p):
            for c in cols:
                v[r * ck + c] = Fraction(1)
        add((i, k), v)

    while work:
        (i, k), x = work.popleft()
        ci, ck = lay.sizes[i], lay.sizes[k]
        for m, p in by_left.get(i, ()):
            y = _left(p, x, ck)
            if any(y):
                add((m, k), y)
        for l, p in by_right.get(k, ()):
            y = _right(x, p, ci, ck, lay.sizes[l])
            if any(y):
                add((i, l), y)
    return TerwilligerBasis(scheme, t0, blocks)


# ---------------------------------------------------------------------------
# Center
# ---------------------------------------------------------------------------


def _center_diag(t: TerwilligerBasis) -> List[Diag]:
    """Null space of ``[z, A_j] = 0`` over the diagonal blocks of T.

    Commuting with every ``E_i^*`` forces z block diagonal; commuting with
    ``A_j`` reads ``z_m (A_j)_{ml} = (A_j)_{ml} z_l`` on each nonzero block.
    """
    scheme = t.scheme
    lay = _Layout(scheme)
    unknowns: List[Tuple[int, List[Fraction]]] = []
    start: Dict[int, int] = {}
    for i in range(scheme.n_classes):
        start[i] = len(unknowns)
        for v in t.block_vectors((i, i)):
            unknowns.append((i, v))
    count = {i: len(t.block_vectors((i, i))) for i in range(scheme.n_classes)}

    equations = set()
    for (m, _j, l), p in _pieces(scheme, lay).items():
        cm, cl = lay.sizes[m], lay.sizes[l]
        rows: Dict[int, Dict[int, Fraction]] = {}
        for a in range(count[m]):
            u = unknowns[start[m] + a][1]
            for pos, x in enumerate(_right(u, p, cm, cm, cl)):
                if x:
                    eq = rows.setdefault(pos, {})
                    eq[start[m] + a] = eq.get(start[m] + a, 0) + x
        for b in range(count[l]):
            u = unknowns[start[l] + b][1]
            for pos, x in enumerate(_left(p, u, cl)):
                if x:
                    eq = rows.setdefault(pos, {})
                    eq[start[l] + b] = eq.get(start[l] + b, 0) - x
        for eq in rows.values():
            items = tuple(sorted((k, v) for k, v in eq.items() if v))
            if items:
                # scale so duplicates up to a factor collapse
                lead = items[0][1]
                equations.add(tuple((k, v / lead) for k, v in items))

    sol = null_space((dict(e) for e in sorted(equations)), len(unknowns))
    out = []
    for vec in sol.vectors:
        z: Diag = {}
        for idx, c in vec.items():
            i, u = unknowns[idx]
            blk = z.setdefault(i, [Fraction(0)] * (lay.sizes[i] ** 2))
            for q, x in enumerate(u):
                if x:
                    blk[q] += c * x
        out.append(z)
    return out


def center_basis(t: TerwilligerBasis) -> EchelonBasis:
    """Basis of ``Z(T)`` in ``Q^(n^2)`` coordinates."""
    lay = _Layout(t.scheme)
    out = EchelonBasis(lay.n * lay.n)
    for z in _center_diag(t):
        v = {}
        for i, blk in z.items():
            v.update(lay.to_global((i, i), blk))
        out.insert(v)
    return out


# ---------------------------------------------------------------------------
# Explicit idempotents
# ---------------------------------------------------------------------------


def _primary_diag(scheme: GroupScheme) -> Diag:
    return {i: [Fraction(1, s)] * (s * s) for i, s in enumerate(scheme.class_sizes)}


def primary_idempotent(scheme: GroupScheme) -> RatMatrix:
    """Block diagonal, with every entry of the ``C_i, C_i`` block equal to ``1/|C_i|``."""
    return _Layout(scheme).diag_to_matrix(_primary_diag(scheme))


def _frobenius_block(size: int) -> List[Fraction]:
    off = Fraction(-1, size - 1)
    return [Fraction(1) if r == c else off for r in range(size) for c in range(size)]


def frobenius_B(scheme: GroupScheme, i: int) -> RatMatrix:
    """``B_i``: zero outside the ``C_i, C_i`` block, which is
    ``-1/(|C_i|-1) J + (1 + 1/(|C_i|-1)) I``."""
    if not 1 <= i <= scheme.d:
        raise IndexError(f"class index {i} outside 1..{scheme.d}")
    s = scheme.class_sizes[i]
    if s == 1:
        raise SingletonClass(f"class {i} is a singleton; B_i is undefined")
    return _Layout(scheme).diag_to_matrix({i: _frobenius_block(s)})


def verify_frobenius_ideal(scheme: GroupScheme, i: int) -> Dict[str, object]:
    """Check ``A_k B_i`` against the case split B_i / -B_i / 0 and the ideal conditions.

    Expected: ``A_0 B_i = B_i``, ``A_k B_i = -B_i`` when ``C_k = G' - {e}``,
    otherwise zero; ``B_i`` symmetric; ``E_j^* B_i`` is ``B_i`` or zero.
    """
    b = frobenius_B(scheme, i)
    g = scheme.group
    dset = set(derived_subgroup(g))
    nontrivial_derived = dset - {g.identity}
    cases: Dict[int, str] = {}
    ok = True
    for k in range(scheme.n_classes):
        if k == 0:
            expected = "B"
        elif set(scheme.partition.classes[k]) == nontrivial_derived:
            expected = "-B"
        else:
            expected = "0"
        prod = _adjacency_times(scheme, k, b)
        if prod == b:
            got = "B"
        elif prod == -b:
            got = "-B"
        elif prod.is_zero():
            got = "0"
        else:
            got = "other"
        cases[k] = got
        ok = ok and got == expected
    symmetric = b == b.transpose()
    from .scheme import dual_idempotent

    e_ok = True
    for j in range(scheme.n_classes):
        eb = dual_idempotent(scheme, j) @ b
        if eb != (b if j == i else RatMatrix.zeros(g.order)):
            e_ok = False
    return {"left_products": cases, "case_split": ok, "symmetric": symmetric,
            "dual_idempotents": e_ok, "ok": ok and symmetric and e_ok}


def _adjacency_times(scheme: GroupScheme, k: int, b: RatMatrix) -> RatMatrix:
    n = scheme.group.order
    rows = adjacency_rows(scheme, k)
    out = []
    for x in range(n):
        acc = [Fraction(0)] * n
        for y in rows[x]:
            for c, v in enumerate(b.row(y)):
                if v:
                    acc[c] += v
        out.extend(acc)
    return RatMatrix(n, n, out)


# ---------------------------------------------------------------------------
# Wedderburn splitting
# ---------------------------------------------------------------------------


@dataclass
class Component:
    dim: int
    role: str  # "primary" | "nonprimary" | "unsplit"
    idempotent: RatMatrix


@dataclass
class WedderburnReport:
    label: str
    order: int
    n_classes: int
    dim_T: int
    dim_T0: int
    dim_Z: int
    primary_dim: int
    almost_commutative: bool
    triply_regular: bool
    components: List[Component]
    split_status: str  # "Complete" | "PartialSplit"
    residual_degrees: List[int]
    checks: Dict[str, bool]

    @property
    def nonprimary_component_dims(self) -> List[int]:
        return sorted(c.dim for c in self.components if c.role == "nonprimary")

    @property
    def idempotents(self) -> List[RatMatrix]:
        return [c.idempotent for c in self.components]

    def to_json(self) -> Dict[str, object]:
        return {
            "group": self.label,
            "order": self.order,
            "classes": self.n_classes,
            "dim_T": self.dim_T,
            "dim_T0": self.dim_T0,
            "dim_Z": self.dim_Z,
            "primary_dim": self.primary_dim,
            "ac": self.almost_commutative,
            "triply_regular": self.triply_regular,
            "components": [{"dim": c.dim, "role": c.role, "idempotent_ref": n}
                           for n, c in enumerate(self.components)],
            "split_status": self.split_status,
            "residual_degrees": self.residual_degrees,
            "checks": self.checks,
        }


class _CenterAlgebra:
    """The commutative algebra Z(T) in coordinates on an echelon basis.

    Elements are coordinate lists; products go through block multiplication.
    """

    def __init__(self, lay: _Layout, basis: List[Diag]):
        self.lay = lay
        self.offsets = []
        off = 0
        for s in lay.sizes:
            self.offsets.append(off)
            off += s * s
        self.ambient = off
        ech = EchelonBasis(off, (self._flat(z) for z in basis))
        self.pivots = ech.pivot_cols
        self.rows = [self._unflat(v) for v in ech.vectors]
        self.dim = len(self.rows)

    def _flat(self, z: Diag) -> Dict[int, Fraction]:
        out = {}
        for i, blk in z.items():
            o = self.offsets[i]
            for q, x in enumerate(blk):
                if x:
                    out[o + q] = x
        return out

    def _unflat(self, v: Dict[int, Fraction]) -> Diag:
        z: Diag = {}
        for i, s in enumerate(self.lay.sizes):
            o = self.offsets[i]
            blk = [v.get(o + q, Fraction(0)) for q in range(s * s)]
            if any(blk):
                z[i] = blk
        return z

    def element(self, coords: Sequence[Fraction]) -> Diag:
        z: Diag = {}
        for c, row in zip(coords, self.rows):
            if not c:
                continue
            for i, blk in row.items():
                acc = z.setdefault(i, [Fraction(0)] * len(blk))
                for q, x in enumerate(blk):
                    if x:
                        acc[q] += c * x
        return z

    def coords(self, z: Diag) -> List[Fraction]:
        flat = self._flat(z)
        return [flat.get(p, Fraction(0)) for p in self.pivots]

    def mul_diag(self, a: Diag, b: Diag) -> Diag:
        out = {}
        for i in a.keys() & b.keys():
            prod = _matmul_sq(a[i], b[i], self.lay.sizes[i])
            if any(prod):
                out[i] = prod
        return out

    def mul(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> List[Fraction]:
        return self.coords(self.mul_diag(self.element(u), self.element(v)))

    def mult_matrix(self, u: Sequence[Fraction]) -> RatMatrix:
        zu = self.element(u)
        cols = [self.coords(self.mul_diag(zu, row)) for row in self.rows]
        return RatMatrix(self.dim, self.dim,
                         [cols[c][r] for r in range(self.dim) for c in range(self.dim)])

    def rank_of_multiples(self, u: Sequence[Fraction]) -> int:
        zu = self.element(u)
        ech = EchelonBasis(self.dim)
        for row in self.rows:
            ech.insert(self.coords(self.mul_diag(zu, row)))
        return ech.rank


def _spectral_idempotents(alg: _CenterAlgebra, z: Sequence[Fraction], one: List[Fraction]
                          ) -> Tuple[List[List[Fraction]], int]:
    """Idempotents of ``z`` for each rational eigenvalue, plus one for the
    irrational remainder (if any). Returns them with the minimal polynomial's degree."""
    lz = alg.mult_matrix(z)
    mp = min_poly(lz)
    roots, residual = rational_roots(mp)

    def apply_poly(poly, v):
        acc = [Fraction(0)] * alg.dim
        for c in reversed(poly):
            acc = lz.apply(acc)
            acc = [a + c * b for a, b in zip(acc, v)]
        return acc

    idems = []
    for lam in sorted(set(roots)):
        q, rem = poly_divmod(mp, [-lam, 1])
        assert not rem
        scale = poly_eval(q, lam)
        idems.append([x / scale for x in apply_poly(q, one)])
    if len(residual) > 1:
        rest = list(one)
        for e in idems:
            rest = [a - b for a, b in zip(rest, e)]
        idems.append(rest)
    return idems, len(mp) - 1


def _multiplier(attempt: int, j: int) -> int:
    return 1 + (attempt + 1) * j


def split_center(t: TerwilligerBasis, center: Optional[List[Diag]] = None
                 ) -> Tuple[List[Tuple[Diag, int, int]], str, List[int]]:
    """Central idempotents found over Q as ``(f, dim fT, dim fZ)`` triples.

    ``dim fZ == 1`` marks a primitive central idempotent.

    A generic central element ``z = sum (j+1) b_j`` is split by its rational
    eigenvalues; pieces whose center slice is still more than one-dimensional
    are refined with the next multiplier sequence (1,2,3,... then 1,3,5,...)
    up to ``SPLIT_ATTEMPTS`` times. Pieces that never split are reported with
    their center-slice dimensions.

    When the minimal polynomial has degree ``dim Z``, z generates Z and its
    rational roots already give every split available over Q, so no further
    attempt is made.
    """
    lay = _Layout(t.scheme)
    if center is None:
        center = _center_diag(t)
    alg = _CenterAlgebra(lay, center)
    one = alg.coords(lay.identity_diag())
    pieces = [one]
    for attempt in range(SPLIT_ATTEMPTS):
        if all(alg.rank_of_multiples(f) == 1 for f in pieces):
            break
        z = [Fraction(_multiplier(attempt, j)) for j in range(alg.dim)]
        idems, degree = _spectral_idempotents(alg, z, one)
        refined = []
        for f in pieces:
            if alg.rank_of_multiples(f) == 1:
                refined.append(f)
                continue
            for e in idems:
                fe = alg.mul(f, e)
                if any(fe):
                    refined.append(fe)
        pieces = refined
        if degree == alg.dim:
            break

    out = []
    residual = []
    for f in pieces:
        zf = alg.element(f)
        deg = alg.rank_of_multiples(f)
        out.append((zf, _component_dim(t, lay, zf), deg))
        if deg > 1:
            residual.append(deg)
    status = "Complete" if not residual else "PartialSplit"
    return out, status, sorted(residual)


def _component_dim(t: TerwilligerBasis, lay: _Layout, f: Diag) -> int:
    """Rank of ``f T`` (= ``f T f`` for central f), block by block."""
    total = 0
    for (i, k), basis in t.blocks.items():
        if i not in f:
            continue
        ech = EchelonBasis(lay.block_dim((i, k)))
        ci, ck = lay.sizes[i], lay.sizes[k]
        fi = f[i]
        for v in basis.dense_vectors():
            prod = [Fraction(0)] * (ci * ck)
            for r in range(ci):
                for c in range(ci):
                    a = fi[r * ci + c]
                    if a:
                        for q in range(ck):
                            w = v[c * ck + q]
                            if w:
                                prod[r * ck + q] += a * w
            ech.insert(prod)
        total += ech.rank
    return total


def _diag_checks(lay: _Layout, idems: List[Diag]) -> Dict[str, bool]:
    def mul(a, b):
        return {i: _matmul_sq(a[i], b[i], lay.sizes[i]) for i in a.keys() & b.keys()}

    def zero(a):
        return not any(any(blk) for blk in a.values())

    def eq(a, b):
        keys = a.keys() | b.keys()
        return all(a.get(i, [0] * lay.sizes[i] ** 2) == b.get(i, [0] * lay.sizes[i] ** 2)
                   for i in keys)

    idem = all(eq(mul(f, f), f) for f in idems)
    orth = all(zero(mul(f, g)) for a, f in enumerate(idems) for b, g in enumerate(idems) if a != b)
    total: Diag = {}
    for f in idems:
        for i, blk in f.items():
            acc = total.setdefault(i, [Fraction(0)] * len(blk))
            for q, x in enumerate(blk):
                acc[q] += x
    return {"idempotent": idem, "orthogonal": orth, "sum_identity": eq(total, lay.identity_diag())}


def wedderburn_report(group: FiniteGroup, max_entries: int = DEFAULT_MAX_ENTRIES,
                      scheme: Optional[GroupScheme] = None) -> WedderburnReport:
    """Scheme, T_0, closure, center and split, end to end."""
    scheme = scheme or build_scheme(group)
    lay = _Layout(scheme)
    ac = is_almost_commutative(scheme).holds
    t = terwilliger_basis(scheme, max_entries=max_entries)
    if ac and not t.triply_regular:
        raise InternalInconsistency(
            f"almost commutative but dim T = {t.dim_T} != dim T0 = {t.dim_T0}")
    center = _center_diag(t)
    pieces, status, residual = split_center(t, center)
    primary = _primary_diag(scheme)
    primary_dim = scheme.n_classes ** 2
    components = []
    for f, dim, deg in pieces:
        is_primary = f.keys() == primary.keys() and all(f[i] == primary[i] for i in primary)
        role = "primary" if is_primary else ("nonprimary" if deg == 1 else "unsplit")
        components.append((f, dim, role))
    # deterministic order: primary first, then by dimension and support
    components.sort(key=lambda c: (c[2] != "primary", c[2] == "unsplit", c[1], sorted(c[0])))
    checks = _diag_checks(lay, [c[0] for c in components])
    checks["dims_add_up"] = sum(c[1] for c in components) == t.dim_T
    checks["primary_found"] = any(c[2] == "primary" for c in components)
    checks["triply_regular_if_ac"] = (not ac) or t.triply_regular
    return WedderburnReport(
        label=group.label,
        order=group.order,
        n_classes=scheme.n_classes,
        dim_T=t.dim_T,
        dim_T0=t.dim_T0,
        dim_Z=len(center),
        primary_dim=primary_dim,
        almost_commutative=ac,
        triply_regular=t.triply_regular,
        components=[Component(dim, role, lay.diag_to_matrix(f)) for f, dim, role in components],
        split_status=status,
        residual_degrees=residual,
        checks=checks,
    )
