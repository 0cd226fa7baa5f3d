"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`. Vectors handed to :class:`EchelonBasis`
may be dense sequences or sparse ``{index: value}`` mappings; internally rows
are kept sparse because the ambient spaces here (flattened ``n x n`` matrices)
are large while the vectors that live in them are not.

Polynomials are lists of coefficients, lowest degree first.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

Rat = Fraction
SparseVec = Dict[int, Fraction]
VecLike = Union[Sequence, Mapping[int, object]]
Poly = List[Fraction]

__all__ = [
    "Rat",
    "RatMatrix",
    "EchelonBasis",
    "DimensionMismatch",
    "rref_insert",
    "null_space",
    "solve_homogeneous",
    "min_poly",
    "rational_roots",
    "poly_eval",
    "poly_mul",
    "poly_divmod",
    "poly_gcd",
    "poly_lcm",
    "format_rat",
]


class DimensionMismatch(ValueError):
    pass


def format_rat(x) -> str:
    """Serialize a rational as ``"num/den"`` (integers too, e.g. ``"3/1"``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _sparse(v: VecLike, dim: int | None = None) -> SparseVec:
    if isinstance(v, Mapping):
        out = {}
        for k, x in v.items():
            if dim is not None and not 0 <= k < dim:
                raise DimensionMismatch(f"index {k} outside ambient dimension {dim}")
            if x:
                out[k] = Fraction(x)
        return out
    if dim is not None and len(v) != dim:
        raise DimensionMismatch(f"vector of length {len(v)}, expected {dim}")
    return {k: Fraction(x) for k, x in enumerate(v) if x}


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class RatMatrix:
    """Dense immutable rational matrix, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable | None = None):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if entries is None:
            entries = (Fraction(0),) * (rows * cols)
        else:
            entries = tuple(Fraction(x) for x in entries)
            if len(entries) != rows * cols:
                raise DimensionMismatch(
                    f"{len(entries)} entries for a {rows}x{cols} matrix"
                )
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionMismatch("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + i] = 1
        return cls(n, n, e)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        return cls(rows, rows if cols is None else cols)

    @classmethod
    def diagonal(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        e = [0] * (n * n)
        for i, x in enumerate(values):
            e[i * n + i] = x
        return cls(n, n, e)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, v: Mapping[int, object]) -> "RatMatrix":
        e = [0] * (rows * cols)
        for k, x in v.items():
            e[k] = x
        return cls(rows, cols, e)

    def __getitem__(self, rc: Tuple[int, int]) -> Fraction:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> Tuple[Fraction, ...]:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(r)) for r in range(self.rows)]

    def flatten(self) -> Tuple[Fraction, ...]:
        return self.entries

    def sparse(self) -> SparseVec:
        return {k: x for k, x in enumerate(self.entries) if x}

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols})"

    def _check_same_shape(self, other: "RatMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(self.rows, self.cols,
                         [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(self.rows, self.cols,
                         [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s) -> "RatMatrix":
        s = Fraction(s)
        return RatMatrix(self.rows, self.cols, [s * a for a in self.entries])

    def __rmul__(self, s) -> "RatMatrix":
        if isinstance(s, (int, Fraction)):
            return self.scale(s)
        return NotImplemented

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        n, m = self.cols, other.cols
        b_rows = [other.entries[k * m:(k + 1) * m] for k in range(n)]
        out = []
        for r in range(self.rows):
            acc = [Fraction(0)] * m
            for k, a in enumerate(self.entries[r * n:(r + 1) * n]):
                if not a:
                    continue
                brow = b_rows[k]
                if a == 1:
                    for c in range(m):
                        if brow[c]:
                            acc[c] += brow[c]
                else:
                    for c in range(m):
                        if brow[c]:
                            acc[c] += a * brow[c]
            out.extend(acc)
        return RatMatrix(self.rows, m, out)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         [self.entries[r * self.cols + c]
                          for c in range(self.cols) for r in range(self.rows)])

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        return sum((self.entries[i * self.cols + i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def apply(self, v: Sequence) -> List[Fraction]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionMismatch("vector length")
        out = []
        for r in range(self.rows):
            row = self.entries[r * self.cols:(r + 1) * self.cols]
            out.append(sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)))
        return out

    def to_csv(self) -> str:
        return "".join(",".join(format_rat(x) for x in self.row(r)) + "\n"
                       for r in range(self.rows))

    @classmethod
    def from_csv(cls, text: str) -> "RatMatrix":
        """Inverse of :meth:`to_csv`."""
        return cls.from_rows([[Fraction(x) for x in line.split(",")]
                              for line in text.splitlines() if line])


# ---------------------------------------------------------------------------
# Reduced row echelon bases
# ---------------------------------------------------------------------------


class EchelonBasis:
    """A subspace of ``Q^ambient_dim`` kept in reduced row echelon form.

    Rows are sparse dicts normalized to 1 at their pivot and zero at every
    other row's pivot.
    """

    def __init__(self, ambient_dim: int, vectors: Iterable[VecLike] = ()):
        if ambient_dim < 0:
            raise ValueError("negative ambient dimension")
        self.ambient_dim = ambient_dim
        self._rows: Dict[int, SparseVec] = {}
        for v in vectors:
            self.insert(v)

    def copy(self) -> "EchelonBasis":
        new = EchelonBasis(self.ambient_dim)
        new._rows = {p: dict(r) for p, r in self._rows.items()}
        return new

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivot_cols(self) -> List[int]:
        return sorted(self._rows)

    @property
    def vectors(self) -> List[SparseVec]:
        return [self._rows[p] for p in sorted(self._rows)]

    def dense_vectors(self) -> List[List[Fraction]]:
        out = []
        for row in self.vectors:
            d = [Fraction(0)] * self.ambient_dim
            for k, x in row.items():
                d[k] = x
            out.append(d)
        return out

    def reduce(self, v: VecLike) -> SparseVec:
        """Residue of ``v`` after elimination against the basis."""
        w = _sparse(v, self.ambient_dim)
        rows = self._rows
        hits = [p for p in w if p in rows]
        for p in hits:
            c = w.get(p)
            if not c:
                continue
            for k, x in rows[p].items():
                y = w.get(k, 0) - c * x
                if y:
                    w[k] = y
                else:
                    w.pop(k, None)
        return w

    def __contains__(self, v: VecLike) -> bool:
        return not self.reduce(v)

    def insert(self, v: VecLike) -> bool:
        """Add ``v`` to the span; return whether the rank grew."""
        w = self.reduce(v)
        if not w:
            return False
        piv = min(w)
        lead = w[piv]
        if lead != 1:
            w = {k: x / lead for k, x in w.items()}
        for row in self._rows.values():
            c = row.get(piv)
            if c:
                for k, x in w.items():
                    y = row.get(k, 0) - c * x
                    if y:
                        row[k] = y
                    else:
                        del row[k]
        self._rows[piv] = w
        return True

    def coordinates(self, v: VecLike) -> Dict[int, Fraction]:
        """Coefficients of ``v`` on the basis rows, keyed by pivot column.

        Only meaningful for ``v`` in the span (checked).
        """
        w = _sparse(v, self.ambient_dim)
        coords = {p: w[p] for p in self._rows if p in w}
        if self.reduce(w):
            raise ValueError("vector is not in the span")
        return coords

    def __eq__(self, other) -> bool:
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __repr__(self) -> str:
        return f"EchelonBasis(ambient_dim={self.ambient_dim}, rank={self.rank})"


def rref_insert(basis: EchelonBasis, v: VecLike) -> Tuple[EchelonBasis, bool]:
    """Functional insert: returns a new basis and whether ``v`` was new."""
    new = basis.copy()
    was_new = new.insert(v)
    return new, was_new


def null_space(rows: Iterable[VecLike], ncols: int) -> EchelonBasis:
    """Basis of ``{x : r.x = 0 for every r in rows}``."""
    eq = EchelonBasis(ncols)
    for r in rows:
        if eq.rank == ncols:
            break
        eq.insert(r)
    out = EchelonBasis(ncols)
    pivots = set(eq.pivot_cols)
    for f in range(ncols):
        if f in pivots:
            continue
        x = {f: Fraction(1)}
        for p, row in eq._rows.items():
            c = row.get(f)
            if c:
                x[p] = -c
        out.insert(x)
    return out


def solve_homogeneous(a: RatMatrix) -> EchelonBasis:
    """Null space of ``a``; its rank is ``a.cols - rank(a)``."""
    return null_space((a.row(r) for r in range(a.rows)), a.cols)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _trim(p: Sequence) -> Poly:
    p = [Fraction(x) for x in p]
    while p and not p[-1]:
        p.pop()
    return p


def poly_mul(a: Sequence, b: Sequence) -> Poly:
    a, b = _trim(a), _trim(b)
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divmod(a: Sequence, b: Sequence) -> Tuple[Poly, Poly]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lb
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = _trim(r)
    return _trim(q), r


def _monic(p: Poly) -> Poly:
    return [x / p[-1] for x in p] if p else p


def poly_gcd(a: Sequence, b: Sequence) -> Poly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return _monic(a)


def poly_lcm(a: Sequence, b: Sequence) -> Poly:
    a, b = _trim(a), _trim(b)
    if not a or not b:
        return []
    return _monic(poly_divmod(poly_mul(a, b), poly_gcd(a, b))[0])


def poly_eval(p: Sequence, x):
    """Horner evaluation; ``x`` may be any ring element supporting + and *."""
    acc = None
    for c in reversed(list(p)):
        acc = Fraction(c) if acc is None else acc * x + c
    return Fraction(0) if acc is None else acc


def _semi_reduce(rows: Dict[int, Dict[int, object]], v: Dict[int, object]) -> Dict[int, object]:
    """Reduce ``v`` against rows whose pivot is their least index, in pivot order."""
    for p in sorted(rows):
        c = v.get(p)
        if not c:
            continue
        for k, x in rows[p].items():
            y = v.get(k, 0) - c * x
            if y:
                v[k] = y
            else:
                v.pop(k, None)
    return v


def _semi_insert(rows: Dict[int, Dict[int, object]], v: Dict[int, object]) -> None:
    piv = min(v)
    lead = v[piv]
    rows[piv] = {k: x / lead for k, x in v.items()}


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def min_poly(op: RatMatrix) -> Poly:
    """Monic minimal polynomial of a square matrix.

    Krylov sequences are grown from the standard basis vectors in order; each
    yields the minimal polynomial of that vector and the answer is their lcm.
    Vectors already inside the accumulated invariant subspace are skipped.
    Arithmetic runs on GMP rationals when gmpy2 is available.
    """
    if not op.is_square():
        raise DimensionMismatch("min_poly needs a square matrix")
    n = op.rows
    one = _Q(1)
    cols_of = [[(c, _Q(x)) for c, x in enumerate(op.row(r)) if x] for r in range(n)]

    def apply(v: Dict[int, object]) -> Dict[int, object]:
        out = {}
        for r, entries in enumerate(cols_of):
            acc = 0
            for c, x in entries:
                y = v.get(c)
                if y:
                    acc += x * y
            if acc:
                out[r] = acc
        return out

    span: Dict[int, Dict[int, object]] = {}
    result: Poly = [Fraction(1)]
    for i in range(n):
        if len(span) == n:
            break
        if _semi_reduce(span, {i: one}) == {}:
            continue
        # Augmented rows (v | tag) so the dependency falls out of elimination.
        krylov: Dict[int, Dict[int, object]] = {}
        v = {i: one}
        for k in range(n + 1):
            aug = dict(v)
            aug[n + k] = one
            res = _semi_reduce(krylov, aug)
            if min(res) >= n:
                top = res[n + k]
                local = [_to_fraction(res.get(n + j, 0) / top) for j in range(k + 1)]
                break
            _semi_insert(krylov, res)
            w = _semi_reduce(span, dict(v))
            if w:
                _semi_insert(span, w)
            v = apply(v)
        result = poly_lcm(result, local)
    return result


def _divisors(m: int) -> List[int]:
    m = abs(m)
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


# Above these sizes the divisor enumeration is abandoned for full factorization.
_TRIAL_LIMIT = 10 ** 10
_CANDIDATE_LIMIT = 20000


def _integer_poly(p: Poly) -> List[int]:
    den = 1
    for x in p:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in p]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints]


def _candidate_roots(ints: List[int]) -> List[Fraction] | None:
    a0, an = ints[0], ints[-1]
    if abs(a0) > _TRIAL_LIMIT or abs(an) > _TRIAL_LIMIT:
        return None
    ps, qs = _divisors(a0), _divisors(an)
    if len(ps) * len(qs) > _CANDIDATE_LIMIT:
        return None
    bound = 1 + max(abs(Fraction(x, an)) for x in ints[:-1])
    cands = set()
    for p in ps:
        for q in qs:
            r = Fraction(p, q)
            if r <= bound:
                cands.add(r)
                cands.add(-r)
    return sorted(cands)


def _roots_by_factoring(ints: List[int]) -> List[Fraction]:
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(ints)), t, domain="ZZ")
    roots = []
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            b, a = factor.all_coeffs()  # b*t + a
            roots.append(Fraction(-int(a), int(b)))
    return sorted(roots)


def rational_roots(poly: Sequence) -> Tuple[List[Fraction], Poly]:
    """Rational roots (with multiplicity, ascending) and the root-free cofactor.

    ``poly == residual * prod(t - r for r in roots)``.
    """
    p = _trim(poly)
    if not p:
        raise ValueError("the zero polynomial has every number as a root")
    roots: List[Fraction] = []
    while len(p) > 1 and not p[0]:
        roots.append(Fraction(0))
        p = p[1:]
    if len(p) > 1:
        ints = _integer_poly(p)
        cands = _candidate_roots(ints)
        if cands is None:
            cands = _roots_by_factoring(ints)
        for r in cands:
            while len(p) > 1:
                q, rem = poly_divmod(p, [-r, 1])
                if rem:
                    break
                roots.append(r)
                p = q
    return sorted(roots), p
