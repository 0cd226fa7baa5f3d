"""Named group families, built concretely as Cayley tables.

Covers the four almost-commutative families (abelian groups, the Frobenius
groups ``F_q x| F_q^*``, ``(Z_3)^2 x| Q_8`` and small Camina p-groups) plus the
negative controls used by the tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from .groups import (
    DEFAULT_MAX_ORDER,
    ClosureLimitExceeded,
    FiniteGroup,
    GroupError,
    cyclic,
    direct_product,
    extend_action,
    group_from_permutations,
    group_from_table,
    semidirect_product,
)

__all__ = [
    "NotPrime",
    "SpecError",
    "FieldSpec",
    "is_prime",
    "make_field",
    "frobenius_field_group",
    "three2_q8",
    "quaternion8",
    "dihedral8",
    "dihedral",
    "heisenberg",
    "extraspecial_p2_exponent_p2",
    "abelian",
    "cyclic_semidirect",
    "symmetric",
    "from_spec",
    "CATALOG_SPECS",
]


class NotPrime(GroupError):
    pass


class SpecError(ValueError):
    """Malformed group spec."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


# ---------------------------------------------------------------------------
# Finite fields
# ---------------------------------------------------------------------------


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    """Remainder of ``a`` modulo the monic ``m`` over ``Z_p``; coefficients low->high."""
    a = [x % p for x in a]
    deg = len(m) - 1
    for top in range(len(a) - 1, deg - 1, -1):
        c = a[top]
        if c:
            for i, y in enumerate(m):
                a[top - deg + i] = (a[top - deg + i] - c * y) % p
    out = a[:deg]
    return out + [0] * (deg - len(out))


def _monic_polys(p: int, degree: int):
    """Monic polynomials of the given degree in lexicographic order of
    ``(c_{deg-1}, ..., c_0)``; coefficient lists are low->high."""
    for high_first in itertools.product(range(p), repeat=degree):
        yield list(reversed(high_first)) + [1]


def _divides(m: Sequence[int], f: Sequence[int], p: int) -> bool:
    return not any(_pmod(f, m, p))


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    deg = len(f) - 1
    for k in range(1, deg // 2 + 1):
        for m in _monic_polys(p, k):
            if _divides(m, f, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """``GF(p^r)`` as ``Z_p[t]/(modulus)``.

    Elements are coefficient tuples ``(c_0, ..., c_{r-1})`` and are encoded
    as integers ``sum c_i p^i``.
    """

    p: int
    r: int
    modulus: Tuple[int, ...]
    generator: Tuple[int, ...]

    @property
    def size(self) -> int:
        return self.p ** self.r

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def decode(self, k: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.r):
            k, c = divmod(k, self.p)
            out.append(c)
        return tuple(out)

    def add(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return tuple(_pmod(prod, self.modulus, self.p))

    def one(self) -> Tuple[int, ...]:
        return (1,) + (0,) * (self.r - 1)

    def mult_order(self, a: Sequence[int]) -> int:
        a = tuple(a)
        if not any(a):
            raise ZeroDivisionError("zero has no multiplicative order")
        k, y = 1, a
        while y != self.one():
            y = self.mul(y, a)
            k += 1
        return k


def make_field(p: int, r: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """``GF(p^r)`` with the least irreducible modulus and least primitive element.

    Candidate moduli run over monic degree-r polynomials with nonzero
    constant term (so ``t`` itself is never picked, even for ``r = 1``).
    """
    _require_prime(p)
    if r < 1:
        raise GroupError("field degree must be at least 1")
    if p ** r > max_order:
        raise ClosureLimitExceeded(f"field of size {p ** r} > {max_order}")
    modulus = next(f for f in _monic_polys(p, r) if f[0] and _is_irreducible(f, p))
    proto = FieldSpec(p, r, tuple(modulus), (1,) + (0,) * (r - 1))
    for k in range(1, p ** r):
        g = proto.decode(k)
        if proto.mult_order(g) == p ** r - 1:
            return FieldSpec(p, r, tuple(modulus), g)
    raise AssertionError("finite field without a primitive element")


def frobenius_field_group(p: int, r: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Additive group of ``GF(p^r)`` extended by multiplication by a primitive element.

    Order ``p^r (p^r - 1)``. Elements are ``(v, k)`` meaning ``v`` followed by
    multiplication by ``g^k``, flattened as ``v * (p^r - 1) + k``.
    """
    q = p ** r
    if q * (q - 1) > max_order:
        raise ClosureLimitExceeded(f"order {q * (q - 1)} > {max_order}")
    field = make_field(p, r, max_order)
    elems = [field.decode(k) for k in range(q)]
    additive = group_from_table(
        [[field.encode(field.add(a, b)) for b in elems] for a in elems], label=f"F{q}+")
    mult = cyclic(q - 1)
    powers = [field.one()]
    for _ in range(q - 2):
        powers.append(field.mul(powers[-1], field.generator))
    action = [[field.encode(field.mul(gk, v)) for v in elems] for gk in powers]
    return semidirect_product(additive, mult, action, max_order=max_order,
                              label=f"Frob({p}^{r})")


# ---------------------------------------------------------------------------
# Small named groups
# ---------------------------------------------------------------------------

# Quaternion units in the order 1, -1, i, -i, j, -j, k, -k.
_Q_UNITS = ["1", "i", "j", "k"]
_Q_TABLE = {
    ("1", u): (1, u) for u in _Q_UNITS
}
_Q_TABLE.update({(u, "1"): (1, u) for u in _Q_UNITS})
_Q_TABLE.update({
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
})


def quaternion8() -> FiniteGroup:
    elems = [(s, u) for u in _Q_UNITS for s in (1, -1)]
    index = {e: n for n, e in enumerate(elems)}

    def qmul(x, y):
        s, u = _Q_TABLE[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    table = [[index[qmul(x, y)] for y in elems] for x in elems]
    named = {"-1": index[(-1, "1")], "i": index[(1, "i")], "j": index[(1, "j")],
             "k": index[(1, "k")]}
    return group_from_table(table, label="Q8", named=named)


def _power_action(h: FiniteGroup, k: FiniteGroup, auto: Sequence[int]):
    """Action of the cyclic group ``k`` whose generator 1 acts by ``auto``."""
    return extend_action(h, k, {1 % k.order: auto}) if k.order > 1 else [tuple(range(h.order))]


def cyclic_semidirect(n: int, m: int, r: int,
                      max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``Z_n x| Z_m`` where the generator of ``Z_m`` acts by ``x -> r x``."""
    h, k = cyclic(n), cyclic(m)
    auto = [(r * x) % n for x in range(n)]
    return semidirect_product(h, k, _power_action(h, k, auto), max_order=max_order,
                              label=f"Z{n}:Z{m}")


def dihedral(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Dihedral group of order ``2n`` as ``Z_n x| Z_2`` (inversion)."""
    g = cyclic_semidirect(n, 2, -1, max_order=max_order)
    return FiniteGroup(order=g.order, mul=g.mul, inv=g.inv, label=f"D{2 * n}")


def dihedral8() -> FiniteGroup:
    return dihedral(4)


def symmetric(m: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if m <= 1:
        return cyclic(1)
    cycle = list(range(1, m)) + [0]
    swap = [1, 0] + list(range(2, m))
    g = group_from_permutations([cycle, swap] if m > 2 else [swap], max_order=max_order)
    return FiniteGroup(order=g.order, mul=g.mul, inv=g.inv, label=f"S{m}")


def heisenberg(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over ``Z_p``.

    ``(a, b, c)`` stands for ``[[1, a, c], [0, 1, b], [0, 0, 1]]`` and is
    indexed ``a p^2 + b p + c``.
    """
    _require_prime(p)
    if p == 2:
        raise GroupError("heisenberg(p) is built for odd primes")
    elems = list(itertools.product(range(p), repeat=3))

    def idx(a, b, c):
        return (a % p) * p * p + (b % p) * p + c % p

    table = [[idx(a1 + a2, b1 + b2, c1 + c2 + a1 * b2) for (a2, b2, c2) in elems]
             for (a1, b1, c1) in elems]
    return group_from_table(table, label=f"Heis({p})",
                            named={"x": idx(1, 0, 0), "y": idx(0, 1, 0), "z": idx(0, 0, 1)})


def extraspecial_p2_exponent_p2(p: int) -> FiniteGroup:
    """The extraspecial group of order ``p^3`` and exponent ``p^2``:
    ``Z_{p^2} x| Z_p`` with the generator acting by ``x -> (1+p) x``."""
    _require_prime(p)
    if p == 2:
        raise GroupError("exponent-p^2 extraspecial groups are built for odd primes")
    g = cyclic_semidirect(p * p, p, 1 + p)
    return FiniteGroup(order=g.order, mul=g.mul, inv=g.inv, label=f"{p}^(1+2)_exp{p * p}")


def abelian(orders: Sequence[int], max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Direct product of cyclic groups of the given orders."""
    total = 1
    for n in orders:
        if n < 1:
            raise GroupError("cyclic factor orders must be positive")
        total *= n
    if total > max_order:
        raise ClosureLimitExceeded(f"order {total} > {max_order}")
    g = cyclic(1)
    for n in orders:
        g = direct_product(g, cyclic(n), max_order=max_order) if g.order > 1 else cyclic(n)
    label = "x".join(f"Z{n}" for n in orders) or "Z1"
    return FiniteGroup(order=g.order, mul=g.mul, inv=g.inv, label=label)


def _z3_squared_autos() -> Tuple[List[int], List[int]]:
    """Conjugation by a and by b on ``<x, y> = Z_3^2`` (``x^u y^v`` is ``3u + v``),
    read off the relations ``x^a = x y^2, y^a = x^2 y^2, x^b = y, y^b = x^2``."""

    def linear(img_x, img_y):
        return [(3 * ((u * img_x[0] + v * img_y[0]) % 3) + (u * img_x[1] + v * img_y[1]) % 3)
                for u in range(3) for v in range(3)]

    return linear((1, 2), (2, 2)), linear((0, 1), (2, 0))


def three2_q8(max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``(Z_3)^2 x| Q_8`` from the presentation with ``a = i, b = j, c = -1`` in Q8.

    Writing ``h^k = k^-1 h k`` for the relations, the semidirect action (which
    is ``h -> k h k^-1``) sends a generator to the inverse of its relation map.
    """
    h = direct_product(cyclic(3), cyclic(3))
    q8 = quaternion8()
    conj_a, conj_b = _z3_squared_autos()

    def inverse(perm):
        out = [0] * len(perm)
        for i, x in enumerate(perm):
            out[x] = i
        return out

    action = extend_action(h, q8, {q8.named["i"]: inverse(conj_a),
                                   q8.named["j"]: inverse(conj_b)})
    g = semidirect_product(h, q8, action, max_order=max_order, label="(Z3)^2:Q8")
    m = q8.order

    def pair(hh, kk):
        return hh * m + kk

    named = {"a": pair(0, q8.named["i"]), "b": pair(0, q8.named["j"]),
             "c": pair(0, q8.named["-1"]), "x": pair(3, 0), "y": pair(1, 0)}
    return FiniteGroup(order=g.order, mul=g.mul, inv=g.inv, label=g.label, named=named)


# ---------------------------------------------------------------------------
# JSON specs
# ---------------------------------------------------------------------------


def _int(spec: Mapping[str, Any], key: str) -> int:
    try:
        v = spec[key]
    except KeyError:
        raise SpecError(f"family {spec.get('family')!r} needs {key!r}") from None
    if not isinstance(v, int) or isinstance(v, bool):
        raise SpecError(f"{key!r} must be an integer")
    return v


def from_spec(spec: Mapping[str, Any], max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build a group from a JSON family spec such as ``{"family": "cyclic", "n": 6}``."""
    if not isinstance(spec, Mapping) or "family" not in spec:
        raise SpecError("group spec must be an object with a 'family' key")
    fam = spec["family"]

    def bounded(g: FiniteGroup) -> FiniteGroup:
        if g.order > max_order:
            raise ClosureLimitExceeded(f"order {g.order} > {max_order}")
        return g

    if fam == "cyclic":
        n = _int(spec, "n")
        if n > max_order:
            raise ClosureLimitExceeded(f"order {n} > {max_order}")
        return cyclic(n)
    if fam == "abelian":
        orders = spec.get("orders")
        if not isinstance(orders, list) or not all(isinstance(x, int) for x in orders):
            raise SpecError("'orders' must be a list of integers")
        return abelian(orders, max_order=max_order)
    if fam == "frobenius_field":
        return frobenius_field_group(_int(spec, "p"), _int(spec, "r"), max_order=max_order)
    if fam == "heisenberg":
        return bounded(heisenberg(_int(spec, "p")))
    if fam == "extraspecial_exp_p2":
        return bounded(extraspecial_p2_exponent_p2(_int(spec, "p")))
    if fam == "q8":
        return bounded(quaternion8())
    if fam == "d8":
        return bounded(dihedral8())
    if fam == "three2_q8":
        return three2_q8(max_order=max_order)
    if fam == "dihedral":
        return dihedral(_int(spec, "n"), max_order=max_order)
    if fam == "symmetric":
        return symmetric(_int(spec, "n"), max_order=max_order)
    if fam == "cyclic_semidirect":
        return cyclic_semidirect(_int(spec, "n"), _int(spec, "m"), _int(spec, "r"),
                                 max_order=max_order)
    if fam == "perm":
        gens = spec.get("generators")
        if not isinstance(gens, list):
            raise SpecError("'generators' must be a list of permutations")
        return group_from_permutations(gens, max_order=max_order)
    raise SpecError(f"unknown family {fam!r}")


CATALOG_SPECS: Dict[str, Dict[str, Any]] = {
    "Z6": {"family": "cyclic", "n": 6},
    "Z2xZ4": {"family": "abelian", "orders": [2, 4]},
    "Z3xZ3": {"family": "abelian", "orders": [3, 3]},
    "Z12": {"family": "cyclic", "n": 12},
    "Frob(2^1)": {"family": "frobenius_field", "p": 2, "r": 1},
    "Frob(3^1)": {"family": "frobenius_field", "p": 3, "r": 1},
    "Frob(2^2)": {"family": "frobenius_field", "p": 2, "r": 2},
    "Frob(5^1)": {"family": "frobenius_field", "p": 5, "r": 1},
    "Frob(7^1)": {"family": "frobenius_field", "p": 7, "r": 1},
    "Frob(2^3)": {"family": "frobenius_field", "p": 2, "r": 3},
    "(Z3)^2:Q8": {"family": "three2_q8"},
    "D8": {"family": "d8"},
    "Q8": {"family": "q8"},
    "Heis(3)": {"family": "heisenberg", "p": 3},
    "Heis(5)": {"family": "heisenberg", "p": 5},
    "27_exp9": {"family": "extraspecial_exp_p2", "p": 3},
    "S4": {"family": "symmetric", "n": 4},
    "D10": {"family": "dihedral", "n": 5},
    "Z3:Z4": {"family": "cyclic_semidirect", "n": 3, "m": 4, "r": 2},
    "Z5:Z4": {"family": "cyclic_semidirect", "n": 5, "m": 4, "r": 2},
}
"""The named groups exercised by the acceptance suite."""
