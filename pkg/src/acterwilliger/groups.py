"""Finite groups as multiplication tables.

Elements are the integers ``0..n-1`` and the identity is always ``0``.
Everything downstream (adjacency matrices, dual idempotents) indexes rows and
columns by these integers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

DEFAULT_MAX_ORDER = 512

__all__ = [
    "DEFAULT_MAX_ORDER",
    "GroupError",
    "ClosureLimitExceeded",
    "InvalidPermutation",
    "ActionNotAutomorphism",
    "ActionNotHomomorphism",
    "NotNormal",
    "FiniteGroup",
    "SubgroupSet",
    "ConjugacyPartition",
    "group_from_permutations",
    "group_from_table",
    "cyclic",
    "direct_product",
    "semidirect_product",
    "extend_action",
    "quotient",
    "conjugacy_classes",
    "subgroup_generated",
    "commutator_subgroup",
    "derived_subgroup",
    "center",
    "lower_central_series",
    "is_normal",
    "element_order",
    "is_elementary_abelian",
    "check_group_axioms",
]


class GroupError(ValueError):
    pass


class ClosureLimitExceeded(GroupError):
    pass


class InvalidPermutation(GroupError):
    pass


class ActionNotAutomorphism(GroupError):
    pass


class ActionNotHomomorphism(GroupError):
    pass


class NotNormal(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table.

    ``mul[a][b]`` is the index of ``a*b``; ``inv[a]`` the index of ``a^-1``.
    ``named`` optionally records a few distinguished elements (e.g. the
    generators of a presentation) for reports and fixtures.
    """

    order: int
    mul: Tuple[Tuple[int, ...], ...]
    inv: Tuple[int, ...]
    identity: int = 0
    label: str = ""
    named: Mapping[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label or '?'}, order={self.order})"

    def elements(self) -> range:
        return range(self.order)

    def m(self, *xs: int) -> int:
        """Product of several elements, left to right."""
        acc = self.identity
        for x in xs:
            acc = self.mul[acc][x]
        return acc

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def commutator(self, x: int, y: int) -> int:
        """``x^-1 y^-1 x y``."""
        return self.m(self.inv[x], self.inv[y], x, y)

    def is_abelian(self) -> bool:
        mul = self.mul
        return all(mul[a][b] == mul[b][a]
                   for a in range(self.order) for b in range(a + 1, self.order))


@dataclass(frozen=True)
class SubgroupSet:
    members: Tuple[int, ...]
    parent_order: int

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.members)

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cached_set", s)
        return s

    def as_set(self) -> frozenset:
        return self._set

    @property
    def order(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ConjugacyPartition:
    classes: Tuple[Tuple[int, ...], ...]
    class_of: Tuple[int, ...]
    inverse_class: Tuple[int, ...]

    @property
    def d(self) -> int:
        """Number of non-identity classes."""
        return len(self.classes) - 1

    def sizes(self) -> List[int]:
        return [len(c) for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def group_from_table(table: Sequence[Sequence[int]], label: str = "",
                     named: Mapping[str, int] | None = None) -> FiniteGroup:
    """Wrap a Cayley table whose identity is element 0."""
    n = len(table)
    mul = tuple(tuple(row) for row in table)
    if any(len(row) != n for row in mul):
        raise GroupError("Cayley table is not square")
    if mul[0] != tuple(range(n)):
        raise GroupError("element 0 is not a left identity")
    inv = [0] * n
    for a in range(n):
        try:
            inv[a] = mul[a].index(0)
        except ValueError:
            raise GroupError(f"element {a} has no inverse") from None
    return FiniteGroup(order=n, mul=mul, inv=tuple(inv), label=label,
                       named=dict(named or {}))


def _check_perm(p: Sequence[int], m: int) -> Tuple[int, ...]:
    p = tuple(p)
    if len(p) != m or sorted(p) != list(range(m)):
        raise InvalidPermutation(f"{list(p)} is not a permutation of 0..{m - 1}")
    return p


def group_from_permutations(generators: Sequence[Sequence[int]],
                            max_order: int = DEFAULT_MAX_ORDER,
                            label: str = "perm") -> FiniteGroup:
    """Group generated by permutations of ``0..m-1``.

    The product ``a*b`` is the composition ``x -> a[b[x]]``. Elements are
    numbered in breadth-first order from the identity, multiplying on the
    right by generators in the given order.
    """
    if not generators:
        return FiniteGroup(order=1, mul=((0,),), inv=(0,), label=label)
    m = len(generators[0])
    gens = [_check_perm(g, m) for g in generators]

    def compose(a, b):
        return tuple(a[x] for x in b)

    ident = tuple(range(m))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for s in gens:
            b = compose(a, s)
            if b not in index:
                if len(elems) >= max_order:
                    raise ClosureLimitExceeded(
                        f"generated group has order > {max_order}")
                index[b] = len(elems)
                elems.append(b)
                queue.append(b)
    table = [[index[compose(a, b)] for b in elems] for a in elems]
    return group_from_table(table, label=label)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(order=n, mul=tuple(map(tuple, table)),
                       inv=tuple((-a) % n for a in range(n)), label=f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup,
                   max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``G x H`` on pairs ``(a, b)`` flattened as ``a * |H| + b``."""
    n, k = g.order, h.order
    if n * k > max_order:
        raise ClosureLimitExceeded(f"|G x H| = {n * k} > {max_order}")
    table = [[g.mul[a1][a2] * k + h.mul[b1][b2]
              for a2 in range(n) for b2 in range(k)]
             for a1 in range(n) for b1 in range(k)]
    inv = tuple(g.inv[a] * k + h.inv[b] for a in range(n) for b in range(k))
    label = "x".join(x for x in (g.label, h.label) if x)
    return FiniteGroup(order=n * k, mul=tuple(map(tuple, table)), inv=inv, label=label)


def _check_action(h: FiniteGroup, k: FiniteGroup, action) -> List[Tuple[int, ...]]:
    if len(action) != k.order:
        raise ActionNotHomomorphism(
            f"action has {len(action)} maps, K has {k.order} elements")
    maps = []
    for kk, phi in enumerate(action):
        phi = tuple(phi)
        if len(phi) != h.order or sorted(phi) != list(range(h.order)):
            raise ActionNotAutomorphism(f"action[{kk}] is not a bijection of H")
        for a in range(h.order):
            for b in range(h.order):
                if phi[h.mul[a][b]] != h.mul[phi[a]][phi[b]]:
                    raise ActionNotAutomorphism(
                        f"action[{kk}] does not respect the product of {a} and {b}")
        maps.append(phi)
    if maps[k.identity] != tuple(range(h.order)):
        raise ActionNotHomomorphism("identity of K does not act trivially")
    for k1 in range(k.order):
        for k2 in range(k.order):
            composed = tuple(maps[k1][maps[k2][a]] for a in range(h.order))
            if maps[k.mul[k1][k2]] != composed:
                raise ActionNotHomomorphism(
                    f"action[{k1}*{k2}] != action[{k1}] o action[{k2}]")
    return maps


def semidirect_product(h: FiniteGroup, k: FiniteGroup, action: Sequence[Sequence[int]],
                       max_order: int = DEFAULT_MAX_ORDER,
                       label: str | None = None) -> FiniteGroup:
    """``H x| K`` with ``(h1,k1)(h2,k2) = (h1 * action[k1](h2), k1 k2)``.

    ``action[k][x]`` is the image of ``x`` in H under ``k``; the map
    ``k -> action[k]`` must be a homomorphism ``K -> Aut(H)``.
    Pairs are flattened as ``h * |K| + k``.
    """
    n, m = h.order, k.order
    if n * m > max_order:
        raise ClosureLimitExceeded(f"|H x| K| = {n * m} > {max_order}")
    phi = _check_action(h, k, action)
    table = [[h.mul[h1][phi[k1][h2]] * m + k.mul[k1][k2]
              for h2 in range(n) for k2 in range(m)]
             for h1 in range(n) for k1 in range(m)]
    if label is None:
        label = f"{h.label}:{k.label}"
    return group_from_table(table, label=label)


def extend_action(h: FiniteGroup, k: FiniteGroup, gen_images: Mapping[int, Sequence[int]]
                  ) -> List[Tuple[int, ...]]:
    """Extend automorphisms given on generators of K to all of K.

    Walks K breadth-first from the identity using ``phi(k*s) = phi(k) o phi(s)``.
    Raises :class:`ActionNotHomomorphism` if two words for the same element of
    K give different automorphisms, i.e. the generator images violate a
    relation of K, or if the generators do not generate K.
    """
    gens = {s: tuple(img) for s, img in gen_images.items()}
    ident = tuple(range(h.order))
    action: Dict[int, Tuple[int, ...]] = {k.identity: ident}
    queue = deque([k.identity])
    while queue:
        a = queue.popleft()
        for s, img in gens.items():
            b = k.mul[a][s]
            composed = tuple(action[a][img[x]] for x in range(h.order))
            if b not in action:
                action[b] = composed
                queue.append(b)
            elif action[b] != composed:
                raise ActionNotHomomorphism(
                    f"generator images are inconsistent at element {b} of K")
    if len(action) != k.order:
        raise ActionNotHomomorphism("generators do not generate K")
    return [action[x] for x in range(k.order)]


# ---------------------------------------------------------------------------
# Subgroups, classes, series
# ---------------------------------------------------------------------------


def subgroup_generated(g: FiniteGroup, gens) -> SubgroupSet:
    """Closure of ``gens`` under multiplication (finite, so inverses come free)."""
    members = {g.identity}
    frontier = [g.identity]
    gens = sorted(set(gens))
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = g.mul[a][s]
                if b not in members:
                    members.add(b)
                    nxt.append(b)
        frontier = nxt
    return SubgroupSet(tuple(sorted(members)), g.order)


def commutator_subgroup(g: FiniteGroup, a: SubgroupSet, b: SubgroupSet) -> SubgroupSet:
    """``[A, B]``, generated by all ``x^-1 y^-1 x y`` with x in A, y in B."""
    comms = {g.commutator(x, y) for x in a for y in b}
    return subgroup_generated(g, comms)


def whole(g: FiniteGroup) -> SubgroupSet:
    return SubgroupSet(tuple(range(g.order)), g.order)


def trivial(g: FiniteGroup) -> SubgroupSet:
    return SubgroupSet((g.identity,), g.order)


def derived_subgroup(g: FiniteGroup) -> SubgroupSet:
    full = whole(g)
    return commutator_subgroup(g, full, full)


def center(g: FiniteGroup) -> SubgroupSet:
    mul = g.mul
    members = [z for z in range(g.order)
               if all(mul[z][x] == mul[x][z] for x in range(g.order))]
    return SubgroupSet(tuple(members), g.order)


def lower_central_series(g: FiniteGroup) -> List[SubgroupSet]:
    """``[gamma_1 = G, gamma_2 = G', ...]`` up to and including the first repeat-free
    stable term (for nilpotent groups, ending at ``{e}``)."""
    full = whole(g)
    series = [full]
    while True:
        nxt = commutator_subgroup(g, series[-1], full)
        if nxt.members == series[-1].members:
            break
        series.append(nxt)
    return series


def is_normal(g: FiniteGroup, n: SubgroupSet) -> bool:
    s = n.as_set()
    return all(g.conj(x, y) in s for x in range(g.order) for y in n)


def element_order(g: FiniteGroup, x: int) -> int:
    k, y = 1, x
    while y != g.identity:
        y = g.mul[y][x]
        k += 1
    return k


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            if p not in out:
                out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_elementary_abelian(s: SubgroupSet, g: FiniteGroup) -> Tuple[bool, Optional[int]]:
    """Whether ``s`` is elementary abelian; the prime is ``None`` for ``{e}``."""
    mem = list(s)
    if any(g.mul[a][b] != g.mul[b][a] for a in mem for b in mem):
        return False, None
    orders = {element_order(g, x) for x in mem if x != g.identity}
    if not orders:
        return True, None
    if len(orders) == 1:
        (p,) = orders
        if _prime_factors(p) == [p]:
            return True, p
    return False, None


def conjugacy_classes(g: FiniteGroup) -> ConjugacyPartition:
    """Classes with ``C_0 = {e}`` first, the rest sorted by (size, least element)."""
    n = g.order
    seen = [False] * n
    orbits = []
    for x in range(n):
        if seen[x]:
            continue
        orb = sorted({g.conj(h, x) for h in range(n)})
        for y in orb:
            seen[y] = True
        orbits.append(tuple(orb))
    ident = [c for c in orbits if c == (g.identity,)]
    rest = sorted((c for c in orbits if c != (g.identity,)), key=lambda c: (len(c), c[0]))
    classes = tuple(ident + rest)
    class_of = [0] * n
    for i, c in enumerate(classes):
        for x in c:
            class_of[x] = i
    inverse_class = tuple(class_of[g.inv[c[0]]] for c in classes)
    return ConjugacyPartition(classes, tuple(class_of), inverse_class)


def quotient(g: FiniteGroup, n: SubgroupSet) -> Tuple[FiniteGroup, Tuple[int, ...]]:
    """``G/N`` and the projection ``G -> G/N``.

    Cosets are numbered by increasing least representative, so ``N`` itself
    is coset 0.
    """
    if not is_normal(g, n):
        raise NotNormal("subgroup is not normal")
    proj = [-1] * g.order
    reps = []
    for x in range(g.order):
        if proj[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for y in n:
            proj[g.mul[x][y]] = idx
    table = [[proj[g.mul[a][b]] for b in reps] for a in reps]
    q = group_from_table(table, label=f"{g.label}/N{len(n)}")
    return q, tuple(proj)


def check_group_axioms(g: FiniteGroup, exhaustive_limit: int = DEFAULT_MAX_ORDER,
                       samples: int = 200000, seed: int = 0) -> Dict[str, bool]:
    """Table sanity checks. Associativity is exhaustive up to ``exhaustive_limit``."""
    n, mul = g.order, g.mul
    e = g.identity
    perm_rows = all(sorted(row) == list(range(n)) for row in mul)
    perm_cols = all(sorted(mul[a][b] for a in range(n)) == list(range(n))
                    for b in range(n))
    identity = all(mul[e][x] == x and mul[x][e] == x for x in range(n))
    inverse = all(mul[x][g.inv[x]] == e and mul[g.inv[x]][x] == e for x in range(n))
    table = np.asarray(mul, dtype=np.int64)
    if n <= exhaustive_limit:
        # (ab)c == a(bc) for all b, c at once, one a at a time
        assoc = all(np.array_equal(table[table[a]], table[a][table]) for a in range(n))
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        assoc = bool(np.array_equal(table[table[a, b], c], table[a, table[b, c]]))
    return {"latin_rows": perm_rows, "latin_cols": perm_cols, "identity": identity,
            "inverse": inverse, "associative": assoc}
