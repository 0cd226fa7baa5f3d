"""Group-theoretic predicates behind the almost-commutative classification.

Everything here is brute force over the Cayley table: conjugacy classes,
cosets, commutator subgroups and quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .groups import (
    FiniteGroup,
    GroupError,
    NotNormal,
    SubgroupSet,
    _prime_factors,
    center,
    conjugacy_classes,
    derived_subgroup,
    is_elementary_abelian,
    is_normal,
    lower_central_series,
    quotient,
    subgroup_generated,
)
from .scheme import GroupScheme, build_scheme, is_almost_commutative

__all__ = [
    "PreconditionUnmet",
    "FamilyVerdict",
    "is_camina_group",
    "is_camina_pair",
    "camina_pair_conditions",
    "is_camina_p_group",
    "camina_structure_checks",
    "derived_two_classes",
    "is_frobenius_field_family",
    "is_three2_q8_fingerprint",
    "predicted_almost_commutative",
    "class_product_property",
    "normal_subgroups_within",
    "cross_check",
]

THREE2_Q8_SIZES = (1, 8, 9, 18, 18, 18)


class PreconditionUnmet(GroupError):
    pass


def _coset(g: FiniteGroup, x: int, k) -> frozenset:
    return frozenset(g.mul[x][y] for y in k)


def _is_prime_power(n: int) -> Optional[int]:
    ps = _prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def is_camina_pair(g: FiniteGroup, k: SubgroupSet) -> bool:
    """Every ``x`` outside K is conjugate to each element of ``xK``.

    Checked as ``xK`` being contained in the class of ``x``.
    """
    if not is_normal(g, k):
        raise NotNormal("K must be normal in G")
    part = conjugacy_classes(g)
    for cls in part.classes:
        x = cls[0]
        if x in k:
            continue
        # the condition is class-invariant, so one representative suffices
        if not _coset(g, x, k) <= frozenset(cls):
            return False
    return True


def is_camina_group(g: FiniteGroup) -> bool:
    """Every class outside ``G'`` is a coset of ``G'``.

    Abelian groups pass degenerately: ``G' = {e}`` and every class is a
    singleton coset.
    """
    dg = derived_subgroup(g)
    for cls in conjugacy_classes(g).classes:
        if cls[0] in dg:
            continue
        if frozenset(cls) != _coset(g, cls[0], dg):
            return False
    return True


def camina_pair_conditions(g: FiniteGroup, k: SubgroupSet, deep: bool = False,
                           scheme: Optional[GroupScheme] = None) -> Dict[str, bool]:
    """Equivalent characterisations of ``(G, K)`` being a Camina pair, for ``{e} < K`` normal.

    ``pair``: the definition. ``class_products``: ``C_i C_j = C_j`` as sets
    for classes ``C_i`` inside K and ``C_j`` outside (read from the
    intersection numbers). With ``deep``: ``centralizers`` compares
    ``|C_G(x)|`` with ``|C_{G/K}(xK)|`` and ``lifted_conjugacy`` checks that
    conjugate nontrivial cosets come from conjugate elements.
    """
    if len(k) <= 1:
        raise PreconditionUnmet("K must be nontrivial")
    if not is_normal(g, k):
        raise NotNormal("K must be normal in G")
    scheme = scheme or build_scheme(g)
    part = scheme.partition
    inside = [i for i, c in enumerate(part.classes) if c[0] in k]
    outside = [j for j, c in enumerate(part.classes) if c[0] not in k]
    products = all(
        scheme.p(i, j, h) == 0 or h == j
        for i in inside for j in outside for h in range(scheme.n_classes))
    out = {"pair": is_camina_pair(g, k), "class_products": products}
    if deep:
        q, proj = quotient(g, k)
        qpart = conjugacy_classes(q)

        def centralizer_order(grp: FiniteGroup, x: int) -> int:
            return sum(1 for y in range(grp.order) if grp.mul[x][y] == grp.mul[y][x])

        out["centralizers"] = all(
            centralizer_order(g, c[0]) == centralizer_order(q, proj[c[0]])
            for c in part.classes if c[0] not in k)
        lifted = True
        for qc in qpart.classes[1:]:
            preimage = {x for x in range(g.order) if qpart.class_of[proj[x]] == qpart.class_of[qc[0]]}
            if len({part.class_of[x] for x in preimage}) != 1:
                lifted = False
        out["lifted_conjugacy"] = lifted
    return out


def is_camina_p_group(g: FiniteGroup) -> Tuple[bool, Optional[int]]:
    """Nonabelian Camina group of prime-power order, with its nilpotency class."""
    if g.order == 1 or _is_prime_power(g.order) is None or g.is_abelian():
        return False, None
    if not is_camina_group(g):
        return False, None
    return True, len(lower_central_series(g)) - 1


def normal_subgroups_within(g: FiniteGroup, ambient: SubgroupSet) -> List[SubgroupSet]:
    """All normal subgroups of G contained in ``ambient`` (itself normal).

    Normal subgroups are unions of classes; every one is generated by the
    classes it contains, so joining classes one at a time reaches them all.
    """
    classes = [c for c in conjugacy_classes(g).classes[1:] if c[0] in ambient]
    start = SubgroupSet((g.identity,), g.order)
    found = {start.members: start}
    frontier = [start]
    while frontier:
        nxt = []
        for n in frontier:
            for c in classes:
                if c[0] in n:
                    continue
                m = subgroup_generated(g, list(n) + list(c))
                if m.members not in found:
                    found[m.members] = m
                    nxt.append(m)
        frontier = nxt
    return [found[key] for key in sorted(found, key=lambda t: (len(t), t))]


def _power_in(g: FiniteGroup, x: int, p: int, target) -> bool:
    y = g.identity
    for _ in range(p):
        y = g.mul[y][x]
    return y in target


def camina_structure_checks(g: FiniteGroup) -> Dict[str, object]:
    """Structural consequences of being a (nonabelian) Camina group, verified directly.

    For Camina p-groups: class shapes relative to ``gamma_2, gamma_3`` with
    ``gamma_3 = Z(G)`` for class 3 and ``{e}`` for class 2; elementary-abelian
    center; for class 3 the index equations and elementary-abelian layers.
    For nonabelian Camina groups: ``Z(G) <= G'`` and ``G/N`` Camina for every
    normal ``N <= G'``.
    """
    if g.is_abelian() or not is_camina_group(g):
        raise PreconditionUnmet("requires a nonabelian Camina group")
    report: Dict[str, object] = {}
    z = center(g)
    dg = derived_subgroup(g)
    zset = z.as_set()
    report["center_in_derived"] = zset <= dg.as_set()
    quotients = {}
    for n in normal_subgroups_within(g, dg):
        q, _ = quotient(g, n)
        quotients[len(n)] = quotients.get(len(n), True) and is_camina_group(q)
    report["quotients_camina"] = all(quotients.values())
    report["quotient_orders_checked"] = sorted(quotients)

    is_p, cls = is_camina_p_group(g)
    if not is_p:
        return report
    p = _is_prime_power(g.order)
    series = lower_central_series(g)
    gamma2 = series[1].as_set()
    gamma3 = series[2].as_set() if cls == 3 else frozenset({g.identity})
    shapes = True
    for c in conjugacy_classes(g).classes:
        x, cs = c[0], frozenset(c)
        if x not in gamma2:
            expected = _coset(g, x, gamma2)
        elif x not in gamma3:
            expected = _coset(g, x, gamma3)
        else:
            expected = frozenset({x})
        shapes = shapes and cs == expected
    report["class_shapes"] = shapes
    report["center_elementary_abelian"] = is_elementary_abelian(z, g)[0]
    report["nilpotency_class"] = cls
    if cls == 3:
        idx_g = g.order // len(gamma2)
        idx_z = len(gamma2) // len(zset)
        n = 0
        while p ** n < idx_z:
            n += 1
        report["series_through_center"] = series[2].as_set() == zset
        report["index_equations"] = (p ** n == idx_z and idx_g == p ** (2 * n) and n % 2 == 0)
        report["top_elementary_abelian"] = all(_power_in(g, x, p, gamma2) for x in range(g.order))
        report["middle_elementary_abelian"] = (
            all(_power_in(g, x, p, zset) for x in gamma2)
            and all(g.commutator(a, b) in zset for a in gamma2 for b in gamma2))
    return report


def derived_two_classes(g: FiniteGroup) -> bool:
    """``G'`` is exactly ``{e}`` together with one more class ``G' - {e}``."""
    dg = derived_subgroup(g)
    inside = [c for c in conjugacy_classes(g).classes if c[0] in dg]
    return len(inside) == 2


def is_frobenius_field_family(g: FiniteGroup) -> bool:
    """Camina, two classes in ``G'``, ``G'`` elementary abelian of order ``q``, ``|G| = q(q-1)``.

    The order condition excludes the extra-special 2-groups, the other
    branch of the two-class dichotomy.
    """
    if g.is_abelian() or not is_camina_group(g) or not derived_two_classes(g):
        return False
    dg = derived_subgroup(g)
    elem, _p = is_elementary_abelian(dg, g)
    q = len(dg)
    return elem and g.order == q * (q - 1)


def is_three2_q8_fingerprint(g: FiniteGroup) -> bool:
    """Order 72, class sizes {1,8,9,18,18,18}, ``|G'| = 18``, trivial center.

    An invariant fingerprint, not an isomorphism test.
    """
    if g.order != 72:
        return False
    part = conjugacy_classes(g)
    if tuple(sorted(part.sizes())) != THREE2_Q8_SIZES:
        return False
    return len(derived_subgroup(g)) == 18 and len(center(g)) == 1


@dataclass
class FamilyVerdict:
    is_abelian: bool
    is_camina: bool
    is_camina_p_group: bool
    camina_class: Optional[int]
    is_frobenius_field_family: bool
    is_three2_q8_fingerprint: bool
    derived_two_classes: bool
    evidence: List[str] = field(default_factory=list)

    @property
    def predicted_ac(self) -> bool:
        return (self.is_abelian or self.is_camina_p_group
                or self.is_frobenius_field_family or self.is_three2_q8_fingerprint)

    def to_json(self) -> Dict[str, object]:
        return {
            "is_abelian": self.is_abelian,
            "is_camina": self.is_camina,
            "is_camina_p_group": self.is_camina_p_group,
            "camina_class": self.camina_class,
            "is_frobenius_field_family": self.is_frobenius_field_family,
            "is_three2_q8_fingerprint": self.is_three2_q8_fingerprint,
            "derived_two_classes": self.derived_two_classes,
            "predicted_ac": self.predicted_ac,
            "evidence": list(self.evidence),
        }


def predicted_almost_commutative(g: FiniteGroup) -> FamilyVerdict:
    """Membership in the four AC families: abelian, (Z3)^2:Q8, Frobenius field, Camina p-group."""
    abel = g.is_abelian()
    camina = is_camina_group(g)
    cp, cls = is_camina_p_group(g)
    frob = is_frobenius_field_family(g)
    fp = is_three2_q8_fingerprint(g)
    two = derived_two_classes(g)
    evidence = [f"order {g.order}", f"|G'| = {len(derived_subgroup(g))}"]
    if abel:
        evidence.append("abelian")
    if cp:
        evidence.append(f"nonabelian Camina p-group of class {cls}")
    if frob:
        evidence.append("Camina with G' = {e} + one class, |G| = q(q-1)")
    if fp:
        evidence.append("matches the (Z3)^2:Q8 invariant fingerprint")
    return FamilyVerdict(abel, camina, cp, cls, frob, fp, two, evidence)


def _class_product_set(g: FiniteGroup, a, b) -> frozenset:
    return frozenset(g.mul[x][y] for x in a for y in b)


def class_product_property(g: FiniteGroup) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Whether ``C_i C_j`` is a single class whenever ``C_j`` is not the inverse class of ``C_i``.

    Returns the first failing ``(i, j)`` as witness.
    """
    part = conjugacy_classes(g)
    for i, ci in enumerate(part.classes):
        for j, cj in enumerate(part.classes):
            if j == part.inverse_class[i]:
                continue
            prod = _class_product_set(g, ci, cj)
            x = next(iter(prod))
            if prod != frozenset(part.classes[part.class_of[x]]):
                return False, (i, j)
    return True, None


def cross_check(g: FiniteGroup, scheme: Optional[GroupScheme] = None) -> Dict[str, object]:
    """Compare the family prediction against the intersection-number criterion."""
    scheme = scheme or build_scheme(g)
    verdict = predicted_almost_commutative(g)
    ac = is_almost_commutative(scheme)
    prop, prop_witness = class_product_property(g)
    consistent = verdict.predicted_ac == ac.holds and (not ac.holds or prop)
    return {
        "group": g.label,
        "order": g.order,
        "verdict": verdict,
        "measured_ac": ac.holds,
        "ac_witness": ac.witness,
        "class_product_property": prop,
        "class_product_witness": prop_witness,
        "consistent": consistent,
    }
