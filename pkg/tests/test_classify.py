import pytest

from acterwilliger.catalog import CATALOG_SPECS, frobenius_field_group, from_spec
from acterwilliger.classify import (
    PreconditionUnmet,
    camina_pair_conditions,
    camina_structure_checks,
    class_product_property,
    cross_check,
    derived_two_classes,
    is_camina_group,
    is_camina_p_group,
    is_camina_pair,
    is_frobenius_field_family,
    is_three2_q8_fingerprint,
    normal_subgroups_within,
    predicted_almost_commutative,
)
from acterwilliger.groups import (NotNormal, conjugacy_classes, derived_subgroup, is_normal,
                                  subgroup_generated, trivial, whole)
from acterwilliger.scheme import is_almost_commutative

from conftest import catalog_group, catalog_scheme

NAMES = sorted(CATALOG_SPECS)
QUICK = [n for n in NAMES if n != "Heis(5)"]


def camina_oracle(g):
    """x^G = x G' for every x outside G', straight from the definition."""
    dg = set(derived_subgroup(g))
    classes = conjugacy_classes(g)
    for x in range(g.order):
        if x in dg:
            continue
        coset = {g.mul[x][k] for k in dg}
        if set(classes.classes[classes.class_of[x]]) != coset:
            return False
    return True


class TestCamina:
    @pytest.mark.parametrize("name", QUICK)
    def test_group_predicate_matches_oracle(self, name):
        g = catalog_group(name)
        assert is_camina_group(g) == camina_oracle(g)

    def test_pair_examples(self):
        d8 = catalog_group("D8")
        assert is_camina_pair(d8, derived_subgroup(d8))
        s4 = catalog_group("S4")
        a4 = derived_subgroup(s4)
        assert len(a4) == 12
        assert not is_camina_pair(s4, a4)

    def test_pair_rejects_non_normal(self):
        s4 = catalog_group("S4")
        involutions = [x for x in range(s4.order)
                       if x != s4.identity and s4.mul[x][x] == s4.identity]
        sub = next(h for h in (subgroup_generated(s4, [x]) for x in involutions)
                   if not is_normal(s4, h))
        with pytest.raises(NotNormal):
            is_camina_pair(s4, sub)

    @pytest.mark.parametrize("name", QUICK)
    def test_pair_with_derived_iff_camina(self, name):
        g = catalog_group(name)
        dg = derived_subgroup(g)
        if g.is_abelian():
            return
        assert is_camina_pair(g, dg) == is_camina_group(g)

    @pytest.mark.parametrize("name", [n for n in QUICK if catalog_group(n).order <= 72])
    def test_pair_conditions_agree(self, name):
        g = catalog_group(name)
        s = catalog_scheme(name)
        deep = g.order <= 24
        for k in normal_subgroups_within(g, whole(g)):
            if len(k) <= 1 or len(k) == g.order:
                continue
            cond = camina_pair_conditions(g, k, deep=deep, scheme=s)
            assert len(set(cond.values())) == 1, (k.members, cond)

    def test_pair_conditions_require_nontrivial(self):
        g = catalog_group("D8")
        with pytest.raises(PreconditionUnmet):
            camina_pair_conditions(g, trivial(g))

    def test_p_group_examples(self):
        assert is_camina_p_group(catalog_group("Heis(3)")) == (True, 2)
        assert is_camina_p_group(catalog_group("Q8")) == (True, 2)
        assert is_camina_p_group(frobenius_field_group(2, 2)) == (False, None)
        assert is_camina_p_group(catalog_group("Z2xZ4")) == (False, None)


class TestStructure:
    @pytest.mark.parametrize("name", ["D8", "Q8", "Heis(3)", "27_exp9"])
    def test_camina_p_groups(self, name):
        r = camina_structure_checks(catalog_group(name))
        assert r.pop("nilpotency_class") == 2
        orders = r.pop("quotient_orders_checked")
        assert orders and all(r.values()), r

    def test_heisenberg_center_quotient(self):
        g = catalog_group("Heis(3)")
        r = camina_structure_checks(g)
        assert 3 in r["quotient_orders_checked"]

    def test_frobenius_has_no_p_group_items(self):
        r = camina_structure_checks(catalog_group("Frob(2^2)"))
        assert r["center_in_derived"] and r["quotients_camina"]
        assert "class_shapes" not in r

    def test_precondition(self):
        with pytest.raises(PreconditionUnmet):
            camina_structure_checks(catalog_group("S4"))
        with pytest.raises(PreconditionUnmet):
            camina_structure_checks(catalog_group("Z6"))

    def test_normal_subgroups_of_derived(self):
        g = catalog_group("Heis(3)")
        subs = normal_subgroups_within(g, derived_subgroup(g))
        assert sorted(len(s) for s in subs) == [1, 3]


class TestFamilies:
    def test_derived_two_classes(self):
        assert derived_two_classes(frobenius_field_group(2, 2))
        assert derived_two_classes(catalog_group("Q8"))
        assert not derived_two_classes(catalog_group("Heis(3)"))

    def test_frobenius_family(self):
        assert is_frobenius_field_family(frobenius_field_group(3, 1))
        assert not is_frobenius_field_family(catalog_group("Q8"))
        assert not is_frobenius_field_family(catalog_group("D10"))
        assert is_frobenius_field_family(catalog_group("Z5:Z4"))

    def test_fingerprint(self):
        assert is_three2_q8_fingerprint(catalog_group("(Z3)^2:Q8"))
        assert not is_three2_q8_fingerprint(from_spec({"family": "cyclic", "n": 72}))

    def test_verdict_examples(self):
        assert predicted_almost_commutative(catalog_group("Z2xZ4")).predicted_ac
        assert predicted_almost_commutative(catalog_group("(Z3)^2:Q8")).predicted_ac
        v = predicted_almost_commutative(catalog_group("S4"))
        assert not v.predicted_ac
        assert not (v.is_abelian or v.is_camina_p_group or v.is_frobenius_field_family
                    or v.is_three2_q8_fingerprint)
        assert v.to_json()["predicted_ac"] is False


def class_product_oracle(g):
    """Property via the definition on elements: x^G y^G = (xy)^G whenever x^G != (y^-1)^G."""
    part = conjugacy_classes(g)
    for x in range(g.order):
        for y in range(g.order):
            if part.class_of[x] == part.class_of[g.inv[y]]:
                continue
            prod = {g.mul[a][b] for a in part.classes[part.class_of[x]]
                    for b in part.classes[part.class_of[y]]}
            if prod != set(part.classes[part.class_of[g.mul[x][y]]]):
                return False
    return True


class TestClassProducts:
    @pytest.mark.parametrize("name", [n for n in QUICK if catalog_group(n).order <= 56])
    def test_matches_element_oracle(self, name):
        g = catalog_group(name)
        assert class_product_property(g)[0] == class_product_oracle(g)

    def test_examples(self):
        assert class_product_property(catalog_group("Heis(3)")) == (True, None)
        ok, witness = class_product_property(catalog_group("S4"))
        assert not ok and witness is not None
        assert class_product_property(catalog_group("Z12"))[0]


@pytest.mark.parametrize("name", NAMES)
def test_cross_check_consistent(name):
    g = catalog_group(name)
    s = catalog_scheme(name)
    cc = cross_check(g, scheme=s)
    assert cc["consistent"]
    assert cc["measured_ac"] == is_almost_commutative(s).holds
    assert cc["class_product_property"] == cc["measured_ac"]
    assert cc["verdict"].predicted_ac == cc["measured_ac"]
