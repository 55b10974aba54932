import pytest

from logic.exceptions import UnknownQuantifierError
from logic.grammar import parse_formula
from logic.quantifiers import (
    QuantifierRegistry,
    at_most,
    cardinality_condition_on,
    exactly,
    exists_quantifier,
    extensional,
    forall_quantifier,
    hat_count_functions,
    hat_exactly_nm,
    hat_exists,
    is_emptyset_free_on,
    is_monotone_on,
    is_nonvoid_up_to,
    is_union_closed_on,
    isomorphism_invariant_on,
    lift_B,
    lift_Bprime,
    lift_E,
    localize,
    most,
    most_functions,
    permutation_invariant_on,
    quality_condition_on,
    team_monotone_on,
)
from logic.structures import Assignment, Structure, SupplementFunction, Team, canonical_domain

AB = Structure(("a", "b"))
UNIT = Team.unit()


def constant(*values):
    return SupplementFunction.from_mapping(UNIT, {Assignment(): set(values)})


class TestLocalize:
    def test_forall_accepts_only_the_domain(self):
        assert localize(forall_quantifier(), AB) == (frozenset({"a", "b"}),)

    def test_exists_accepts_every_nonempty_subset(self):
        assert set(localize(exists_quantifier(), AB)) == {
            frozenset({"a"}),
            frozenset({"b"}),
            frozenset({"a", "b"}),
        }

    def test_exactly3_on_four_elements(self):
        subsets = localize(exactly(3), Structure(canonical_domain(4)))

        assert len(subsets) == 4
        assert all(len(subset) == 3 for subset in subsets)


class TestClosureProperties:
    def test_exists_is_monotone_union_closed_and_emptyset_free(self):
        q = exists_quantifier()

        assert is_monotone_on(q, 3)
        assert is_union_closed_on(q, 3)
        assert is_emptyset_free_on(q, 3)

    def test_singleton_table_is_union_closed_but_not_monotone(self):
        q = extensional("Qa", {2: [(True, False)]})

        assert is_union_closed_on(q, AB)
        assert not is_monotone_on(q, AB)

    def test_exactly2_on_three_elements(self):
        assert not is_monotone_on(exactly(2), 3)
        assert not is_union_closed_on(exactly(2), 3)

    def test_atmost_admits_the_empty_set(self):
        assert not is_emptyset_free_on(at_most(1), 2)

    def test_exactly3_is_void_on_small_domains(self):
        assert not is_nonvoid_up_to(exactly(3), 3)
        assert is_nonvoid_up_to(most(), 3)


class TestLifts:
    def test_empty_family_is_rejected(self):
        for lift in (lift_E, lift_B, lift_Bprime):
            assert not lift(exactly(1)).accepts(AB, UNIT, [])

    def test_lift_E_needs_one_witness(self):
        family = [constant("a"), constant("a", "b")]

        assert lift_E(exactly(1)).accepts(AB, UNIT, family)

    def test_lift_B_rejects_a_larger_member_outside_Q(self):
        family = [constant("a"), constant("a", "b")]

        assert not lift_B(exactly(1)).accepts(AB, UNIT, family)

    def test_lift_B_accepts_when_larger_members_stay_in_Q(self):
        family = [constant("a"), constant("b")]

        assert lift_B(exactly(1)).accepts(AB, UNIT, family)

    def test_lift_Bprime_needs_every_member_in_Q(self):
        assert lift_Bprime(exactly(1)).accepts(AB, UNIT, [constant("a"), constant("b")])
        assert not lift_Bprime(exactly(1)).accepts(AB, UNIT, [constant("a"), constant()])

    def test_forall_lift_accepts_the_full_function(self):
        assert lift_E(forall_quantifier()).accepts(AB, UNIT, [constant("a", "b")])


class TestTeamQuantifiers:
    def test_most_functions_counts_singleton_valued_members(self):
        q = most_functions()

        assert q.accepts(AB, UNIT, [constant("a"), constant("b")])
        assert q.accepts(AB, UNIT, [constant("a")])
        assert not q.accepts(AB, UNIT, [constant("a", "b"), constant()])

    def test_count_functions_rejects_the_empty_function(self):
        empty = SupplementFunction.from_mapping(Team.empty(), {})

        assert hat_count_functions(1).accepts(AB, UNIT, [constant()])
        assert not hat_count_functions(1).accepts(AB, Team.empty(), [empty])

    def test_count_functions_values_reading(self):
        assert not hat_count_functions(1, values_nonempty=True).accepts(AB, UNIT, [constant()])

    def test_empty_function_ban_removes_the_empty_function(self):
        empty = SupplementFunction.from_mapping(Team.empty(), {})
        q = lift_E(at_most(1))

        assert q.accepts(AB, Team.empty(), [empty])
        assert not q.accepts(AB, Team.empty(), [empty], empty_function_ban=True)


class TestLogicality:
    def test_hat_exists_is_team_monotone(self):
        check = team_monotone_on(hat_exists(), AB, UNIT)

        assert check.holds
        assert check.exhaustive

    def test_hat_exactly_nm_is_not_team_monotone(self):
        check = team_monotone_on(hat_exactly_nm(1), AB, UNIT)

        assert not check.holds
        assert check.witness is not None

    def test_lift_E_is_team_monotone(self):
        assert team_monotone_on(lift_E(exactly(1)), AB, UNIT).holds

    def test_count_functions_satisfies_the_cardinality_condition(self):
        assert cardinality_condition_on(hat_count_functions(2), AB, UNIT).holds

    def test_lift_E_fails_the_cardinality_condition(self):
        assert not cardinality_condition_on(lift_E(exactly(1)), AB, UNIT).holds

    def test_cardinality_implies_quality(self):
        assert quality_condition_on(hat_count_functions(2), AB, UNIT).holds

    def test_extensional_lift_is_not_permutation_invariant(self):
        q = lift_E(extensional("Qa", {2: [(True, False)]}))

        assert not permutation_invariant_on(q, AB, UNIT).holds

    def test_cardinality_lift_is_isomorphism_invariant(self):
        team = Team.of({"x"}, [{"x": "a"}])

        assert isomorphism_invariant_on(lift_E(exactly(1)), AB, team).holds


class TestRegistry:
    def test_parametric_names_resolve(self):
        registry = QuantifierRegistry.builtin()

        assert registry.mostowski("exactly3").accepts(frozenset("abc"), Structure(canonical_domain(4)))
        assert registry.team("liftE_most").name == "liftE_most"
        assert registry.team("count_functions3").parameters["k"] == 3

    def test_unknown_names_raise(self):
        registry = QuantifierRegistry.builtin()

        with pytest.raises(UnknownQuantifierError):
            registry.mostowski("nearly")
        with pytest.raises(UnknownQuantifierError):
            registry.link(parse_formula("(TQ.liftE_nearly x) P(x)"))

    def test_builtins_are_listed(self):
        registry = QuantifierRegistry.builtin()

        assert registry.mostowski_names() == ["exists", "forall", "most", "trivial"]
        assert registry.team_names() == ["hat_exists", "hat_forall", "most_functions"]
