import pytest

from logic.exceptions import FragmentError, GuardExceeded, UnsuitableTeamError
from logic.formats import parse_quantifiers
from logic.grammar import parse_formula
from logic.search import SearchBounds
from logic.semantics import (
    EvalConfig,
    check_conservativity,
    eval_tarski,
    is_flat,
    meaning_set,
    sentence_initial_meaning,
)
from logic.structures import Assignment, Structure, Team

FOUR_WITH_THREE = "domain: a b c d\nrel P/1: a b c\n"
FOUR_WITH_FOUR = "domain: a b c d\nrel P/1: a b c d\n"


class TestTarski:
    def test_exists(self, structure):
        m = structure("domain: a b\nrel P/1: a\n")

        assert eval_tarski(m, Assignment(), parse_formula("(E x) P(x)"))

    def test_exactly3_is_exact(self, structure):
        formula = parse_formula("(Q.exactly3 x) P(x)")

        assert eval_tarski(structure(FOUR_WITH_THREE), Assignment(), formula)
        assert not eval_tarski(structure(FOUR_WITH_FOUR), Assignment(), formula)

    def test_most_takes_half(self, structure):
        m = structure("domain: a b c d\nrel P/1: a b\n")

        assert eval_tarski(m, Assignment(), parse_formula("(Q.most x) P(x)"))

    def test_slashed_input_is_rejected(self, structure):
        m = structure("domain: a\n")

        with pytest.raises(FragmentError):
            eval_tarski(m, Assignment({"x": "a"}), parse_formula("(E y/{x}) y = x"))


class TestEvalTeam:
    def test_empty_team_satisfies_everything(self, structure, evaluate):
        m = structure("domain: a b\nrel P/1:\n")

        assert evaluate(m, Team.empty(), "(A x) P(x)")

    def test_exactly3_reads_as_at_least_three(self, structure, evaluate):
        assert evaluate(structure(FOUR_WITH_THREE), Team.unit(), "(Q.exactly3 x) P(x)")
        assert evaluate(structure(FOUR_WITH_FOUR), Team.unit(), "(Q.exactly3 x) P(x)")

    def test_atmost2_is_trivially_true(self, structure, evaluate):
        assert evaluate(structure(FOUR_WITH_FOUR), Team.unit(), "(Q.atmost2 x) P(x)")

    def test_extensional_quantifier(self, structure, evaluate):
        registry = parse_quantifiers("extensional Qa @size2 = {a}")

        assert evaluate(structure("domain: a b\n"), Team.unit(), "(Q.Qa x) x = x", registry)

    def test_unsuitable_team_raises(self, structure, evaluate):
        with pytest.raises(UnsuitableTeamError):
            evaluate(structure("domain: a\nrel P/1: a\n"), Team.unit(), "P(x)")

    def test_slash_makes_the_choice_uniform(self, structure, team, evaluate):
        m = structure("domain: a b\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"})

        assert evaluate(m, x, "(E y) y = x")
        assert not evaluate(m, x, "(E y/{x}) y = x")

    def test_slashed_formulas_are_not_local(self, structure, team, evaluate):
        m = structure("domain: a b\n")
        x = team({"x", "w"}, {"x": "a", "w": "a"}, {"x": "b", "w": "b"})

        assert evaluate(m, x, "(E y/{x}) y = x")

    def test_backslash_depends_only_on_the_listed_variables(self, structure, team, evaluate):
        m = structure("domain: a b\n")
        x = team({"x", "w"}, {"x": "a", "w": "a"}, {"x": "b", "w": "a"})

        assert evaluate(m, x, "(E y\\{x}) y = x")
        assert not evaluate(m, x, "(E y\\{w}) y = x")

    def test_disjunction_splits_the_team(self, structure, team, evaluate):
        m = structure("domain: a b\nrel P/1: a\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"})

        assert evaluate(m, x, "(P(x) | ~P(x))")
        assert not evaluate(m, x, "(P(x) |/{x} ~P(x))")

    def test_strict_mode_agrees_on_first_order_formulas(self, structure, evaluate):
        m = structure("domain: a b\nrel R/2: (a,b) (b,a)\n")

        assert evaluate(m, Team.unit(), "(A x) (E y) R(x,y)", mode="strict")
        assert not evaluate(m, Team.unit(), "(E y) (A x) R(x,y)", mode="strict")

    def test_hat_exists_behaves_like_exists(self, structure, evaluate):
        assert evaluate(structure("domain: a b\nrel P/1: a\n"), Team.unit(), "(TQ.hat_exists x) P(x)")
        assert not evaluate(structure("domain: a b\nrel P/1:\n"), Team.unit(), "(TQ.hat_exists x) P(x)")

    def test_hat_forall_behaves_like_forall(self, structure, evaluate):
        m = structure("domain: a b\nrel P/1: a\n")

        assert not evaluate(m, Team.unit(), "(TQ.hat_forall x) P(x)")
        assert evaluate(m, Team.unit(), "(TQ.hat_forall x) x = x")

    def test_most_functions(self, structure, evaluate):
        assert evaluate(structure("domain: a b\n"), Team.unit(), "(TQ.most_functions y) y = y")

    def test_split_guard(self, structure, team, evaluate):
        m = structure("domain: a b c\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"}, {"x": "c"})

        with pytest.raises(GuardExceeded):
            evaluate(m, x, "(x = x | x = x)", max_split_classes=2)

    def test_choice_function_guard(self, structure, team, evaluate):
        m = structure("domain: a b\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"})

        with pytest.raises(GuardExceeded, match="choice functions"):
            evaluate(m, x, "(E y) y = x", max_choice_functions=2)


class TestEmptyFunctionBan:
    def test_team_quantifiers_reject_the_empty_team(self, structure, evaluate):
        m = structure("domain: a b\n")

        assert not evaluate(m, Team.empty(), "(TQ.hat_exists x) x = x")
        assert evaluate(m, Team.empty(), "(TQ.hat_exists x) x = x", empty_function_ban=False)

    def test_mostowski_quantifiers_keep_the_empty_team_property(self, structure, evaluate):
        assert evaluate(structure("domain: a b\n"), Team.empty(), "(Q.exactly2 x) x = x")

    def test_lift_loses_the_empty_disjunct_under_the_ban(self, structure, team, evaluate):
        m = structure("domain: a b\nrel P/1:\n")
        y = team({"y"}, {"y": "a"})

        assert evaluate(m, y, "((Q.atleast2 x) P(x) | y = y)")
        assert not evaluate(m, y, "((TQ.liftE_atleast2 x) P(x) | y = y)")
        assert evaluate(m, y, "((TQ.liftE_atleast2 x) P(x) | y = y)", empty_function_ban=False)


class TestBounded:
    def test_bounded_clause_forbids_enlargement(self, structure, evaluate):
        assert evaluate(structure(FOUR_WITH_THREE), Team.unit(), "(Q.exactly3 x) P(x)", bounded="uniform")
        assert not evaluate(
            structure(FOUR_WITH_FOUR), Team.unit(), "(Q.exactly3 x) P(x)", bounded="uniform"
        )

    def test_bounded_agrees_on_monotone_quantifiers(self, structure, evaluate):
        m = structure("domain: a b c\nrel P/1: a b\n")

        for text in ("(Q.most x) P(x)", "(Q.atleast2 x) P(x)", "(Q.atleast3 x) P(x)"):
            assert evaluate(m, Team.unit(), text, bounded="uniform") == evaluate(m, Team.unit(), text)

    def test_first_order_bounded_is_pointwise(self, structure, team, evaluate):
        m = structure("domain: a b c\nrel R/2: (a,a) (a,b) (b,c)\n")
        x = team({"z"}, {"z": "a"}, {"z": "b"})

        assert not evaluate(m, x, "(Q.exactly2 y) R(z,y)", bounded="uniform")
        assert evaluate(m, team({"z"}, {"z": "a"}), "(Q.exactly2 y) R(z,y)", bounded="uniform")

    def test_raw_mode_is_guarded_by_rows(self, structure, team, evaluate):
        m = structure("domain: a b\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"})

        with pytest.raises(GuardExceeded):
            evaluate(m, x, "(Q.exactly1 y/{x}) y = y", bounded="raw", max_meaning_classes=1)


class TestMeaningSets:
    def test_every_subset_of_P(self, structure):
        m = structure("domain: a b\nrel P/1: a b\n")

        meaning = meaning_set(m, Team.unit(), parse_formula("P(v)"), "v")

        assert len(meaning) == 4

    def test_empty_team_has_only_the_empty_function(self, structure):
        m = structure("domain: a b\nrel P/1: a\n")

        meaning = meaning_set(m, Team.empty(), parse_formula("P(v)"), "v")

        assert len(meaning) == 1
        assert next(iter(meaning)).is_empty_function()

    def test_unsatisfiable_body_keeps_the_empty_value(self, structure):
        m = structure("domain: a b\n")

        assert sentence_initial_meaning(m, parse_formula("v != v"), "v") == [frozenset()]

    def test_tautology_gives_every_subset(self, structure):
        m = structure("domain: a b\n")

        assert len(sentence_initial_meaning(m, parse_formula("v = v"), "v")) == 4

    def test_sentence_initial_of_P_is_its_powerset(self, structure):
        m = structure("domain: a b c\nrel P/1: a b\n")

        values = sentence_initial_meaning(m, parse_formula("P(v)"), "v")

        assert set(values) == {frozenset(), frozenset("a"), frozenset("b"), frozenset("ab")}

    def test_extra_free_variables_are_rejected(self, structure):
        with pytest.raises(FragmentError):
            sentence_initial_meaning(structure("domain: a\n"), parse_formula("v = w"), "v")

    def test_slashed_meaning_sets_are_uniform(self, structure, team):
        m = structure("domain: a b\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"})

        meaning = meaning_set(m, x, parse_formula("v = v"), "v", {"x"})

        assert len(meaning) == 4
        assert all(len({f(row) for row in x}) == 1 for f in meaning)

    def test_meaning_guard(self, structure, team):
        m = structure("domain: a b c\n")
        x = team({"x"}, {"x": "a"}, {"x": "b"}, {"x": "c"})

        with pytest.raises(GuardExceeded):
            meaning_set(m, x, parse_formula("v = v"), "v", config=EvalConfig(max_meaning_classes=2))


class TestFlatness:
    bounds = SearchBounds(size=2, extra=0)

    def test_first_order_formulas_are_flat(self):
        assert is_flat(parse_formula("(E y) R(x,y)"), self.bounds).holds

    def test_slashed_formula_is_not_flat(self):
        verdict = is_flat(parse_formula("(E y/{x}) y = x"), self.bounds)

        assert not verdict.holds
        assert verdict.counterexample.bindings == {"team": False, "pointwise": True}


class TestConservativity:
    def test_monotone_quantifier_is_conservative(self):
        verdict = check_conservativity("atleast2", parse_formula("P(x)"), "x", SearchBounds(size=3, extra=0))

        assert verdict.holds
        assert "monotone=yes" in verdict.notes

    def test_exactly2_fails_with_three_elements(self):
        verdict = check_conservativity("exactly2", parse_formula("P(x)"), "x", SearchBounds(size=3, extra=0))

        assert not verdict.holds
        assert len(verdict.counterexample.structure.relations["P"].tuples) == 3
