import pytest

from logic import verify
from logic.exceptions import LogicError, RuleNotApplicable
from logic.grammar import parse_formula
from logic.rewrite import drop_existential_slashes, weak_extract
from logic.search import SearchBounds
from logic.verify import SUITES, check_step, entails, replay, run_suite, z_equivalent

f = parse_formula
SMALL = SearchBounds(size=2, extra=0)


class TestEquivalence:
    def test_formula_is_equivalent_to_itself(self):
        formula = f("(A x) (E y/{x}) R(x,y)")

        assert z_equivalent(formula, formula, bounds=SMALL).holds

    def test_universal_slash_is_vacuous(self):
        verdict = z_equivalent(f("(A x/{y}) P(x)"), f("(A x) P(x)"), bounds=SMALL)

        assert verdict.holds
        assert verdict.cases > 0

    def test_exists_and_forall_differ(self):
        verdict = z_equivalent(f("(E x) P(x)"), f("(A x) P(x)"), bounds=SMALL)

        assert not verdict.holds
        assert verdict.counterexample.bindings == {"left": True, "right": False}

    def test_slash_changes_meaning(self):
        verdict = z_equivalent(
            f("(A x) (E y/{x}) x = y"), f("(A x) (E y) x = y"), bounds=SMALL
        )

        assert not verdict.holds
        assert verdict.counterexample.structure.size == 2

    def test_modulus_must_avoid_free_variables(self):
        verdict = z_equivalent(f("P(x)"), f("P(x)"), {"x"}, bounds=SMALL)

        assert not verdict.holds
        assert verdict.reason == "modulus intersects free variables"

    def test_replay_reproduces_the_disagreement(self):
        verdict = z_equivalent(f("(E x) P(x)"), f("(A x) P(x)"), bounds=SMALL)

        assert replay(verdict.counterexample) == (True, False)


class TestEntailment:
    def test_forall_entails_exists(self):
        assert entails(f("(A x) P(x)"), f("(E x) P(x)"), bounds=SMALL).holds

    def test_exists_does_not_entail_forall(self):
        assert not entails(f("(E x) P(x)"), f("(A x) P(x)"), bounds=SMALL).holds

    def test_rewrite_step_claim(self):
        step = weak_extract(f("((E x) P(x) | P(y))"), (), "left")

        assert check_step(step, SearchBounds(size=2, extra=1)).holds

    def test_dropped_existential_slash_is_checked_on_the_whole_formula(self):
        step = drop_existential_slashes(f("(E x) (E y/{x}) x = y"), (0,))

        assert check_step(step, SMALL).holds
        assert not z_equivalent(step.source, step.result, step.modulus, SMALL).holds


class TestSuites:
    def test_empty_team(self):
        verdict = run_suite("empty_team", bounds=SMALL, count=5)

        assert verdict.holds
        assert verdict.cases > 0

    def test_nonlocality_witness(self):
        verdict = run_suite("nonlocality_witness", bounds=SearchBounds(size=2, extra=1), count=2)

        assert verdict.holds
        assert verdict.witness is not None
        assert "slashed: witness found" in verdict.notes

    def test_nonlocality_needs_an_extra_variable(self):
        verdict = run_suite("nonlocality_witness", bounds=SMALL, count=2)

        assert not verdict.holds
        assert "extra team variable" in verdict.reason

    def test_logicality(self):
        verdict = run_suite("logicality", count=1)

        assert verdict.holds
        assert verdict.witness.bindings["quantifier"] == "liftE_exactly1"

    def test_union_closed_locality(self):
        assert run_suite("union_closed_locality", bounds=SearchBounds(size=3), count=1).holds

    def test_bounded_swap_finds_a_failure(self):
        verdict = run_suite("bounded_swap", bounds=SearchBounds(size=3, extra=0), count=1)

        assert verdict.holds
        assert verdict.witness is not None

    def test_every_suite_is_registered(self):
        assert {
            "downward_closure",
            "empty_team",
            "locality_df",
            "nonlocality_witness",
            "union_closed_locality",
            "lift_E",
            "lift_B",
            "monotone_bounded_agreement",
            "flat_conservativity",
            "hat_agreement",
            "logicality",
            "strict_lax",
            "singleton_agreement",
            "rewrite_soundness",
            "swap_entailments",
            "bounded_swap",
        } <= set(SUITES)

    def test_unknown_suite(self):
        with pytest.raises(LogicError, match="unknown suite"):
            run_suite("everything")


class TestSuitesAtSmallBounds:
    @pytest.mark.parametrize(
        "name",
        [
            "downward_closure",
            "locality_df",
            "lift_E",
            "lift_B",
            "hat_agreement",
            "strict_lax",
            "singleton_agreement",
            "swap_entailments",
        ],
    )
    def test_suite_holds(self, name):
        verdict = run_suite(name, bounds=SMALL, count=1)

        assert verdict.holds, verdict.reason
        assert verdict.cases > 0

    def test_lift_suites_drop_the_empty_function_ban(self):
        verdict = run_suite("lift_E", bounds=SMALL, count=1)

        assert "team-quantifier side evaluated without the empty-function ban" in verdict.notes

    def test_rewrite_soundness(self):
        verdict = run_suite("rewrite_soundness", bounds=SMALL, count=2)

        assert verdict.holds, verdict.reason
        assert "drop_existential_slashes: 2 instances" in verdict.notes

    def test_rewrite_soundness_fails_when_a_rule_never_applies(self, monkeypatch):
        def refuse(rule, *args, **options):
            raise RuleNotApplicable(f"{rule} refused")

        monkeypatch.setattr(verify, "apply_rule", refuse)

        verdict = run_suite("rewrite_soundness", bounds=SMALL, count=1)

        assert not verdict.holds
        assert verdict.reason == "rename_bound applied to 0 of 1 instances"

    def test_monotone_bounded_agreement_records_a_divergence(self):
        verdict = run_suite("monotone_bounded_agreement", bounds=SearchBounds(size=3, extra=0), count=1)

        assert verdict.holds, verdict.reason
        assert verdict.witness is not None
        assert verdict.witness.bindings == {"team": True, "bounded": False}

    def test_flat_conservativity_finds_the_exactly2_counterexample(self):
        verdict = run_suite("flat_conservativity", bounds=SearchBounds(size=3, extra=0), count=1)

        assert verdict.holds, verdict.reason
        assert verdict.witness is not None

    def test_corpus_sizes(self):
        assert SUITES["downward_closure"].corpus_size == 200
        assert SUITES["empty_team"].corpus_size == 200
        assert SUITES["locality_df"].corpus_size == 200
        assert SUITES["lift_E"].corpus_size == 100
        assert SUITES["hat_agreement"].corpus_size == 100
        assert SUITES["rewrite_soundness"].corpus_size == 50
