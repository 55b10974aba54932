from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

STRUCTURE = "domain: a b\nrel P/1: a b\nrel R/2: (a,a) (b,b)\n"
TEAM = "vars: x\nx=a\nx=b\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


@pytest.fixture
def run():
    def do_run(*args):
        out = StringIO()
        try:
            call_command("logic", *args, stdout=out)
        except SystemExit as error:
            return error.code, out.getvalue()
        return 0, out.getvalue()

    return do_run


class TestEval:
    def test_true_sentence(self, files, run):
        structure = files("m.txt", STRUCTURE)

        code, out = run("eval", "--structure", structure, "--expr", "(A x) P(x)")

        assert code == 0
        assert out.strip() == "RESULT true"

    def test_false_formula_exits_with_one(self, files, run):
        structure = files("m.txt", STRUCTURE)
        team = files("x.txt", TEAM)

        code, out = run(
            "eval", "--structure", structure, "--team", team, "--expr", "(E y/{x}) R(x,y)"
        )

        assert code == 1
        assert out.strip() == "RESULT false"

    def test_empty_team_file(self, files, run):
        structure = files("m.txt", STRUCTURE)
        team = files("x.txt", "")

        code, out = run("eval", "--structure", structure, "--team", team, "--expr", "R(x,y)")

        assert code == 0
        assert out.strip() == "RESULT true"

    def test_formula_file(self, files, run):
        structure = files("m.txt", STRUCTURE)
        team = files("x.txt", TEAM)
        formula = files("phi.txt", "(E y) R(x,y)\n")

        code, _ = run("eval", "--structure", structure, "--team", team, "--formula", formula)

        assert code == 0

    def test_tarski_rejects_slashes(self, files, run):
        structure = files("m.txt", STRUCTURE)

        with pytest.raises(CommandError) as error:
            run("eval", "--structure", structure, "--expr", "(E x/{y}) P(x)", "--tarski")

        assert error.value.returncode == 2

    def test_bounded_flag(self, files, run):
        structure = files("m.txt", STRUCTURE)

        code, out = run(
            "eval", "--structure", structure, "--expr", "(Q.exactly2 x) P(x)", "--bounded"
        )

        assert code == 0
        assert out.strip() == "RESULT true"

    def test_syntax_error(self, files, run):
        structure = files("m.txt", STRUCTURE)

        with pytest.raises(CommandError) as error:
            run("eval", "--structure", structure, "--expr", "(E x P(x)")

        assert error.value.returncode == 2

    def test_bad_structure_file_names_the_line(self, files, run):
        structure = files("m.txt", "domain: a\nrel P: a\n")

        with pytest.raises(CommandError, match=r"m\.txt:2"):
            run("eval", "--structure", structure, "--expr", "P(x)")

    def test_unknown_quantifier(self, files, run):
        structure = files("m.txt", STRUCTURE)

        with pytest.raises(CommandError, match="Q.nothing"):
            run("eval", "--structure", structure, "--expr", "(Q.nothing x) P(x)")


class TestMeaning:
    def test_functions_and_sentence_initial_meaning(self, files, run):
        structure = files("m.txt", STRUCTURE)

        code, out = run("meaning", "--structure", structure, "--expr", "(E x) P(x)")

        assert code == 0
        assert "FUNCTION 1" in out
        assert "COUNT 4" in out
        assert "SENTENCE_INITIAL {} {a} {b} {a,b}" in out


class TestEquiv:
    def test_equivalent(self, run):
        code, out = run(
            "equiv", "--expr", "(A x/{y}) P(x)", "--expr", "(A x) P(x)", "--size", "2"
        )

        assert code == 0
        assert out.startswith("EQUIV HOLDS cases=")

    def test_counterexample_block(self, run):
        code, out = run(
            "equiv", "--expr", "(E x) P(x)", "--expr", "(A x) P(x)", "--size", "2", "--extra", "0"
        )

        assert code == 1
        assert out.startswith("EQUIV FAILS")
        assert "--- structure" in out
        assert "left=true right=false" in out

    def test_entailment(self, run):
        code, out = run(
            "equiv", "--expr", "(A x) P(x)", "--expr", "(E x) P(x)", "--entails", "--size", "2"
        )

        assert code == 0
        assert out.startswith("ENTAILS HOLDS")

    def test_needs_two_formulas(self, run):
        with pytest.raises(CommandError, match="exactly two"):
            run("equiv", "--expr", "P(x)")


class TestRewrite:
    def test_weak_extract(self, run):
        code, out = run(
            "rewrite", "--expr", "((E x) P(x) | P(y))", "--rule", "weak_extract", "--side", "left"
        )

        assert code == 0
        assert out.splitlines() == [
            "RULE weak_extract AT root Z={x}",
            "FORMULA (E x) (P(x) |/{x} P(y))",
        ]

    def test_oracle_only_rule_carries_a_note(self, run):
        _, out = run(
            "rewrite",
            "--expr",
            "((E x) P(x) & P(y))",
            "--rule",
            "extract_conjunction",
            "--side",
            "left",
        )

        assert out.splitlines()[1].startswith("# ")

    def test_rule_does_not_apply(self, run):
        with pytest.raises(CommandError) as error:
            run("rewrite", "--expr", "(E x) P(x)", "--rule", "swap")

        assert error.value.returncode == 2

    def test_wrong_option_for_the_rule(self, run):
        with pytest.raises(CommandError, match="verticalize"):
            run("rewrite", "--expr", "(E x) P(x)", "--rule", "verticalize", "--side", "left")


class TestPrenexAndPrimality:
    def test_prenex(self, run):
        code, out = run("prenex", "--expr", "((E x) P(x) | (A x) P(x))")

        lines = out.splitlines()
        assert code == 0
        assert lines[-2].startswith("MODULUS {")
        assert lines[-1].startswith("FORMULA (E v2) (A v1")

    def test_primality_reduced(self, run):
        code, out = run("primality", "--expr", "(E x) (E y/{x}) R(x,y)")

        assert code == 0
        assert "PRIMALITY reduced" in out

    def test_primality_stuck(self, run):
        code, out = run("primality", "--expr", "(A x) (E y/{x}) R(x,y)")

        assert code == 1
        assert "PRIMALITY stuck" in out


class TestCheckAndQinfo:
    def test_suite(self, run):
        code, out = run("check", "logicality", "--count", "1")

        assert code == 0
        assert out.startswith("SUITE logicality HOLDS")

    def test_unknown_suite(self, run):
        with pytest.raises(CommandError):
            run("check", "everything")

    def test_mostowski_table(self, run):
        code, out = run("qinfo", "most", "--size", "2")

        assert code == 0
        assert out.splitlines() == [
            "QUANTIFIER most mostowski size=2",
            "extensional most @size2 = {a} {b} {a,b}",
            "PROPERTY monotone yes",
            "PROPERTY union_closed yes",
            "PROPERTY emptyset_free yes",
        ]

    def test_configured_quantifier(self, files, run):
        quantifiers = files("q.txt", "mostowski two = card(S) == 2\n")

        _, out = run("qinfo", "two", "--size", "2", "--quantifiers", quantifiers)

        assert "extensional two @size2 = {a,b}" in out

    def test_team_quantifier(self, run):
        code, out = run("qinfo", "hat_exists", "--size", "1")

        assert code == 0
        assert out.startswith("QUANTIFIER hat_exists team size=1")
        assert "PROPERTY team_monotone" in out
