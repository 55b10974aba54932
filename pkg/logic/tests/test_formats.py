import pytest

from logic.exceptions import FormatError, UnknownQuantifierError
from logic.formats import (
    format_counterexample,
    format_function_rows,
    format_mostowski,
    format_structure,
    parse_counterexample,
    parse_quantifiers,
    parse_structure,
    parse_team,
    read_text,
)
from logic.grammar import parse_formula
from logic.quantifiers import exactly, most
from logic.search import Counterexample
from logic.structures import Assignment, Team


class TestParseStructure:
    def test_relations_constants_and_comments(self):
        m = parse_structure(
            "# two elements\ndomain: a b\nrel P/1: a\nrel R/2: (a,b) (b,b)\nconst c0 = b\n"
        )

        assert m.domain == ("a", "b")
        assert m.relations["P"].tuples == {("a",)}
        assert m.relations["R"].tuples == {("a", "b"), ("b", "b")}
        assert m.constants == {"c0": "b"}

    def test_empty_relation(self):
        m = parse_structure("domain: a\nrel P/1:\n")

        assert m.relations["P"].tuples == frozenset()

    def test_unknown_line_reports_its_number(self):
        with pytest.raises(FormatError) as error:
            parse_structure("domain: a\n\nrelation P: a\n", "m.txt")

        assert error.value.line == 3
        assert str(error.value).startswith("m.txt:3:")

    def test_missing_domain(self):
        with pytest.raises(FormatError, match="domain"):
            parse_structure("rel P/1: a\n")

    def test_binary_tuples_need_parentheses(self):
        with pytest.raises(FormatError, match="parentheses"):
            parse_structure("domain: a b\nrel R/2: a b\n")

    def test_wrong_arity(self):
        with pytest.raises(FormatError, match="arity 2"):
            parse_structure("domain: a b\nrel R/2: (a,b,a)\n")

    def test_element_outside_the_domain(self):
        with pytest.raises(FormatError):
            parse_structure("domain: a b\nrel P/1: c\n")

    def test_format_reads_back(self):
        text = "domain: a b\nrel P/1: a b\nrel R/2: (a,b)\nconst c0 = a\n"

        assert format_structure(parse_structure(text)) == text


class TestParseTeam:
    def test_rows(self):
        m = parse_structure("domain: a b\n")

        team = parse_team("vars: x y\nx=a y=b\nx=b y=b\n", m)

        assert team == Team.of({"x", "y"}, [{"x": "a", "y": "b"}, {"x": "b", "y": "b"}])

    def test_dash_is_the_empty_assignment(self):
        assert parse_team("vars:\n-\n") == Team.unit()

    def test_header_only_is_the_empty_team(self):
        assert parse_team("vars: x\n") == Team.empty({"x"})

    def test_empty_file_is_the_empty_team(self):
        assert parse_team("") == Team.empty()
        assert parse_team("# nothing yet\n\n") == Team.empty()

    def test_row_with_a_missing_variable(self):
        with pytest.raises(FormatError) as error:
            parse_team("vars: x y\nx=a\n")

        assert error.value.line == 2

    def test_element_outside_the_domain(self):
        m = parse_structure("domain: a\n")

        with pytest.raises(FormatError, match="not in the domain"):
            parse_team("vars: x\nx=b\n", m)

    def test_missing_header(self):
        with pytest.raises(FormatError, match="vars"):
            parse_team("x=a\n")


class TestParseQuantifiers:
    def test_mostowski_condition(self):
        registry = parse_quantifiers("mostowski two = card(S) == 2")
        q = registry.mostowski("two")
        m = parse_structure("domain: a b c\n")

        assert [len(subset) for subset in q.localize(m)] == [2, 2, 2]

    def test_extensional_entries_accumulate_per_size(self):
        registry = parse_quantifiers(
            "extensional Qa @size2 = {a}\nextensional Qa @size2 = {a,b}\nextensional Qa @size1 = {}\n"
        )
        q = registry.mostowski("Qa")

        assert q.localize(parse_structure("domain: a b\n")) == (
            frozenset({"a"}),
            frozenset({"a", "b"}),
        )
        assert q.localize(parse_structure("domain: a\n")) == (frozenset(),)

    def test_extensional_position_out_of_range(self):
        with pytest.raises(FormatError, match="size-2"):
            parse_quantifiers("extensional Qa @size2 = {c}")

    def test_team_entry_refers_to_earlier_lines(self):
        registry = parse_quantifiers("mostowski two = card(S) == 2\nteam lifted = liftE(two)")

        assert registry.team("lifted").name == "lifted"

    def test_parametric_team_entry(self):
        registry = parse_quantifiers("team three = count_functions(3)")

        assert registry.team("three").name == "three"

    def test_lift_of_an_unknown_base(self):
        with pytest.raises(FormatError) as error:
            parse_quantifiers("team t = liftE(nothing)", source="q.txt")

        assert error.value.line == 1

    def test_base_registry_is_not_modified(self):
        parse_quantifiers("mostowski two = card(S) == 2")

        with pytest.raises(UnknownQuantifierError):
            parse_quantifiers("").mostowski("two")

    def test_unrecognised_line(self):
        with pytest.raises(FormatError, match="unrecognised"):
            parse_quantifiers("quantifier two")

    def test_format_mostowski(self):
        assert format_mostowski(exactly(2), 3) == "extensional exactly2 @size3 = {a,b} {a,c} {b,c}"

    def test_format_mostowski_reads_back(self):
        line = format_mostowski(most(), 3)
        registry = parse_quantifiers(line.replace(" most ", " copy ", 1))
        m = parse_structure("domain: a b c\n")

        assert registry.mostowski("copy").localize(m) == most().localize(m)


class TestCounterexample:
    def test_block_reads_back(self):
        m = parse_structure("domain: a b\nrel P/1: a\n")
        team = Team.of({"x"}, [{"x": "a"}, {"x": "b"}])
        found = Counterexample(
            m,
            team,
            (parse_formula("(E y/{x}) P(y)"), parse_formula("(E y) P(y)")),
            {"left": True, "right": False},
        )

        parsed = parse_counterexample(format_counterexample(found))

        assert parsed.structure == m
        assert parsed.team == team
        assert parsed.formulas == found.formulas
        assert parsed.bindings == {"left": "true", "right": "false"}

    def test_block_must_open_with_structure(self):
        with pytest.raises(FormatError):
            parse_counterexample("--- team\nvars:\n-\n")


class TestMisc:
    def test_function_rows(self):
        rows = [
            (Assignment({"x": "a"}), frozenset({"b", "a"})),
            (Assignment(), frozenset()),
        ]

        assert format_function_rows(rows, ("a", "b")) == "  x=a -> {a,b}\n  - -> {}"

    def test_read_missing_file(self, tmp_path):
        with pytest.raises(FormatError, match="cannot read"):
            read_text(tmp_path / "missing.txt")
