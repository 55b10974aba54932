"""Line-oriented text formats: structures, teams, quantifier configs, counterexamples."""

import logging
import re
from collections.abc import Iterable, Iterator
from dataclasses import replace
from pathlib import Path

from .exceptions import FormatError, LogicError
from .grammar import parse_condition, parse_formula
from .quantifiers import (
    MostowskiQuantifier,
    QuantifierRegistry,
    TeamQuantifier,
    extensional,
    hat_count_functions,
    hat_exactly_b,
    hat_exactly_fn,
    hat_exactly_nm,
    hat_exists,
    hat_forall,
    lift_B,
    lift_Bprime,
    lift_E,
    most_functions,
)
from .search import Counterexample
from .structures import Assignment, Relation, Structure, Team, canonical_domain
from .syntax import Formula, to_text

logger = logging.getLogger(__name__)

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_DOMAIN = re.compile(r"domain:\s*(.*)")
_RELATION = re.compile(rf"rel\s+({_NAME})\s*/\s*(\d+)\s*:\s*(.*)")
_CONSTANT = re.compile(rf"const\s+({_NAME})\s*=\s*(\S+)")
_TUPLE = re.compile(r"\(([^()]*)\)")
_VARS = re.compile(r"vars:\s*(.*)")
_BINDING = re.compile(rf"({_NAME})=(\S+)")
_MOSTOWSKI = re.compile(rf"mostowski\s+({_NAME})\s*=\s*(.+)")
_EXTENSIONAL = re.compile(rf"extensional\s+({_NAME})\s+@size(\d+)\s*=\s*(.*)")
_TEAM = re.compile(rf"team\s+({_NAME})\s*=\s*({_NAME})(?:\(\s*([A-Za-z0-9_]*)\s*\))?")
_SUBSET = re.compile(r"\{([^{}]*)\}")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise FormatError(f"cannot read {path}: {error.strerror}", source=str(path)) from None


# --- structures ------------------------------------------------------------


def parse_structure(text: str, source: str | None = None) -> Structure:
    domain: tuple[str, ...] | None = None
    relations: dict[str, Relation] = {}
    constants: dict[str, str] = {}
    for number, line in _lines(text):
        if match := _DOMAIN.fullmatch(line):
            if domain is not None:
                raise FormatError("domain declared twice", number, source)
            domain = tuple(match.group(1).split())
        elif match := _RELATION.fullmatch(line):
            name, arity = match.group(1), int(match.group(2))
            if name in relations:
                raise FormatError(f"relation {name} declared twice", number, source)
            relations[name] = Relation(arity, frozenset(_tuples(match.group(3), arity, number, source)))
        elif match := _CONSTANT.fullmatch(line):
            constants[match.group(1)] = match.group(2)
        else:
            raise FormatError(f"unrecognised line {line!r}", number, source)
    if domain is None:
        raise FormatError("missing 'domain:' line", source=source)
    try:
        return Structure(domain, relations, constants)
    except LogicError as error:
        raise FormatError(str(error), source=source) from None


def _tuples(text: str, arity: int, number: int, source: str | None) -> Iterator[tuple[str, ...]]:
    text = text.strip()
    if "(" not in text:
        if arity != 1:
            raise FormatError(f"tuples of arity {arity} need parentheses", number, source)
        for element in text.split():
            yield (element,)
        return
    if _TUPLE.sub("", text).strip():
        raise FormatError(f"malformed tuple list {text!r}", number, source)
    for match in _TUPLE.finditer(text):
        row = tuple(part.strip() for part in match.group(1).split(",") if part.strip())
        if len(row) != arity:
            raise FormatError(f"tuple {match.group(0)} does not have arity {arity}", number, source)
        yield row


def format_structure(structure: Structure) -> str:
    lines = [f"domain: {' '.join(structure.domain)}"]
    order = {element: i for i, element in enumerate(structure.domain)}
    for name in sorted(structure.relations):
        relation = structure.relations[name]
        rows = sorted(relation.tuples, key=lambda row: [order[a] for a in row])
        if relation.arity == 1:
            body = " ".join(row[0] for row in rows)
        else:
            body = " ".join(f"({','.join(row)})" for row in rows)
        lines.append(f"rel {name}/{relation.arity}: {body}".rstrip())
    for name in sorted(structure.constants):
        lines.append(f"const {name} = {structure.constants[name]}")
    return "\n".join(lines) + "\n"


# --- teams -----------------------------------------------------------------


def parse_team(text: str, structure: Structure | None = None, source: str | None = None) -> Team:
    """A ``vars:`` header then one row per line; ``-`` is the empty assignment.

    An empty file is the empty team over no variables.
    """
    lines = list(_lines(text))
    if not lines:
        return Team.empty()
    number, header = lines[0]
    match = _VARS.fullmatch(header)
    if match is None:
        raise FormatError("the first line must be 'vars: ...'", number, source)
    variables = frozenset(match.group(1).split())
    members = set(structure.domain) if structure is not None else None
    rows = set()
    for number, line in lines[1:]:
        if line == "-":
            row = Assignment()
        else:
            bindings = {}
            for part in line.split():
                binding = _BINDING.fullmatch(part)
                if binding is None:
                    raise FormatError(f"malformed binding {part!r}", number, source)
                variable, element = binding.groups()
                if variable in bindings:
                    raise FormatError(f"{variable} bound twice", number, source)
                if members is not None and element not in members:
                    raise FormatError(f"{element} is not in the domain", number, source)
                bindings[variable] = element
            row = Assignment(bindings)
        if row.domain != variables:
            raise FormatError(f"row does not bind exactly {sorted(variables)}", number, source)
        rows.add(row)
    return Team(variables, frozenset(rows))


def format_team(team: Team) -> str:
    names = sorted(team.variables)
    lines = [f"vars: {' '.join(names)}".rstrip()]
    for row in team:
        lines.append(" ".join(f"{v}={row[v]}" for v in names) or "-")
    return "\n".join(lines) + "\n"


# --- quantifier configuration ----------------------------------------------

_TEAM_BUILDERS = {
    "liftE": lift_E,
    "liftB": lift_B,
    "liftBprime": lift_Bprime,
}
_TEAM_PARAMETRIC = {
    "hat_exactly": hat_exactly_fn,
    "hat_exactly_nm": hat_exactly_nm,
    "hat_exactly_b": hat_exactly_b,
    "count_functions": hat_count_functions,
    "count_functions_nonempty": lambda k: hat_count_functions(k, True),
}
_TEAM_CONSTANT = {
    "hat_exists": hat_exists,
    "hat_forall": hat_forall,
    "most_functions": most_functions,
}


def parse_quantifiers(
    text: str,
    base: QuantifierRegistry | None = None,
    source: str | None = None,
) -> QuantifierRegistry:
    """Extend ``base`` (the built-ins by default) with the configured entries.

    Extensional subsets name elements by position: the k-th letter is the k-th
    element of the domain. Later lines may refer to earlier ones.
    """
    registry = base or QuantifierRegistry.builtin()
    tables: dict[str, dict[int, set[tuple[bool, ...]]]] = {}
    for number, line in _lines(text):
        if match := _MOSTOWSKI.fullmatch(line):
            name, condition = match.groups()
            quantifier = MostowskiQuantifier(name, parse_condition(condition), definition=condition)
            registry = registry.extended(mostowski={name: quantifier})
        elif match := _EXTENSIONAL.fullmatch(line):
            name, size = match.group(1), int(match.group(2))
            rows = tables.setdefault(name, {}).setdefault(size, set())
            rows.update(_characteristic_rows(match.group(3), size, number, source))
            registry = registry.extended(mostowski={name: extensional(name, tables[name])})
        elif match := _TEAM.fullmatch(line):
            name, builder, argument = match.groups()
            quantifier = _team_entry(registry, builder, argument, number, source)
            registry = registry.extended(team={name: _renamed(quantifier, name)})
        else:
            raise FormatError(f"unrecognised line {line!r}", number, source)
    logger.debug(
        "quantifier registry: %d Mostowski, %d team entries",
        len(registry.mostowski_names()),
        len(registry.team_names()),
    )
    return registry


def _characteristic_rows(
    text: str, size: int, number: int, source: str | None
) -> Iterator[tuple[bool, ...]]:
    domain = canonical_domain(size)
    if _SUBSET.sub("", text).strip():
        raise FormatError(f"malformed subset list {text!r}", number, source)
    for match in _SUBSET.finditer(text):
        members = {part.strip() for part in match.group(1).split(",") if part.strip()}
        unknown = members - set(domain)
        if unknown:
            raise FormatError(
                f"{sorted(unknown)} do not name positions of a size-{size} domain", number, source
            )
        yield tuple(element in members for element in domain)


def _team_entry(
    registry: QuantifierRegistry,
    builder: str,
    argument: str | None,
    number: int,
    source: str | None,
) -> TeamQuantifier:
    try:
        if builder in _TEAM_BUILDERS and argument:
            return _TEAM_BUILDERS[builder](registry.mostowski(argument))
        if builder in _TEAM_PARAMETRIC and argument and argument.isdigit():
            return _TEAM_PARAMETRIC[builder](int(argument))
        if builder in _TEAM_CONSTANT and not argument:
            return _TEAM_CONSTANT[builder]()
        if not argument:
            return registry.team(builder)
    except LogicError as error:
        raise FormatError(str(error), number, source) from None
    raise FormatError(f"cannot build a team quantifier from {builder}({argument})", number, source)


def _renamed(quantifier: TeamQuantifier, name: str) -> TeamQuantifier:
    return replace(quantifier, name=name)


def load_quantifiers(
    path: str | Path | None, base: QuantifierRegistry | None = None
) -> QuantifierRegistry:
    if path is None:
        return base or QuantifierRegistry.builtin()
    return parse_quantifiers(read_text(path), base, str(path))


def format_mostowski(quantifier: MostowskiQuantifier, size: int) -> str:
    """The localized table as an extensional config line."""
    structure = Structure(canonical_domain(size))
    subsets = " ".join(
        "{" + ",".join(a for a in structure.domain if a in subset) + "}"
        for subset in quantifier.localize(structure)
    )
    return f"extensional {quantifier.name} @size{size} = {subsets}".rstrip()


# --- counterexample blocks -------------------------------------------------

_SECTION = re.compile(r"--- (structure|team|formula|note)")


def format_counterexample(counterexample: Counterexample) -> str:
    parts = ["--- structure\n", format_structure(counterexample.structure)]
    parts += ["--- team\n", format_team(counterexample.team)]
    for formula in counterexample.formulas:
        parts += ["--- formula\n", to_text(formula) + "\n"]
    if counterexample.bindings:
        notes = " ".join(
            f"{key}={_note_value(value)}" for key, value in counterexample.bindings.items()
        )
        parts += ["--- note\n", notes + "\n"]
    return "".join(parts)


def _note_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Formula):
        return to_text(value).replace(" ", "")
    return str(value).replace(" ", "")


def parse_counterexample(text: str, source: str | None = None) -> Counterexample:
    sections: list[tuple[str, list[str]]] = []
    for line in text.splitlines():
        if match := _SECTION.fullmatch(line.strip()):
            sections.append((match.group(1), []))
        elif sections:
            sections[-1][1].append(line)
        elif line.strip():
            raise FormatError("a counterexample block starts with '--- structure'", source=source)
    kinds = [kind for kind, _ in sections]
    if kinds[:2] != ["structure", "team"]:
        raise FormatError("expected structure and team sections first", source=source)
    structure = parse_structure("\n".join(sections[0][1]), source)
    team = parse_team("\n".join(sections[1][1]), structure, source)
    formulas: list[Formula] = []
    bindings: dict[str, str] = {}
    for kind, lines in sections[2:]:
        body = "\n".join(lines).strip()
        if kind == "formula":
            formulas.append(parse_formula(body))
        elif kind == "note":
            for part in body.split():
                key, _, value = part.partition("=")
                bindings[key] = value
    return Counterexample(structure, team, tuple(formulas), bindings)


def format_function_rows(rows: Iterable[tuple[Assignment, frozenset[str]]], domain: tuple[str, ...]) -> str:
    """One ``s -> {…}`` line per row; the empty assignment prints as ``-``."""
    order = {element: i for i, element in enumerate(domain)}
    lines = []
    for row, values in rows:
        bindings = " ".join(f"{v}={row[v]}" for v in row) or "-"
        chosen = ",".join(sorted(values, key=order.__getitem__))
        lines.append(f"  {bindings} -> {{{chosen}}}")
    return "\n".join(lines)
