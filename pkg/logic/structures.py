"""Finite structures, assignments, teams and supplementing functions."""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .exceptions import StructureError, TeamError

logger = logging.getLogger(__name__)

Element = str
Variable = str


def canonical_domain(size: int) -> tuple[Element, ...]:
    """Element names a, b, c, … used for enumerated structures."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    return tuple(
        letters[i] if i < len(letters) else f"e{i}" for i in range(size)
    )


def powerset(elements: Sequence[Element]) -> list[frozenset[Element]]:
    """All subsets of ``elements``, smallest first, ties broken by position."""
    return [
        frozenset(combination)
        for size in range(len(elements) + 1)
        for combination in itertools.combinations(elements, size)
    ]


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset[tuple[Element, ...]] = frozenset()


@dataclass(frozen=True)
class Structure:
    domain: tuple[Element, ...]
    relations: Mapping[str, Relation] = field(default_factory=dict)
    constants: Mapping[str, Element] = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise StructureError("the domain of a structure must be nonempty")
        if len(set(self.domain)) != len(self.domain):
            raise StructureError("domain elements must be distinct")
        members = set(self.domain)
        for name, relation in self.relations.items():
            for row in relation.tuples:
                if len(row) != relation.arity:
                    raise StructureError(
                        f"tuple {row} of {name} does not have arity {relation.arity}"
                    )
                if not members.issuperset(row):
                    raise StructureError(f"tuple {row} of {name} leaves the domain")
        for name, element in self.constants.items():
            if element not in members:
                raise StructureError(f"constant {name} maps outside the domain")
        object.__setattr__(self, "relations", dict(self.relations))
        object.__setattr__(self, "constants", dict(self.constants))

    def __hash__(self):
        return hash(
            (
                self.domain,
                frozenset(self.relations.items()),
                frozenset(self.constants.items()),
            )
        )

    @property
    def size(self) -> int:
        return len(self.domain)

    @cached_property
    def subsets(self) -> list[frozenset[Element]]:
        return powerset(self.domain)

    def relation(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise StructureError(f"relation {name} is not interpreted") from None

    def constant(self, name: str) -> Element:
        try:
            return self.constants[name]
        except KeyError:
            raise StructureError(f"constant #{name} is not interpreted") from None

    def holds(self, name: str, arguments: tuple[Element, ...]) -> bool:
        relation = self.relation(name)
        if len(arguments) != relation.arity:
            raise StructureError(
                f"{name} has arity {relation.arity}, got {len(arguments)} arguments"
            )
        return arguments in relation.tuples


class Assignment(Mapping[Variable, Element]):
    """An immutable finite map from variables to domain elements."""

    __slots__ = ("_bindings", "_hash")

    def __init__(self, bindings: Mapping[Variable, Element] | Iterable = ()):
        self._bindings = dict(bindings)
        self._hash = None

    def __getitem__(self, variable: Variable) -> Element:
        return self._bindings[variable]

    def __iter__(self) -> Iterator[Variable]:
        return iter(sorted(self._bindings))

    def __len__(self) -> int:
        return len(self._bindings)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._bindings.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Assignment):
            return self._bindings == other._bindings
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}={self._bindings[v]}" for v in sorted(self._bindings))
        return "{" + inner + "}"

    @property
    def domain(self) -> frozenset[Variable]:
        return frozenset(self._bindings)

    def sort_key(self) -> tuple:
        return tuple(sorted(self._bindings.items()))

    def extend(self, variable: Variable, element: Element) -> "Assignment":
        """s(a/v); an existing binding for v is overwritten."""
        bindings = dict(self._bindings)
        bindings[variable] = element
        return Assignment(bindings)

    def restrict(self, variables: Iterable[Variable]) -> "Assignment":
        keep = set(variables)
        return Assignment({v: a for v, a in self._bindings.items() if v in keep})

    def drop(self, variable: Variable) -> "Assignment":
        return Assignment({v: a for v, a in self._bindings.items() if v != variable})

    def rename(self, old: Variable, new: Variable) -> "Assignment":
        return Assignment(
            {(new if v == old else v): a for v, a in self._bindings.items()}
        )


EMPTY_ASSIGNMENT = Assignment()


@dataclass(frozen=True)
class Team:
    variables: frozenset[Variable]
    rows: frozenset[Assignment] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "rows", frozenset(self.rows))
        for row in self.rows:
            if row.domain != self.variables:
                raise TeamError(
                    f"row {row!r} does not have domain {sorted(self.variables)}"
                )

    @classmethod
    def of(cls, variables: Iterable[Variable], rows: Iterable[Mapping]) -> "Team":
        return cls(frozenset(variables), frozenset(Assignment(row) for row in rows))

    @classmethod
    def empty(cls, variables: Iterable[Variable] = ()) -> "Team":
        return cls(frozenset(variables))

    @classmethod
    def unit(cls) -> "Team":
        """The team {∅} holding only the empty assignment."""
        return cls(frozenset(), frozenset({EMPTY_ASSIGNMENT}))

    @cached_property
    def ordered(self) -> tuple[Assignment, ...]:
        return tuple(sorted(self.rows, key=Assignment.sort_key))

    def __iter__(self) -> Iterator[Assignment]:
        return iter(self.ordered)

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, row) -> bool:
        return row in self.rows

    def subteam(self, rows: Iterable[Assignment]) -> "Team":
        return Team(self.variables, frozenset(rows))

    def __repr__(self) -> str:
        return f"Team({sorted(self.variables)}, {list(self.ordered)})"


@dataclass(frozen=True)
class SupplementFunction:
    """A map from the rows of ``source`` to subsets of the domain."""

    source: Team
    graph: frozenset[tuple[Assignment, frozenset[Element]]]

    @classmethod
    def from_mapping(
        cls, source: Team, choices: Mapping[Assignment, Iterable[Element]]
    ) -> "SupplementFunction":
        if set(choices) != set(source.rows):
            raise TeamError("a supplementing function must be total on its team")
        return cls(
            source,
            frozenset((row, frozenset(values)) for row, values in choices.items()),
        )

    @cached_property
    def table(self) -> dict[Assignment, frozenset[Element]]:
        return dict(self.graph)

    def __call__(self, row: Assignment) -> frozenset[Element]:
        try:
            return self.table[row]
        except KeyError:
            raise TeamError(f"{row!r} is not a row of the source team") from None

    def items(self) -> list[tuple[Assignment, frozenset[Element]]]:
        return [(row, self.table[row]) for row in self.source]

    def is_empty_function(self) -> bool:
        return not self.source.rows

    def dominates(self, other: "SupplementFunction") -> bool:
        """F ≥ G: same source and F(s) ⊇ G(s) for every row."""
        return self.source == other.source and all(
            values >= other(row) for row, values in self.graph
        )

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{row!r}->{{{','.join(sorted(values))}}}" for row, values in self.items()
        )
        return f"<{parts}>"


def duplicate(team: Team, structure: Structure, variable: Variable) -> Team:
    """X[M/v]."""
    return Team(
        team.variables | {variable},
        frozenset(
            row.extend(variable, element)
            for row in team.rows
            for element in structure.domain
        ),
    )


def supplement(team: Team, function: SupplementFunction, variable: Variable) -> Team:
    """X[F/v]; rows mapped to the empty set contribute nothing."""
    if function.source != team:
        raise TeamError("the supplementing function is not defined on this team")
    return Team(
        team.variables | {variable},
        frozenset(
            row.extend(variable, element)
            for row, values in function.graph
            for element in values
        ),
    )


def v_equivalent(s: Assignment, t: Assignment, variables: Iterable[Variable]) -> bool:
    if s.domain != t.domain:
        raise TeamError("V-equivalence compares assignments with the same domain")
    ignored = set(variables)
    return all(s[v] == t[v] for v in s.domain if v not in ignored)


def uniform_classes(
    team: Team, variables: Iterable[Variable]
) -> tuple[tuple[Assignment, ...], ...]:
    """The ∼_V classes of ``team``, each in row order."""
    kept = team.variables - set(variables)
    groups: dict[Assignment, list[Assignment]] = {}
    for row in team:
        groups.setdefault(row.restrict(kept), []).append(row)
    return tuple(tuple(group) for group in groups.values())


def is_uniform(function: SupplementFunction, variables: Iterable[Variable]) -> bool:
    for group in uniform_classes(function.source, variables):
        if len({function(row) for row in group}) > 1:
            return False
    return True


def enumerate_uniform_functions(
    team: Team,
    variables: Iterable[Variable],
    candidates: Sequence[frozenset[Element]],
) -> Iterator[SupplementFunction]:
    """Every V-uniform function from ``team`` into ``candidates``, one value per class."""
    classes = uniform_classes(team, variables)
    for choice in itertools.product(candidates, repeat=len(classes)):
        yield SupplementFunction(
            team,
            frozenset(
                (row, values)
                for group, values in zip(classes, choice)
                for row in group
            ),
        )


def uniform_subset(
    subset: Iterable[Assignment], team: Team, variables: Iterable[Variable]
) -> bool:
    rows = frozenset(subset)
    if not rows <= team.rows:
        raise TeamError("the candidate subset is not contained in the team")
    for group in uniform_classes(team, variables):
        inside = {row in rows for row in group}
        if len(inside) > 1:
            return False
    return True


def restrict(team: Team, variables: Iterable[Variable]) -> Team:
    """X↾U."""
    kept = team.variables & frozenset(variables)
    return Team(kept, frozenset(row.restrict(kept) for row in team.rows))


def drop(team: Team, variable: Variable) -> Team:
    """X₋ᵥ."""
    return restrict(team, team.variables - {variable})


def relation_of(team: Team, variables: Sequence[Variable]) -> frozenset[tuple]:
    """X(v₁,…,vₙ)."""
    missing = set(variables) - team.variables
    if missing:
        raise TeamError(f"variables {sorted(missing)} are not in the team domain")
    return frozenset(tuple(row[v] for v in variables) for row in team.rows)


def rename(team: Team, old: Variable, new: Variable) -> Team:
    """X[z/x]."""
    if old not in team.variables:
        raise TeamError(f"{old} is not in the team domain")
    if new in team.variables and new != old:
        raise TeamError(f"{new} is already in the team domain")
    variables = (team.variables - {old}) | {new}
    return Team(variables, frozenset(row.rename(old, new) for row in team.rows))


def v_expansions(team: Team, variable: Variable, structure: Structure) -> Iterator[Team]:
    """Every team Y over dom(X) ∪ {v} with Y↾dom(X) = X."""
    if variable in team.variables:
        raise TeamError(f"{variable} already belongs to the team domain")
    nonempty = structure.subsets[1:]
    rows = team.ordered
    for choice in itertools.product(nonempty, repeat=len(rows)):
        yield Team(
            team.variables | {variable},
            frozenset(
                row.extend(variable, element)
                for row, values in zip(rows, choice)
                for element in values
            ),
        )
