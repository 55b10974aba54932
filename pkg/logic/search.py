"""Search spaces for the brute-force oracles: bounds, verdicts and enumeration."""

import itertools
import logging
import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum

from .exceptions import GuardExceeded
from .structures import (
    Assignment,
    Relation,
    Structure,
    Team,
    canonical_domain,
    powerset,
)
from .syntax import Formula, constants, fresh_variables, relation_arities, variables

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBounds:
    size: int = 3
    extra: int = 1
    max_rows: int = 8
    samples: int = 64
    seed: int = 0
    max_structures: int = 512

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("the domain size bound must be at least 1")
        if self.extra < 0:
            raise ValueError("the number of extra variables cannot be negative")


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    @classmethod
    def of(cls, *formulas: Formula) -> "Signature":
        arities: dict[str, int] = {}
        names: set[str] = set()
        for formula in formulas:
            arities.update(relation_arities(formula))
            names |= constants(formula)
        return cls(tuple(sorted(arities.items())), tuple(sorted(names)))

    def merge(self, other: "Signature") -> "Signature":
        return Signature(
            tuple(sorted(dict(self.relations + other.relations).items())),
            tuple(sorted(set(self.constants) | set(other.constants))),
        )


class Status(StrEnum):
    HOLDS = "holds"
    FAILS = "fails"


@dataclass(frozen=True)
class Counterexample:
    structure: Structure
    team: Team
    formulas: tuple[Formula, ...]
    bindings: Mapping[str, object] = field(default_factory=dict)


@dataclass
class Verdict:
    name: str
    status: Status = Status.HOLDS
    cases: int = 0
    counterexample: Counterexample | None = None
    witness: Counterexample | None = None
    notes: list[str] = field(default_factory=list)
    reason: str = ""

    def __post_init__(self):
        if self.status == Status.FAILS and self.counterexample is None and not self.reason:
            raise ValueError("a failing verdict carries its counterexample or a reason")

    @property
    def holds(self) -> bool:
        return self.status == Status.HOLDS

    def __bool__(self) -> bool:
        return self.holds

    def fail(self, counterexample: Counterexample | None = None, reason: str = "") -> "Verdict":
        if counterexample is None and not reason:
            raise ValueError("a failing verdict carries its counterexample or a reason")
        self.status = Status.FAILS
        self.counterexample = counterexample
        self.reason = reason
        logger.info("%s fails after %d cases", self.name, self.cases)
        return self

    def absorb(self, other: "Verdict") -> "Verdict":
        """Conjunction of two verdicts, keeping the first counterexample."""
        self.cases += other.cases
        self.notes.extend(other.notes)
        if self.witness is None:
            self.witness = other.witness
        if other.status == Status.FAILS and self.status == Status.HOLDS:
            self.fail(other.counterexample, other.reason)
        return self


def structure_count(signature: Signature, n: int) -> int:
    count = n ** len(signature.constants)
    for _, arity in signature.relations:
        count *= 2 ** (n**arity)
    return count


def enumerate_structures(
    signature: Signature, size: int, max_structures: int = 1 << 16
) -> Iterator[Structure]:
    """Every interpretation of ``signature`` over domains of sizes 1..size."""
    for n in range(1, size + 1):
        count = structure_count(signature, n)
        if count > max_structures:
            raise GuardExceeded(
                f"{count} structures of size {n} exceed the guard of {max_structures}"
            )
        yield from _structures_of_size(signature, n)


def _structures_of_size(signature: Signature, n: int) -> Iterator[Structure]:
    domain = canonical_domain(n)
    spaces = [
        powerset(list(itertools.product(domain, repeat=arity)))
        for _, arity in signature.relations
    ]
    for tables in itertools.product(*spaces):
        relations = {
            name: Relation(arity, frozenset(table))
            for (name, arity), table in zip(signature.relations, tables)
        }
        for values in itertools.product(domain, repeat=len(signature.constants)):
            yield Structure(domain, relations, dict(zip(signature.constants, values)))


def random_structure(signature: Signature, n: int, rng: random.Random) -> Structure:
    domain = canonical_domain(n)
    relations = {
        name: Relation(
            arity,
            frozenset(
                row
                for row in itertools.product(domain, repeat=arity)
                if rng.random() < 0.5
            ),
        )
        for name, arity in signature.relations
    }
    constants = {name: rng.choice(domain) for name in signature.constants}
    return Structure(domain, relations, constants)


def structures_within(
    signature: Signature,
    bounds: SearchBounds,
    rng: random.Random,
    notes: list[str] | None = None,
) -> Iterator[Structure]:
    """Exhaustive per domain size while the count fits ``max_structures``, sampled beyond."""
    for n in range(1, bounds.size + 1):
        if structure_count(signature, n) <= bounds.max_structures:
            yield from _structures_of_size(signature, n)
            continue
        if notes is not None:
            note = f"sampled {bounds.samples} structures of size {n}"
            if note not in notes:
                notes.append(note)
        for _ in range(bounds.samples):
            yield random_structure(signature, n, rng)


def assignment_space(structure: Structure, variables: Iterable[str]) -> list[Assignment]:
    names = sorted(variables)
    return [
        Assignment(zip(names, values))
        for values in itertools.product(structure.domain, repeat=len(names))
    ]


def enumerate_teams(
    structure: Structure, variables: Iterable[str], max_rows: int | None = None
) -> Iterator[Team]:
    """All 2^(|M|^|U|) teams over ``variables``, smallest first."""
    variables = frozenset(variables)
    space = assignment_space(structure, variables)
    if max_rows is not None and len(space) > max_rows:
        raise GuardExceeded(
            f"{len(space)} assignments over {sorted(variables)} exceed the guard of {max_rows}"
        )
    for size in range(len(space) + 1):
        for rows in itertools.combinations(space, size):
            yield Team(variables, frozenset(rows))


def sample_teams(
    structure: Structure,
    variables: Iterable[str],
    count: int,
    rng: random.Random,
    max_rows: int,
) -> Iterator[Team]:
    variables = frozenset(variables)
    space = assignment_space(structure, variables)
    yield Team(variables)
    for _ in range(count - 1):
        size = rng.randint(1, min(max_rows, len(space)))
        yield Team(variables, frozenset(rng.sample(space, size)))


def teams_within(
    structure: Structure,
    variables: Iterable[str],
    bounds: SearchBounds,
    rng: random.Random,
    notes: list[str] | None = None,
) -> Iterator[Team]:
    """Exhaustive teams when the assignment space fits the row guard, a sample otherwise."""
    variables = frozenset(variables)
    if structure.size ** len(variables) <= bounds.max_rows:
        yield from enumerate_teams(structure, variables)
        return
    if notes is not None:
        note = f"sampled {bounds.samples} teams over {sorted(variables)} at size {structure.size}"
        if note not in notes:
            notes.append(note)
    yield from sample_teams(structure, variables, bounds.samples, rng, bounds.max_rows)


def team_domains(
    base: Iterable[str], extra: int, avoid: Iterable[str] = ()
) -> list[frozenset[str]]:
    """``base`` plus every subset of at most ``extra`` fresh variables."""
    base = frozenset(base)
    fresh = list(itertools.islice(fresh_variables(set(base) | set(avoid), "w"), extra))
    return [
        base | frozenset(chosen)
        for size in range(extra + 1)
        for chosen in itertools.combinations(fresh, size)
    ]


def formula_variables(*formulas: Formula) -> frozenset[str]:
    found: frozenset[str] = frozenset()
    for formula in formulas:
        found |= variables(formula)
    return found
