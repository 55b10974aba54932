"""Mostowski quantifiers, team quantifiers, lifts and logicality checks."""

import itertools
import logging
import random
import re
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .exceptions import GuardExceeded, UnknownQuantifierError
from .structures import (
    Assignment,
    Element,
    Structure,
    SupplementFunction,
    Team,
    canonical_domain,
    enumerate_uniform_functions,
)
from .syntax import Formula, QuantKind, quantifier_nodes

logger = logging.getLogger(__name__)

MAX_PROPERTY_DOMAIN = 6
MAX_EXHAUSTIVE_FUNCTIONS = 16
DEFAULT_FAMILY_SAMPLES = 512

Family = frozenset[SupplementFunction]


@dataclass(frozen=True, eq=False)
class MostowskiQuantifier:
    """A type (1) quantifier, given by a cardinality condition or a table.

    Extensional tables map a domain size to the accepted subsets, each written
    as a characteristic tuple over the ordered domain.
    """

    name: str
    condition: Callable[[int, int], bool] | None = None
    table: Mapping[int, frozenset[tuple[bool, ...]]] | None = None
    definition: str = ""

    def __post_init__(self):
        if (self.condition is None) == (self.table is None):
            raise ValueError("a quantifier is either intensional or extensional")
        for size, rows in (self.table or {}).items():
            if any(len(row) != size for row in rows):
                raise ValueError(f"table of {self.name} has rows of the wrong length")

    @property
    def intensional(self) -> bool:
        return self.condition is not None

    def accepts(self, subset: frozenset[Element], structure: Structure) -> bool:
        if self.condition is not None:
            return bool(self.condition(len(subset), structure.size))
        row = tuple(element in subset for element in structure.domain)
        return row in self.table.get(structure.size, frozenset())

    def localize(self, structure: Structure) -> tuple[frozenset[Element], ...]:
        return localize(self, structure)


@lru_cache(maxsize=4096)
def localize(
    quantifier: MostowskiQuantifier, structure: Structure
) -> tuple[frozenset[Element], ...]:
    """Q^M in canonical subset order."""
    return tuple(s for s in structure.subsets if quantifier.accepts(s, structure))


def exists_quantifier() -> MostowskiQuantifier:
    return MostowskiQuantifier("exists", lambda s, m: s >= 1, definition="card(S) >= 1")


def forall_quantifier() -> MostowskiQuantifier:
    return MostowskiQuantifier("forall", lambda s, m: s == m, definition="card(S) == card(M)")


def exactly(k: int) -> MostowskiQuantifier:
    return MostowskiQuantifier(f"exactly{k}", lambda s, m: s == k, definition=f"card(S) == {k}")


def at_least(k: int) -> MostowskiQuantifier:
    return MostowskiQuantifier(f"atleast{k}", lambda s, m: s >= k, definition=f"card(S) >= {k}")


def at_most(k: int) -> MostowskiQuantifier:
    return MostowskiQuantifier(f"atmost{k}", lambda s, m: s <= k, definition=f"card(S) <= {k}")


def most() -> MostowskiQuantifier:
    return MostowskiQuantifier("most", lambda s, m: 2 * s >= m, definition="2*card(S) >= card(M)")


def trivial() -> MostowskiQuantifier:
    return MostowskiQuantifier("trivial", lambda s, m: True, definition="card(S) >= 0")


def extensional(
    name: str, table: Mapping[int, Iterable[Iterable[bool]]]
) -> MostowskiQuantifier:
    frozen = {size: frozenset(tuple(map(bool, row)) for row in rows) for size, rows in table.items()}
    return MostowskiQuantifier(name, table=frozen, definition="extensional")


def _probe(size: int) -> Structure:
    if size > MAX_PROPERTY_DOMAIN:
        raise GuardExceeded(
            f"domain size {size} exceeds the property-check guard {MAX_PROPERTY_DOMAIN}"
        )
    return Structure(canonical_domain(size))


def _domain_of(structure_or_size: Structure | int) -> Structure:
    if isinstance(structure_or_size, Structure):
        if structure_or_size.size > MAX_PROPERTY_DOMAIN:
            raise GuardExceeded(
                f"domain size {structure_or_size.size} exceeds the property-check guard"
            )
        return structure_or_size
    return _probe(structure_or_size)


def is_monotone_on(quantifier: MostowskiQuantifier, structure: Structure | int) -> bool:
    structure = _domain_of(structure)
    accepted = set(localize(quantifier, structure))
    return all(
        subset | {element} in accepted
        for subset in accepted
        for element in structure.domain
    )


def is_union_closed_on(quantifier: MostowskiQuantifier, structure: Structure | int) -> bool:
    structure = _domain_of(structure)
    accepted = set(localize(quantifier, structure))
    return all(a | b in accepted for a in accepted for b in accepted)


def is_emptyset_free_on(quantifier: MostowskiQuantifier, structure: Structure | int) -> bool:
    structure = _domain_of(structure)
    return not quantifier.accepts(frozenset(), structure)


def is_emptyset_free_up_to(quantifier: MostowskiQuantifier, size: int) -> bool:
    return all(is_emptyset_free_on(quantifier, n) for n in range(1, size + 1))


def is_nonvoid_up_to(quantifier: MostowskiQuantifier, size: int) -> bool:
    """Q^M ≠ ∅ on every domain of size 1..size."""
    return all(localize(quantifier, _probe(n)) for n in range(1, size + 1))


# --- team quantifiers ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TeamQuantifier:
    name: str
    predicate: Callable[[Structure, Team, Family], bool]
    parameters: Mapping[str, object] = field(default_factory=dict)
    description: str = ""

    def accepts(
        self,
        structure: Structure,
        team: Team,
        family: Iterable[SupplementFunction],
        *,
        empty_function_ban: bool = False,
    ) -> bool:
        family = frozenset(family)
        if empty_function_ban:
            family = frozenset(f for f in family if not f.is_empty_function())
        return bool(self.predicate(structure, team, family))


def _all_values_in(function: SupplementFunction, accepted: set) -> bool:
    return all(values in accepted for _, values in function.graph)


def lift_E(quantifier: MostowskiQuantifier) -> TeamQuantifier:
    """Ê(Q): some member of the family takes all its values in Q^M."""

    def predicate(structure, team, family):
        accepted = set(localize(quantifier, structure))
        return any(_all_values_in(f, accepted) for f in family)

    return TeamQuantifier(
        f"liftE_{quantifier.name}", predicate, {"base": quantifier.name}, "existential lift"
    )


def lift_B(quantifier: MostowskiQuantifier) -> TeamQuantifier:
    """B̂(Q): a member in Q^M all of whose larger members are in Q^M too."""

    def predicate(structure, team, family):
        accepted = set(localize(quantifier, structure))
        good = {f for f in family if _all_values_in(f, accepted)}
        return any(
            all(g in good for g in family if g.dominates(f)) for f in good
        )

    return TeamQuantifier(
        f"liftB_{quantifier.name}", predicate, {"base": quantifier.name}, "bounded lift"
    )


def lift_Bprime(quantifier: MostowskiQuantifier) -> TeamQuantifier:
    """B̂′(Q): a nonempty family whose members all take values in Q^M."""

    def predicate(structure, team, family):
        accepted = set(localize(quantifier, structure))
        return bool(family) and all(_all_values_in(f, accepted) for f in family)

    return TeamQuantifier(
        f"liftBprime_{quantifier.name}",
        predicate,
        {"base": quantifier.name},
        "globally bounded lift",
    )


def hat_exists() -> TeamQuantifier:
    def predicate(structure, team, family):
        return any(all(values for _, values in f.graph) for f in family)

    return TeamQuantifier("hat_exists", predicate, description="team existential")


def hat_forall() -> TeamQuantifier:
    def predicate(structure, team, family):
        full = frozenset(structure.domain)
        return any(all(values == full for _, values in f.graph) for f in family)

    return TeamQuantifier("hat_forall", predicate, description="team universal")


def hat_exactly_fn(k: int) -> TeamQuantifier:
    return replace(lift_E(exactly(k)), name=f"hat_exactly{k}", parameters={"k": k})


def hat_exactly_nm(k: int) -> TeamQuantifier:
    return replace(lift_Bprime(exactly(k)), name=f"hat_exactly_nm{k}", parameters={"k": k})


def hat_exactly_b(k: int) -> TeamQuantifier:
    return replace(lift_B(exactly(k)), name=f"hat_exactly_b{k}", parameters={"k": k})


def hat_count_functions(k: int, values_nonempty: bool = False) -> TeamQuantifier:
    """Families of exactly k functions, none of them the empty function.

    With ``values_nonempty`` the side condition instead asks every value of
    every member to be nonempty.
    """

    def nonempty(function: SupplementFunction) -> bool:
        if values_nonempty:
            return all(values for _, values in function.graph)
        return not function.is_empty_function()

    def predicate(structure, team, family):
        return len(family) == k and all(nonempty(f) for f in family)

    suffix = "_nonempty" if values_nonempty else ""
    return TeamQuantifier(
        f"count_functions{suffix}{k}",
        predicate,
        {"k": k, "values_nonempty": values_nonempty},
        "purely quantitative",
    )


def most_functions() -> TeamQuantifier:
    """At least half of all functions X → M, counted as singleton-valued members."""

    def predicate(structure, team, family):
        singletons = sum(
            1 for f in family if all(len(values) == 1 for _, values in f.graph)
        )
        return 2 * singletons >= structure.size ** len(team)

    return TeamQuantifier("most_functions", predicate, description="most functions")


# --- logicality ------------------------------------------------------------


@dataclass(frozen=True)
class PropertyCheck:
    holds: bool
    exhaustive: bool
    families_checked: int
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


class FamilySpace:
    """All functions X → ℘(M) indexed by bit position, with memoized membership."""

    def __init__(self, quantifier: TeamQuantifier, structure: Structure, team: Team):
        self.quantifier = quantifier
        self.structure = structure
        self.team = team
        candidates = 2 ** structure.size
        if len(team) and candidates ** len(team) > 2**20:
            raise GuardExceeded("the function space is too large to index")
        self.functions = list(enumerate_uniform_functions(team, (), structure.subsets))
        self.index = {f: i for i, f in enumerate(self.functions)}
        self._membership: dict[int, bool] = {}

    @property
    def size(self) -> int:
        return len(self.functions)

    @property
    def exhaustive(self) -> bool:
        return self.size <= MAX_EXHAUSTIVE_FUNCTIONS

    def family(self, mask: int) -> Family:
        return frozenset(f for i, f in enumerate(self.functions) if mask >> i & 1)

    def accepts(self, mask: int) -> bool:
        if mask not in self._membership:
            self._membership[mask] = self.quantifier.accepts(
                self.structure, self.team, self.family(mask)
            )
        return self._membership[mask]

    def masks(self, samples: int, seed: int) -> tuple[list[int], bool]:
        if self.exhaustive:
            return list(range(2**self.size)), True
        rng = random.Random(seed)
        logger.info(
            "%s: sampling %d of 2^%d families", self.quantifier.name, samples, self.size
        )
        return [rng.getrandbits(self.size) for _ in range(samples)], False

    def mask_of(self, family: Iterable[SupplementFunction]) -> int:
        mask = 0
        for f in family:
            mask |= 1 << self.index[f]
        return mask


def team_monotone_on(
    quantifier: TeamQuantifier,
    structure: Structure,
    team: Team,
    samples: int = DEFAULT_FAMILY_SAMPLES,
    seed: int = 0,
) -> PropertyCheck:
    """Upward closure of Q̂^{M,X}, checked through one-function extensions."""
    space = FamilySpace(quantifier, structure, team)
    masks, exhaustive = space.masks(samples, seed)
    for mask in masks:
        if not space.accepts(mask):
            continue
        for bit in range(space.size):
            larger = mask | 1 << bit
            if larger != mask and not space.accepts(larger):
                return PropertyCheck(
                    False, exhaustive, len(masks), (space.family(mask), space.family(larger))
                )
    return PropertyCheck(True, exhaustive, len(masks))


def image_of_row(row, permutation: Mapping[Element, Element]):
    """g∘s."""
    return Assignment({v: permutation[row[v]] for v in row})


def image_of_team(team: Team, permutation: Mapping[Element, Element]) -> Team:
    """g′(X)."""
    return team.subteam(image_of_row(row, permutation) for row in team.rows)


def image_of_function(
    function: SupplementFunction, permutation: Mapping[Element, Element]
) -> SupplementFunction:
    """The function g∘s ↦ g[F(s)] on g′(X)."""
    return SupplementFunction(
        image_of_team(function.source, permutation),
        frozenset(
            (image_of_row(row, permutation), frozenset(permutation[a] for a in values))
            for row, values in function.graph
        ),
    )


def image_of_structure(structure: Structure, permutation: Mapping[Element, Element]) -> Structure:
    relations = {
        name: replace(
            relation,
            tuples=frozenset(tuple(permutation[a] for a in row) for row in relation.tuples),
        )
        for name, relation in structure.relations.items()
    }
    constants = {name: permutation[a] for name, a in structure.constants.items()}
    return Structure(structure.domain, relations, constants)


def permutations_of(structure: Structure) -> Iterable[dict[Element, Element]]:
    for image in itertools.permutations(structure.domain):
        yield dict(zip(structure.domain, image))


def permutation_invariant_on(
    quantifier: TeamQuantifier,
    structure: Structure,
    team: Team,
    samples: int = DEFAULT_FAMILY_SAMPLES,
    seed: int = 0,
) -> PropertyCheck:
    """𝔉 ∈ Q̂^{M,X} ⟺ g″(𝔉) ∈ Q̂^{M,X} for every permutation g with g′(X) = X."""
    space = FamilySpace(quantifier, structure, team)
    masks, exhaustive = space.masks(samples, seed)
    for permutation in permutations_of(structure):
        if image_of_team(team, permutation) != team:
            continue
        images = [space.index[image_of_function(f, permutation)] for f in space.functions]
        for mask in masks:
            image = 0
            for i in range(space.size):
                if mask >> i & 1:
                    image |= 1 << images[i]
            if space.accepts(mask) != space.accepts(image):
                return PropertyCheck(False, exhaustive, len(masks), (permutation, space.family(mask)))
    return PropertyCheck(True, exhaustive, len(masks))


def isomorphism_invariant_on(
    quantifier: TeamQuantifier,
    structure: Structure,
    team: Team,
    samples: int = DEFAULT_FAMILY_SAMPLES,
    seed: int = 0,
) -> PropertyCheck:
    """𝔉 ∈ Q̂^{M,X} ⟺ g″(𝔉) ∈ Q̂^{g(M),g′(X)} for every permutation g of dom(M)."""
    space = FamilySpace(quantifier, structure, team)
    masks, exhaustive = space.masks(samples, seed)
    for permutation in permutations_of(structure):
        image_structure = image_of_structure(structure, permutation)
        image_team = image_of_team(team, permutation)
        for mask in masks:
            family = space.family(mask)
            image = frozenset(image_of_function(f, permutation) for f in family)
            if space.accepts(mask) != quantifier.accepts(image_structure, image_team, image):
                return PropertyCheck(False, exhaustive, len(masks), (permutation, family))
    return PropertyCheck(True, exhaustive, len(masks))


def cardinality_condition_on(
    quantifier: TeamQuantifier,
    structure: Structure,
    team: Team,
    samples: int = DEFAULT_FAMILY_SAMPLES,
    seed: int = 0,
) -> PropertyCheck:
    """Membership depends only on card(𝔉) (and so on the complement's cardinality)."""
    space = FamilySpace(quantifier, structure, team)
    masks, exhaustive = space.masks(samples, seed)
    seen: dict[int, tuple[bool, int]] = {}
    for mask in masks:
        cardinality = mask.bit_count()
        verdict = space.accepts(mask)
        if cardinality not in seen:
            seen[cardinality] = (verdict, mask)
            continue
        first_verdict, first_mask = seen[cardinality]
        if first_verdict != verdict:
            member, other = (first_mask, mask) if first_verdict else (mask, first_mask)
            return PropertyCheck(
                False, exhaustive, len(masks), (space.family(member), space.family(other))
            )
    return PropertyCheck(True, exhaustive, len(masks))


def quality(space: FamilySpace, masks: Iterable[int]) -> int:
    """q(Q̂,M,X) = ⋃ Q̂^{M,X}, as a mask."""
    union = 0
    for mask in masks:
        if space.accepts(mask):
            union |= mask
    return union


def quality_condition_on(
    quantifier: TeamQuantifier,
    structure: Structure,
    team: Team,
    samples: int = DEFAULT_FAMILY_SAMPLES,
    seed: int = 0,
) -> PropertyCheck:
    """The cardinality condition restricted to subfamilies of q(Q̂,M,X)."""
    space = FamilySpace(quantifier, structure, team)
    masks, exhaustive = space.masks(samples, seed)
    q = quality(space, masks)
    members = {m.bit_count(): m for m in masks if space.accepts(m)}
    if exhaustive:
        candidates = list(submasks(q))
    else:
        rng = random.Random(seed)
        candidates = [rng.getrandbits(space.size) & q for _ in range(samples)]
    for candidate in candidates:
        member = members.get(candidate.bit_count())
        if member is not None and not space.accepts(candidate):
            return PropertyCheck(
                False, exhaustive, len(candidates), (space.family(member), space.family(candidate))
            )
    return PropertyCheck(True, exhaustive, len(candidates))


def submasks(mask: int):
    submask = mask
    while True:
        yield submask
        if submask == 0:
            return
        submask = (submask - 1) & mask


# --- registry --------------------------------------------------------------

_MOSTOWSKI_PATTERNS: list[tuple[re.Pattern, Callable[[int], MostowskiQuantifier]]] = [
    (re.compile(r"exactly(\d+)"), exactly),
    (re.compile(r"atleast(\d+)"), at_least),
    (re.compile(r"atmost(\d+)"), at_most),
]

_TEAM_PATTERNS: list[tuple[re.Pattern, Callable[[int], TeamQuantifier]]] = [
    (re.compile(r"hat_exactly(\d+)"), hat_exactly_fn),
    (re.compile(r"hat_exactly_nm(\d+)"), hat_exactly_nm),
    (re.compile(r"hat_exactly_b(\d+)"), hat_exactly_b),
    (re.compile(r"count_functions(\d+)"), hat_count_functions),
    (re.compile(r"count_functions_nonempty(\d+)"), lambda k: hat_count_functions(k, True)),
]

_LIFT_PATTERN = re.compile(r"lift(E|B|Bprime)_([A-Za-z_][A-Za-z0-9_]*)")
_LIFTS = {"E": lift_E, "B": lift_B, "Bprime": lift_Bprime}


class QuantifierRegistry:
    """Named quantifiers: built-ins, parametric families and configured entries.

    A registry is not modified after construction; ``extended`` returns a new one.
    Parametric names (``exactly3``, ``liftE_most`` …) are resolved on demand.
    """

    def __init__(
        self,
        mostowski: Mapping[str, MostowskiQuantifier] | None = None,
        team: Mapping[str, TeamQuantifier] | None = None,
    ):
        self._mostowski = dict(mostowski or {})
        self._team = dict(team or {})
        self._resolved_mostowski: dict[str, MostowskiQuantifier] = {}
        self._resolved_team: dict[str, TeamQuantifier] = {}

    @classmethod
    def builtin(cls) -> "QuantifierRegistry":
        mostowski_builtins = [exists_quantifier(), forall_quantifier(), most(), trivial()]
        team_builtins = [hat_exists(), hat_forall(), most_functions()]
        return cls(
            {q.name: q for q in mostowski_builtins},
            {q.name: q for q in team_builtins},
        )

    def extended(
        self,
        mostowski: Mapping[str, MostowskiQuantifier] | None = None,
        team: Mapping[str, TeamQuantifier] | None = None,
    ) -> "QuantifierRegistry":
        return QuantifierRegistry(
            {**self._mostowski, **(mostowski or {})}, {**self._team, **(team or {})}
        )

    def mostowski_names(self) -> list[str]:
        return sorted(self._mostowski)

    def team_names(self) -> list[str]:
        return sorted(self._team)

    def mostowski(self, name: str) -> MostowskiQuantifier:
        if name in self._mostowski:
            return self._mostowski[name]
        if name not in self._resolved_mostowski:
            for pattern, build in _MOSTOWSKI_PATTERNS:
                match = pattern.fullmatch(name)
                if match:
                    self._resolved_mostowski[name] = build(int(match.group(1)))
                    break
            else:
                raise UnknownQuantifierError(f"unknown Mostowski quantifier Q.{name}")
        return self._resolved_mostowski[name]

    def team(self, name: str) -> TeamQuantifier:
        if name in self._team:
            return self._team[name]
        if name not in self._resolved_team:
            self._resolved_team[name] = self._resolve_team(name)
        return self._resolved_team[name]

    def _resolve_team(self, name: str) -> TeamQuantifier:
        match = _LIFT_PATTERN.fullmatch(name)
        if match:
            try:
                base = self.mostowski(match.group(2))
            except UnknownQuantifierError:
                raise UnknownQuantifierError(f"unknown team quantifier TQ.{name}") from None
            return replace(_LIFTS[match.group(1)](base), name=name)
        for pattern, build in _TEAM_PATTERNS:
            match = pattern.fullmatch(name)
            if match:
                return build(int(match.group(1)))
        raise UnknownQuantifierError(f"unknown team quantifier TQ.{name}")

    def link(self, formula: Formula) -> Formula:
        """Resolve every quantifier name in ``formula``; unknown names are errors."""
        for _, node in quantifier_nodes(formula):
            if node.kind == QuantKind.MOSTOWSKI:
                self.mostowski(node.name)
            elif node.kind == QuantKind.TEAM:
                self.team(node.name)
        return formula
