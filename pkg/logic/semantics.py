"""Tarskian, team and bounded evaluation of IF*/DF formulas."""

import itertools
import logging
import random
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum

from .exceptions import FragmentError, GuardExceeded, UnsuitableTeamError
from .quantifiers import QuantifierRegistry, is_monotone_on, localize
from .search import (
    Counterexample,
    SearchBounds,
    Signature,
    Verdict,
    structures_within,
    teams_within,
    team_domains,
)
from .structures import (
    EMPTY_ASSIGNMENT,
    Assignment,
    Element,
    Structure,
    SupplementFunction,
    Team,
    duplicate,
    enumerate_uniform_functions,
    supplement,
    uniform_classes,
)
from .syntax import (
    And,
    Atom,
    Const,
    Eq,
    Formula,
    Or,
    Quant,
    QuantKind,
    Term,
    free_variables,
    is_first_order,
    mostowski,
    variables,
)

logger = logging.getLogger(__name__)


class Mode(StrEnum):
    LAX = "lax"
    STRICT = "strict"


class Bounded(StrEnum):
    UNIFORM = "uniform"
    RAW = "raw"


@dataclass(frozen=True)
class EvalConfig:
    mode: Mode = Mode.LAX
    bounded: Bounded = Bounded.UNIFORM
    memoize: bool = True
    empty_function_ban: bool = True
    max_split_classes: int = 10
    max_choice_functions: int = 1 << 16
    max_meaning_classes: int = 4
    max_meaning_domain: int = 4

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "bounded", Bounded(self.bounded))


DEFAULT_CONFIG = EvalConfig()


def _function_key(function: SupplementFunction) -> tuple:
    return tuple((row.sort_key(), tuple(sorted(values))) for row, values in function.items())


@dataclass(frozen=True)
class MeaningSet:
    """[ψ]^{v,V}_{M,X}: the V-uniform F with M,X[F/v] ⊨ ψ."""

    team: Team
    variable: str
    uniform_over: frozenset[str]
    functions: frozenset[SupplementFunction] = field(default_factory=frozenset)

    def __post_init__(self):
        for function in self.functions:
            if function.source != self.team:
                raise UnsuitableTeamError("meaning set members must be total on the base team")

    def __iter__(self) -> Iterator[SupplementFunction]:
        return iter(sorted(self.functions, key=_function_key))

    def __len__(self) -> int:
        return len(self.functions)

    def __contains__(self, function) -> bool:
        return function in self.functions


def _uniform_over(node: Quant, team: Team) -> frozenset[str]:
    """Variables the chosen value may not depend on."""
    if node.backslash:
        return team.variables - node.slash
    return node.slash


class TeamEvaluator:
    """Evaluates formulas on teams of one structure.

    Results are memoized on (occurrence, team); root formulas are pinned so
    occurrence identities stay valid for the evaluator's lifetime.
    """

    def __init__(
        self,
        structure: Structure,
        registry: QuantifierRegistry | None = None,
        config: EvalConfig | None = None,
        bounded: bool = False,
    ):
        self.structure = structure
        self.registry = registry or QuantifierRegistry.builtin()
        self.config = config or DEFAULT_CONFIG
        self.bounded = bounded
        self._memo: dict[tuple[int, Team], bool] = {}
        self._roots: dict[int, Formula] = {}
        self._candidates = (
            [frozenset({a}) for a in structure.domain]
            if self.config.mode == Mode.STRICT
            else structure.subsets[1:]
        )

    def satisfies(self, team: Team, formula: Formula) -> bool:
        missing = free_variables(formula) - team.variables
        if missing:
            raise UnsuitableTeamError(
                f"team domain {sorted(team.variables)} misses free variables {sorted(missing)}"
            )
        self.registry.link(formula)
        self._roots[id(formula)] = formula
        return self._eval(formula, team)

    def meaning(
        self, team: Team, body: Formula, variable: str, uniform_over: Iterable[str] = ()
    ) -> MeaningSet:
        uniform_over = frozenset(uniform_over)
        classes = len(uniform_classes(team, uniform_over))
        if classes > self.config.max_meaning_classes:
            raise GuardExceeded(
                f"{classes} uniformity classes exceed the meaning-set guard "
                f"of {self.config.max_meaning_classes}"
            )
        if self.structure.size > self.config.max_meaning_domain:
            raise GuardExceeded(
                f"domain size {self.structure.size} exceeds the meaning-set guard "
                f"of {self.config.max_meaning_domain}"
            )
        self._roots[id(body)] = body
        functions = frozenset(
            function
            for function in enumerate_uniform_functions(
                team, uniform_over, self.structure.subsets
            )
            if self._eval(body, supplement(team, function, variable))
        )
        return MeaningSet(team, variable, uniform_over, functions)

    def _eval(self, formula: Formula, team: Team) -> bool:
        if not self.config.memoize:
            return self._clause(formula, team)
        key = (id(formula), team)
        cached = self._memo.get(key)
        if cached is None:
            cached = self._memo[key] = self._clause(formula, team)
        return cached

    def _clause(self, formula: Formula, team: Team) -> bool:
        match formula:
            case Atom() | Eq():
                return all(literal_holds(self.structure, row, formula) for row in team.rows)
            case And(left, right):
                return self._eval(left, team) and self._eval(right, team)
            case Or(left, right, slash):
                return self._split(left, right, slash, team)
            case Quant(kind=QuantKind.FORALL, variable=variable, body=body):
                return self._eval(body, duplicate(team, self.structure, variable))
            case Quant(kind=QuantKind.EXISTS):
                return self._engstrom(formula, team, self._candidates)
            case Quant(kind=QuantKind.MOSTOWSKI, name=name):
                accepted = localize(self.registry.mostowski(name), self.structure)
                if self.bounded:
                    return self._bounded(formula, team, set(accepted))
                return self._engstrom(formula, team, accepted)
            case Quant(kind=QuantKind.TEAM, name=name):
                quantifier = self.registry.team(name)
                family = self.meaning(
                    team, formula.body, formula.variable, _uniform_over(formula, team)
                )
                return quantifier.accepts(
                    self.structure,
                    team,
                    family.functions,
                    empty_function_ban=self.config.empty_function_ban,
                )
        raise FragmentError(f"cannot evaluate {formula!r}")

    def _split(self, left: Formula, right: Formula, slash: frozenset[str], team: Team) -> bool:
        classes = uniform_classes(team, slash)
        if len(classes) > self.config.max_split_classes:
            raise GuardExceeded(
                f"{len(classes)} split classes exceed the guard of {self.config.max_split_classes}"
            )
        # label 0: left only, 1: right only, 2: both
        for labels in itertools.product((0, 1, 2), repeat=len(classes)):
            left_rows = [row for group, label in zip(classes, labels) if label != 1 for row in group]
            if not self._eval(left, team.subteam(left_rows)):
                continue
            right_rows = [row for group, label in zip(classes, labels) if label != 0 for row in group]
            if self._eval(right, team.subteam(right_rows)):
                return True
        return False

    def _engstrom(
        self, node: Quant, team: Team, candidates: Iterable[frozenset[Element]]
    ) -> bool:
        candidates = list(candidates)
        uniform = _uniform_over(node, team)
        choices = len(candidates) ** len(uniform_classes(team, uniform))
        if choices > self.config.max_choice_functions:
            raise GuardExceeded(
                f"{choices} choice functions exceed the guard of {self.config.max_choice_functions}"
            )
        return any(
            self._eval(node.body, supplement(team, function, node.variable))
            for function in enumerate_uniform_functions(team, uniform, candidates)
        )

    def _bounded(self, node: Quant, team: Team, accepted: set[frozenset[Element]]) -> bool:
        """Some satisfying F all of whose satisfying extensions F′ ≥ F stay in Q^M."""
        uniform = _uniform_over(node, team)
        classes = len(team) if self.config.bounded == Bounded.RAW else len(uniform_classes(team, uniform))
        if classes > self.config.max_meaning_classes:
            raise GuardExceeded(
                f"{classes} classes exceed the bounded-clause guard of {self.config.max_meaning_classes}"
            )

        def satisfying(over: Iterable[str]) -> list[SupplementFunction]:
            return [
                function
                for function in enumerate_uniform_functions(team, over, self.structure.subsets)
                if self._eval(node.body, supplement(team, function, node.variable))
            ]

        lower = satisfying(uniform)
        upper = lower if self.config.bounded == Bounded.UNIFORM else satisfying(())
        for function in lower:
            if all(
                all(values in accepted for _, values in larger.graph)
                for larger in upper
                if larger.dominates(function)
            ):
                return True
        return False


def term_value(structure: Structure, row: Assignment, term: Term) -> Element:
    if isinstance(term, Const):
        return structure.constant(term.name)
    try:
        return row[term.name]
    except KeyError:
        raise UnsuitableTeamError(f"{term.name} is not assigned") from None


def literal_holds(structure: Structure, row: Assignment, literal: Atom | Eq) -> bool:
    if isinstance(literal, Atom):
        value = structure.holds(
            literal.relation, tuple(term_value(structure, row, t) for t in literal.terms)
        )
    else:
        value = term_value(structure, row, literal.left) == term_value(
            structure, row, literal.right
        )
    return value != literal.negated


def eval_tarski(
    structure: Structure,
    assignment: Assignment,
    formula: Formula,
    registry: QuantifierRegistry | None = None,
) -> bool:
    """M,s ⊨ φ for first-order φ with Mostowski quantifiers."""
    if not is_first_order(formula):
        raise FragmentError("Tarskian evaluation takes slash-free first-order formulas")
    missing = free_variables(formula) - assignment.domain
    if missing:
        raise UnsuitableTeamError(f"assignment misses free variables {sorted(missing)}")
    registry = registry or QuantifierRegistry.builtin()
    registry.link(formula)
    return _tarski(structure, assignment, formula, registry)


def _tarski(
    structure: Structure, row: Assignment, formula: Formula, registry: QuantifierRegistry
) -> bool:
    match formula:
        case Atom() | Eq():
            return literal_holds(structure, row, formula)
        case And(left, right):
            return _tarski(structure, row, left, registry) and _tarski(
                structure, row, right, registry
            )
        case Or(left, right):
            return _tarski(structure, row, left, registry) or _tarski(
                structure, row, right, registry
            )
        case Quant(kind=QuantKind.EXISTS, variable=v, body=body):
            return any(_tarski(structure, row.extend(v, a), body, registry) for a in structure.domain)
        case Quant(kind=QuantKind.FORALL, variable=v, body=body):
            return all(_tarski(structure, row.extend(v, a), body, registry) for a in structure.domain)
        case Quant(kind=QuantKind.MOSTOWSKI, variable=v, body=body, name=name):
            witnesses = frozenset(
                a for a in structure.domain if _tarski(structure, row.extend(v, a), body, registry)
            )
            return registry.mostowski(name).accepts(witnesses, structure)
    raise FragmentError(f"cannot evaluate {formula!r} in Tarskian semantics")


def eval_team(
    structure: Structure,
    team: Team,
    formula: Formula,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> bool:
    return TeamEvaluator(structure, registry, config).satisfies(team, formula)


def eval_bounded(
    structure: Structure,
    team: Team,
    formula: Formula,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> bool:
    return TeamEvaluator(structure, registry, config, bounded=True).satisfies(team, formula)


def meaning_set(
    structure: Structure,
    team: Team,
    body: Formula,
    variable: str,
    slash: Iterable[str] = (),
    backslash: bool = False,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> MeaningSet:
    slash = frozenset(slash)
    missing = ((free_variables(body) - {variable}) | slash) - team.variables
    if missing:
        raise UnsuitableTeamError(
            f"team domain {sorted(team.variables)} misses {sorted(missing)}"
        )
    evaluator = TeamEvaluator(structure, registry, config)
    evaluator.registry.link(body)
    uniform_over = team.variables - slash if backslash else slash
    return evaluator.meaning(team, body, variable, uniform_over)


def sentence_initial_meaning(
    structure: Structure,
    body: Formula,
    variable: str,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> list[frozenset[Element]]:
    """|ψ|^v_M: the values F(∅) of the meaning set on the team {∅}, in subset order."""
    extra = free_variables(body) - {variable}
    if extra:
        raise FragmentError(f"free variables {sorted(extra)} besides {variable}")
    meaning = meaning_set(structure, Team.unit(), body, variable, config=config, registry=registry)
    values = {function(EMPTY_ASSIGNMENT) for function in meaning.functions}
    return [subset for subset in structure.subsets if subset in values]


def is_flat(
    formula: Formula,
    bounds: SearchBounds | None = None,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> Verdict:
    """M,X ⊨ φ ⟺ every M,{s} ⊨ φ, over the enumerated structures and teams."""
    bounds = bounds or SearchBounds()
    verdict = Verdict("flatness")
    skipped = 0
    rng = random.Random(bounds.seed)
    signature = Signature.of(formula)
    for structure in structures_within(signature, bounds, rng, verdict.notes):
        evaluator = TeamEvaluator(structure, registry, config)
        for domain in team_domains(free_variables(formula), bounds.extra, variables(formula)):
            for team in teams_within(structure, domain, bounds, rng, verdict.notes):
                try:
                    whole = evaluator.satisfies(team, formula)
                    pointwise = all(
                        evaluator.satisfies(team.subteam([row]), formula) for row in team
                    )
                except GuardExceeded:
                    skipped += 1
                    continue
                verdict.cases += 1
                if whole != pointwise:
                    return verdict.fail(
                        Counterexample(
                            structure, team, (formula,), {"team": whole, "pointwise": pointwise}
                        )
                    )
    return _noting_skips(verdict, skipped)


def _noting_skips(verdict: Verdict, skipped: int) -> Verdict:
    if skipped:
        verdict.notes.append(f"skipped {skipped} cases over evaluation guards")
    return verdict


def check_conservativity(
    quantifier: str,
    body: Formula,
    variable: str,
    bounds: SearchBounds | None = None,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> Verdict:
    """M,X ⊨ Qvψ ⟺ M,s ⊨ Qvψ for every s ∈ X, read pointwise on singleton teams.

    The monotonicity and flatness preconditions are reported in the notes,
    not enforced.
    """
    bounds = bounds or SearchBounds()
    registry = registry or QuantifierRegistry.builtin()
    formula = mostowski(quantifier, variable, body)
    registry.link(formula)
    verdict = Verdict(f"conservativity of {quantifier}")
    skipped = 0
    monotone = all(
        is_monotone_on(registry.mostowski(quantifier), n) for n in range(1, bounds.size + 1)
    )
    verdict.notes.append(f"monotone={'yes' if monotone else 'no'}")
    verdict.notes.append(f"flat={'yes' if is_flat(body, bounds, config, registry) else 'no'}")
    rng = random.Random(bounds.seed)
    for structure in structures_within(Signature.of(formula), bounds, rng, verdict.notes):
        evaluator = TeamEvaluator(structure, registry, config)
        accepted = set(localize(registry.mostowski(quantifier), structure))
        for domain in team_domains(free_variables(formula), bounds.extra, variables(formula)):
            for team in teams_within(structure, domain, bounds, rng, verdict.notes):
                try:
                    whole = evaluator.satisfies(team, formula)
                    pointwise = all(
                        frozenset(
                            a
                            for a in structure.domain
                            if evaluator.satisfies(Team.of(row.domain | {variable}, [row.extend(variable, a)]), body)
                        )
                        in accepted
                        for row in team
                    )
                except GuardExceeded:
                    skipped += 1
                    continue
                verdict.cases += 1
                if whole != pointwise:
                    return verdict.fail(
                        Counterexample(
                            structure, team, (formula,), {"team": whole, "pointwise": pointwise}
                        )
                    )
    return _noting_skips(verdict, skipped)
