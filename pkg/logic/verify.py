"""Brute-force oracles: Z-equivalence, entailment and the executable theorem suites.

Every suite takes ``(bounds, count, registry, config)`` and returns a
``Verdict``. Cases an evaluator guard refuses are skipped and counted in the
verdict notes.
"""

import functools
import itertools
import logging
import random
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field, replace

from .corpus import DEFAULT_MOSTOWSKI, Fragment, FormulaGenerator
from .exceptions import GuardExceeded, LogicError, RewriteError
from .quantifiers import (
    QuantifierRegistry,
    cardinality_condition_on,
    is_monotone_on,
    is_union_closed_on,
    isomorphism_invariant_on,
)
from .rewrite import (
    WHOLE_FORMULA_RULES,
    Claim,
    Context,
    RewriteStep,
    apply_rule,
    emptyset_free,
    nonvoid,
    prenexify,
    swap_quantifiers,
)
from .search import (
    Counterexample,
    SearchBounds,
    Signature,
    Verdict,
    formula_variables,
    structures_within,
    team_domains,
    teams_within,
)
from .semantics import (
    DEFAULT_CONFIG,
    EvalConfig,
    Mode,
    TeamEvaluator,
    check_conservativity,
    eval_tarski,
)
from .structures import Structure, Team, canonical_domain, restrict
from .syntax import (
    And,
    Atom,
    Eq,
    Formula,
    Or,
    Quant,
    QuantKind,
    Var,
    exists,
    forall,
    free_variables,
    is_prenex,
    is_strongly_regular,
    mostowski,
    quantifier_names,
    retarget_quantifiers,
    slash_all,
    team_quantifier,
)

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_SIZE = 50
LIFT_QUANTIFIERS = ("exactly3", "atleast2", "most")
MONOTONE_QUANTIFIERS = ("atleast2", "most")
NON_MONOTONE_QUANTIFIER = "exactly2"
SWAP_POOL = (None, "most", "atmost1", "trivial", "exactly1")
REWRITE_POOL = (None, "forall", "most")


@dataclass
class Trial:
    """Shared state of one oracle run: bounds, seeded randomness and skip counts."""

    verdict: Verdict
    bounds: SearchBounds
    registry: QuantifierRegistry
    config: EvalConfig = DEFAULT_CONFIG
    rng: random.Random = field(init=False)
    skipped: int = 0
    _structure: Structure | None = field(default=None, init=False, repr=False)
    _evaluators: dict[tuple[bool, EvalConfig], TeamEvaluator] = field(
        default_factory=dict, init=False, repr=False
    )

    def __post_init__(self):
        self.rng = random.Random(self.bounds.seed)

    def generator(self, **options) -> FormulaGenerator:
        return FormulaGenerator(seed=self.bounds.seed, **options)

    def structures(self, *formulas: Formula, signature: Signature | None = None) -> Iterator[Structure]:
        signature = signature or Signature.of(*formulas)
        return structures_within(signature, self.bounds, self.rng, self.verdict.notes)

    def teams(
        self, structure: Structure, free: Iterable[str], avoid: Iterable[str] = ()
    ) -> Iterator[Team]:
        for domain in team_domains(free, self.bounds.extra, avoid):
            yield from teams_within(structure, domain, self.bounds, self.rng, self.verdict.notes)

    def grid(
        self, *formulas: Formula, avoid: Iterable[str] = ()
    ) -> Iterator[tuple[Structure, Team]]:
        """Every (structure, team) pair the bounds allow for ``formulas``."""
        free = frozenset().union(*(free_variables(f) for f in formulas))
        avoid = formula_variables(*formulas) | frozenset(avoid)
        for structure in self.structures(*formulas):
            for team in self.teams(structure, free, avoid):
                yield structure, team

    def evaluator(
        self, structure: Structure, bounded: bool = False, config: EvalConfig | None = None
    ) -> TeamEvaluator:
        """One evaluator per (bounded, config) for the current structure, so the
        memo carries across every team of the grid."""
        if structure is not self._structure:
            self._structure = structure
            self._evaluators = {}
        key = (bounded, config or self.config)
        evaluator = self._evaluators.get(key)
        if evaluator is None:
            evaluator = self._evaluators[key] = TeamEvaluator(
                structure, self.registry, key[1], bounded
            )
        return evaluator

    def skip(self, error: GuardExceeded) -> None:
        self.skipped += 1
        logger.debug("%s: skipped a case: %s", self.verdict.name, error)

    def finish(self) -> Verdict:
        if self.skipped:
            self.verdict.notes.append(f"skipped {self.skipped} cases over evaluation guards")
        return self.verdict


def _trial(
    name: str,
    bounds: SearchBounds | None,
    registry: QuantifierRegistry | None,
    config: EvalConfig | None,
) -> Trial:
    return Trial(
        Verdict(name),
        bounds or SearchBounds(),
        registry or QuantifierRegistry.builtin(),
        config or DEFAULT_CONFIG,
    )


def _row_text(row) -> str:
    return ",".join(f"{v}={row[v]}" for v in row) or "-"


# --- equivalence and entailment --------------------------------------------


def _compare(
    trial: Trial,
    left: Formula,
    right: Formula,
    agree: Callable[[bool, bool], bool],
    modulus: frozenset[str],
    bounded: bool,
) -> Verdict:
    verdict = trial.verdict
    if modulus & (free_variables(left) | free_variables(right)):
        return verdict.fail(reason="modulus intersects free variables")
    trial.registry.link(left)
    trial.registry.link(right)
    for structure, team in trial.grid(left, right, avoid=modulus):
        evaluator = trial.evaluator(structure, bounded)
        try:
            first = evaluator.satisfies(team, left)
            second = evaluator.satisfies(team, right)
        except GuardExceeded as error:
            trial.skip(error)
            continue
        verdict.cases += 1
        if not agree(first, second):
            return verdict.fail(
                Counterexample(structure, team, (left, right), {"left": first, "right": second})
            )
    return trial.finish()


def z_equivalent(
    left: Formula,
    right: Formula,
    modulus: Iterable[str] = (),
    bounds: SearchBounds | None = None,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
    bounded: bool = False,
) -> Verdict:
    """M,X ⊨ left ⟺ M,X ⊨ right on every enumerated M and every team avoiding ``modulus``.

    Team domains are FV(left) ∪ FV(right) plus each set of at most
    ``bounds.extra`` fresh variables outside the modulus.
    """
    trial = _trial("equivalence", bounds, registry, config)
    return _compare(trial, left, right, lambda a, b: a == b, frozenset(modulus), bounded)


def entails(
    premise: Formula,
    conclusion: Formula,
    modulus: Iterable[str] = (),
    bounds: SearchBounds | None = None,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
    bounded: bool = False,
) -> Verdict:
    trial = _trial("entailment", bounds, registry, config)
    return _compare(trial, premise, conclusion, lambda a, b: b or not a, frozenset(modulus), bounded)


def replay(
    counterexample: Counterexample,
    registry: QuantifierRegistry | None = None,
    config: EvalConfig | None = None,
    bounded: bool = False,
) -> tuple[bool, ...]:
    """Re-evaluate every formula of a counterexample on its structure and team."""
    evaluator = TeamEvaluator(counterexample.structure, registry, config, bounded)
    return tuple(
        evaluator.satisfies(counterexample.team, formula) for formula in counterexample.formulas
    )


# --- suite registry --------------------------------------------------------

Suite = Callable[..., Verdict]
SUITES: dict[str, Suite] = {}


def suite(
    name: str, corpus_size: int = DEFAULT_CORPUS_SIZE
) -> Callable[[Callable[[Trial, int], Verdict]], Suite]:
    """Register a theorem suite under ``name``; the body receives a ready ``Trial``.

    ``corpus_size`` is the count used when the caller gives none.
    """

    def register(body: Callable[[Trial, int], Verdict]) -> Suite:
        @functools.wraps(body)
        def run(
            bounds: SearchBounds | None = None,
            count: int | None = None,
            registry: QuantifierRegistry | None = None,
            config: EvalConfig | None = None,
        ) -> Verdict:
            count = count or corpus_size
            trial = _trial(name, bounds, registry, config)
            logger.info(
                "suite %s: size=%d extra=%d seed=%d count=%d",
                name,
                trial.bounds.size,
                trial.bounds.extra,
                trial.bounds.seed,
                count,
            )
            verdict = body(trial, count)
            logger.info("suite %s %s after %d cases", name, verdict.status, verdict.cases)
            return verdict

        run.corpus_size = corpus_size
        SUITES[name] = run
        return run

    return register


def run_suite(name: str, **options) -> Verdict:
    try:
        runner = SUITES[name]
    except KeyError:
        raise LogicError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}") from None
    return runner(**options)


def _with_mostowski(generator: FormulaGenerator, count: int) -> list[Formula]:
    """``count`` formulas with at least one Mostowski quantifier, when the generator gives them."""
    found: list[Formula] = []
    for formula in generator.formulas(count * 8):
        if quantifier_names(formula, QuantKind.MOSTOWSKI):
            found.append(formula)
            if len(found) == count:
                break
    return found


def _lifted(formula: Formula, prefix: str) -> Formula:
    return retarget_quantifiers(
        formula,
        QuantKind.MOSTOWSKI,
        lambda node: replace(node, kind=QuantKind.TEAM, name=f"{prefix}_{node.name}"),
    )


def _agreement(
    trial: Trial,
    formulas: Iterable[tuple[Formula, Formula]],
    left_bounded: bool = False,
    right_bounded: bool = False,
    right_config: EvalConfig | None = None,
    labels: tuple[str, str] = ("left", "right"),
) -> Verdict:
    """Both sides of every pair agree on every (M, X) of the grid."""
    verdict = trial.verdict
    for left, right in formulas:
        trial.registry.link(left)
        trial.registry.link(right)
        for structure, team in trial.grid(left, right):
            first_evaluator = trial.evaluator(structure, left_bounded)
            second_evaluator = trial.evaluator(structure, right_bounded, right_config)
            try:
                first = first_evaluator.satisfies(team, left)
                second = second_evaluator.satisfies(team, right)
            except GuardExceeded as error:
                trial.skip(error)
                continue
            verdict.cases += 1
            if first != second:
                return verdict.fail(
                    Counterexample(
                        structure, team, (left, right), {labels[0]: first, labels[1]: second}
                    )
                )
    return trial.finish()


# --- closure properties ----------------------------------------------------


@suite("downward_closure", corpus_size=200)
def suite_downward_closure(trial: Trial, count: int) -> Verdict:
    """M,X ⊨ φ implies M,Y ⊨ φ for Y ⊆ X.

    Checked through one-row removals, which cover every subteam wherever the
    team space is enumerated exhaustively.
    """
    verdict = trial.verdict
    formulas = trial.generator(fragment=Fragment.IF).formulas(count)
    for formula in formulas:
        trial.registry.link(formula)
        for structure, team in trial.grid(formula):
            evaluator = trial.evaluator(structure)
            try:
                if not evaluator.satisfies(team, formula):
                    verdict.cases += 1
                    continue
                for row in team:
                    verdict.cases += 1
                    if not evaluator.satisfies(team.subteam(r for r in team if r != row), formula):
                        return verdict.fail(
                            Counterexample(
                                structure, team, (formula,), {"team": True, "without": _row_text(row)}
                            )
                        )
            except GuardExceeded as error:
                trial.skip(error)
    return trial.finish()


@suite("empty_team", corpus_size=200)
def suite_empty_team(trial: Trial, count: int) -> Verdict:
    verdict = trial.verdict
    for formula in trial.generator(fragment=Fragment.IF).formulas(count):
        trial.registry.link(formula)
        team = Team.empty(free_variables(formula))
        for structure in trial.structures(formula):
            try:
                holds = trial.evaluator(structure).satisfies(team, formula)
            except GuardExceeded as error:
                trial.skip(error)
                continue
            verdict.cases += 1
            if not holds:
                return verdict.fail(Counterexample(structure, team, (formula,), {"team": False}))
    return trial.finish()


def _locality_violation(
    trial: Trial, formula: Formula
) -> Counterexample | None:
    trial.registry.link(formula)
    free = free_variables(formula)
    for structure, team in trial.grid(formula):
        if team.variables == free:
            continue
        evaluator = trial.evaluator(structure)
        try:
            whole = evaluator.satisfies(team, formula)
            restricted = evaluator.satisfies(restrict(team, free), formula)
        except GuardExceeded as error:
            trial.skip(error)
            continue
        trial.verdict.cases += 1
        if whole != restricted:
            return Counterexample(
                structure, team, (formula,), {"team": whole, "restricted": restricted}
            )
    return None


@suite("locality_df", corpus_size=200)
def suite_locality_df(trial: Trial, count: int) -> Verdict:
    """M,X ⊨ φ ⟺ M,X↾FV(φ) ⊨ φ for backslashed formulas, non-monotone quantifiers included."""
    generator = trial.generator(fragment=Fragment.DF, mostowski=DEFAULT_MOSTOWSKI)
    for formula in generator.formulas(count):
        found = _locality_violation(trial, formula)
        if found is not None:
            return trial.verdict.fail(found)
    return trial.finish()


NONLOCAL_SLASHED = exists("y", Eq(Var("y"), Var("x")), {"x"})
NONLOCAL_TEAM = team_quantifier("most_functions", "y", Eq(Var("y"), Var("x")))


@suite("nonlocality_witness")
def suite_nonlocality_witness(trial: Trial, count: int) -> Verdict:
    """Slashed quantifiers and most_functions are not local: a violation must turn up."""
    verdict = trial.verdict
    families = {
        "slashed": [NONLOCAL_SLASHED, *trial.generator(fragment=Fragment.IF).formulas(count)],
        "most_functions": [
            NONLOCAL_TEAM,
            *trial.generator(
                fragment=Fragment.FIRST_ORDER, mostowski=(), team=("most_functions",)
            ).formulas(count),
        ],
    }
    if trial.bounds.extra == 0:
        return verdict.fail(reason="locality violations need at least one extra team variable")
    for family, formulas in families.items():
        witness = next(
            (found for f in formulas if (found := _locality_violation(trial, f)) is not None),
            None,
        )
        if witness is None:
            return verdict.fail(reason=f"no locality violation found for {family}")
        verdict.notes.append(f"{family}: witness found")
        if verdict.witness is None:
            verdict.witness = witness
    return trial.finish()


@suite("union_closed_locality")
def suite_union_closed_locality(trial: Trial, count: int) -> Verdict:
    """Monotone quantifiers are union-closed, on every domain up to the size bound."""
    verdict = trial.verdict
    names = trial.registry.mostowski_names()
    names += [f"{stem}{k}" for stem in ("exactly", "atleast", "atmost") for k in range(4)]
    for name in dict.fromkeys(names):
        quantifier = trial.registry.mostowski(name)
        for n in range(1, trial.bounds.size + 1):
            verdict.cases += 1
            if is_monotone_on(quantifier, n) and not is_union_closed_on(quantifier, n):
                structure = Structure(canonical_domain(n))
                return verdict.fail(
                    Counterexample(
                        structure, Team.unit(), (), {"quantifier": name, "monotone": True}
                    )
                )
    return trial.finish()


# --- lifts -----------------------------------------------------------------


def _without_ban(trial: Trial) -> EvalConfig:
    """Config for the team-quantifier side of a lift comparison.

    Under the empty-function ban a team quantifier rejects every empty
    subteam, so the empty disjunct of a split that the Engström clause
    accepts is lost. The lift theorems are read without the ban.
    """
    if trial.config.empty_function_ban:
        trial.verdict.notes.append("team-quantifier side evaluated without the empty-function ban")
    return replace(trial.config, empty_function_ban=False)


@suite("lift_E", corpus_size=100)
def suite_lift_E(trial: Trial, count: int) -> Verdict:
    """Replacing each Mostowski quantifier by its Ê-lift preserves truth on every team."""
    pairs = []
    for name in LIFT_QUANTIFIERS:
        generator = trial.generator(fragment=Fragment.IF, mostowski=(name,))
        pairs += [(f, _lifted(f, "liftE")) for f in _with_mostowski(generator, count)]
    return _agreement(trial, pairs, right_config=_without_ban(trial), labels=("engstrom", "lifted"))


@suite("lift_B", corpus_size=100)
def suite_lift_B(trial: Trial, count: int) -> Verdict:
    """⊨ᵇ on the Mostowski formula agrees with ⊨ on its B̂-lift."""
    pairs = []
    for name in LIFT_QUANTIFIERS:
        generator = trial.generator(fragment=Fragment.IF, mostowski=(name,))
        pairs += [(f, _lifted(f, "liftB")) for f in _with_mostowski(generator, count)]
    return _agreement(
        trial, pairs, left_bounded=True, right_config=_without_ban(trial), labels=("bounded", "lifted")
    )


MONOTONE_DIVERGENCE = mostowski(NON_MONOTONE_QUANTIFIER, "x", Atom("P", (Var("x"),)))


@suite("monotone_bounded_agreement", corpus_size=100)
def suite_monotone_bounded_agreement(trial: Trial, count: int) -> Verdict:
    """⊨ and ⊨ᵇ agree for monotone quantifiers and come apart for exactly2."""
    verdict = trial.verdict
    pairs = []
    for name in MONOTONE_QUANTIFIERS:
        generator = trial.generator(fragment=Fragment.IF, mostowski=(name,))
        pairs += [(f, f) for f in _with_mostowski(generator, count)]
    if not _agreement(trial, pairs, right_bounded=True, labels=("team", "bounded")):
        return verdict
    generator = trial.generator(fragment=Fragment.IF, mostowski=(NON_MONOTONE_QUANTIFIER,))
    candidates = [MONOTONE_DIVERGENCE, *_with_mostowski(generator, count)]
    for formula in candidates:
        trial.registry.link(formula)
        for structure, team in trial.grid(formula):
            try:
                plain = trial.evaluator(structure).satisfies(team, formula)
                bounded = trial.evaluator(structure, bounded=True).satisfies(team, formula)
            except GuardExceeded as error:
                trial.skip(error)
                continue
            if plain != bounded:
                verdict.witness = Counterexample(
                    structure, team, (formula,), {"team": plain, "bounded": bounded}
                )
                verdict.notes.append(f"{NON_MONOTONE_QUANTIFIER}: divergence recorded")
                return trial.finish()
    return verdict.fail(reason=f"no divergence found for {NON_MONOTONE_QUANTIFIER}")


FLAT_WITNESS_BODY = Atom("P", (Var("x"),))


@suite("flat_conservativity")
def suite_flat_conservativity(trial: Trial, count: int) -> Verdict:
    """Team and pointwise readings of (Q x)ψ agree for monotone Q and flat ψ, and not for exactly2."""
    verdict = trial.verdict
    generator = trial.generator(
        fragment=Fragment.FIRST_ORDER, mostowski=(), variables=("x", "y")
    )
    for body in generator.formulas(count):
        check = check_conservativity(
            "atleast2", body, "x", trial.bounds, trial.config, trial.registry
        )
        verdict.cases += check.cases
        if not check:
            return verdict.fail(check.counterexample, check.reason)
    witness = check_conservativity(
        NON_MONOTONE_QUANTIFIER, FLAT_WITNESS_BODY, "x", trial.bounds, trial.config, trial.registry
    )
    verdict.cases += witness.cases
    if witness:
        return verdict.fail(reason=f"no conservativity counterexample found for {NON_MONOTONE_QUANTIFIER}")
    verdict.witness = witness.counterexample
    return trial.finish()


def _hatted(formula: Formula) -> Formula:
    formula = retarget_quantifiers(
        formula, QuantKind.EXISTS, lambda node: replace(node, kind=QuantKind.TEAM, name="hat_exists")
    )
    return retarget_quantifiers(
        formula, QuantKind.FORALL, lambda node: replace(node, kind=QuantKind.TEAM, name="hat_forall")
    )


@suite("hat_agreement", corpus_size=100)
def suite_hat_agreement(trial: Trial, count: int) -> Verdict:
    """hat_exists and hat_forall behave as ∃ and ∀."""
    generator = trial.generator(fragment=Fragment.IF, mostowski=())
    pairs = [(f, _hatted(f)) for f in generator.formulas(count)]
    return _agreement(trial, pairs, right_config=_without_ban(trial), labels=("plain", "hatted"))


@suite("logicality")
def suite_logicality(trial: Trial, count: int) -> Verdict:
    """count_functions passes the cardinality condition on |M| = 2 and the Ê-lift of exactly1 fails it."""
    verdict = trial.verdict
    structure = Structure(canonical_domain(2))
    teams = [
        team
        for n in range(3)
        for team in (
            Team.of({"x"}, [{"x": a} for a in chosen])
            for chosen in itertools.combinations(structure.domain, n)
        )
    ]
    for k in (1, 2):
        quantifier = trial.registry.team(f"count_functions{k}")
        for team in teams:
            verdict.cases += 1
            check = cardinality_condition_on(quantifier, structure, team)
            if not check:
                return verdict.fail(
                    Counterexample(structure, team, (), {"quantifier": quantifier.name, "cardinality": False})
                )
            if not isomorphism_invariant_on(quantifier, structure, team):
                return verdict.fail(
                    Counterexample(structure, team, (), {"quantifier": quantifier.name, "invariant": False})
                )
    lifted = trial.registry.team("liftE_exactly1")
    failing = next(
        (team for team in teams if not cardinality_condition_on(lifted, structure, team)), None
    )
    verdict.cases += len(teams)
    if failing is None:
        return verdict.fail(reason="the lift of exactly1 passed the cardinality condition")
    verdict.witness = Counterexample(
        structure, failing, (), {"quantifier": lifted.name, "cardinality": False}
    )
    void = trial.registry.team("liftE_exactly3")
    if all(cardinality_condition_on(void, structure, team) for team in teams):
        verdict.notes.append("liftE_exactly3 is empty on |M|=2 and passes trivially")
    return trial.finish()


# --- semantics agreement ---------------------------------------------------


@suite("strict_lax")
def suite_strict_lax(trial: Trial, count: int) -> Verdict:
    """Strict and lax existentials agree on downward closed formulas."""
    strict = replace(trial.config, mode=Mode.STRICT)
    lax = replace(trial.config, mode=Mode.LAX)
    trial.config = lax
    formulas = trial.generator(fragment=Fragment.IF).formulas(count)
    return _agreement(
        trial, [(f, f) for f in formulas], right_config=strict, labels=("lax", "strict")
    )


@suite("singleton_agreement")
def suite_singleton_agreement(trial: Trial, count: int) -> Verdict:
    """On singleton teams, team semantics is Tarskian semantics (monotone quantifiers)."""
    verdict = trial.verdict
    generator = trial.generator(fragment=Fragment.FIRST_ORDER, mostowski=MONOTONE_QUANTIFIERS)
    for formula in generator.formulas(count):
        trial.registry.link(formula)
        for structure, team in trial.grid(formula):
            evaluator = trial.evaluator(structure)
            for row in team:
                singleton = team.subteam([row])
                try:
                    holds = evaluator.satisfies(singleton, formula)
                except GuardExceeded as error:
                    trial.skip(error)
                    continue
                verdict.cases += 1
                tarskian = eval_tarski(structure, row, formula, trial.registry)
                if holds != tarskian:
                    return verdict.fail(
                        Counterexample(
                            structure, singleton, (formula,), {"team": holds, "tarski": tarskian}
                        )
                    )
    return trial.finish()


# --- rewriting -------------------------------------------------------------


def _quantify(
    name: str | None, variable: str, body: Formula, slash: Iterable[str] = ()
) -> Quant:
    """``None`` is ∃, ``"forall"`` is ∀, anything else a Mostowski quantifier."""
    if name is None:
        return exists(variable, body, slash)
    if name == "forall":
        return forall(variable, body, slash)
    return mostowski(name, variable, body, slash)


def _subset(rng: random.Random, pool: Iterable[str]) -> frozenset[str]:
    return frozenset(v for v in pool if rng.random() < 0.5)


class _Instances:
    """Seeded random instances for each rewrite rule.

    The quantified side ranges over ``u`` and the other side avoids it, so
    the variable conditions of the extraction rules hold by construction.
    """

    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.body = FormulaGenerator(seed=seed, variables=("u", "x", "y"), max_depth=2, mostowski=("most",))
        self.other = FormulaGenerator(seed=seed + 1, variables=("x", "y"), max_depth=1, mostowski=("most",))

    def head(self, pool=REWRITE_POOL) -> str | None:
        return self.rng.choice(pool)

    def depth(self) -> int:
        return self.rng.randint(0, 2)

    def rename_bound(self) -> tuple[Formula, dict]:
        body = FormulaGenerator(seed=self.rng.random(), variables=("x", "y"), max_depth=2).formula(self.depth())
        return _quantify(self.head(), "x", body, _subset(self.rng, ("y",))), {"new": "u"}

    def _extraction(self, kind: type, slashed: bool) -> tuple[Formula, dict]:
        side = self.rng.choice(("left", "right"))
        quantified = _quantify(
            self.head(), "u", self.body.formula(self.depth()), _subset(self.rng, ("x", "y"))
        )
        other = self.other.formula(self.depth())
        slash = _subset(self.rng, ("x", "y")) if slashed else frozenset()
        pair = (quantified, other) if side == "left" else (other, quantified)
        return kind(*pair, slash), {"side": side}

    def weak_extract(self):
        return self._extraction(Or, True)

    def extract_conjunction(self):
        return self._extraction(And, True)

    def strong_extract(self):
        return self._extraction(Or, False)

    def _elimination(self, name: str | None, rest: frozenset[str], outer: frozenset[str]):
        right = slash_all(self.other.formula(self.depth()), {"u"})
        body = Or(self.body.formula(self.depth()), right, rest | {"u"})
        return _quantify(name, "u", body, outer), {}

    def slash_elim_R(self):
        return self._elimination(self.head(), frozenset(), _subset(self.rng, ("x", "y")))

    def slash_elim_exists(self):
        outer = _subset(self.rng, ("x", "y"))
        return self._elimination(None, _subset(self.rng, outer), outer)

    def slash_elim_forall(self):
        return self._elimination("forall", _subset(self.rng, ("x", "y")), _subset(self.rng, ("x", "y")))

    def verticalize(self):
        return slash_all(self.other.formula(1 + self.depth()), {"u"}), {"v": "u"}

    def swap(self):
        pool = (None, "most", "atleast1")
        inner = _quantify(
            self.head(pool), "y", self.body.formula(self.depth()), {"u"} | _subset(self.rng, ("x",))
        )
        return _quantify(self.head(pool), "u", inner, _subset(self.rng, ("x",))), {}

    def drop_existential_slashes(self):
        inner = _quantify(self.head((None, "most")), "y", self.other.formula(self.depth()), {"x"})
        return exists("x", inner), {"path": (0,)}

    def drop_universal_slashes(self):
        if self.rng.random() < 0.5:
            return forall("u", self.body.formula(self.depth()), _subset(self.rng, ("x", "y")) or {"x"}), {}
        slash = _subset(self.rng, ("x", "y")) or {"y"}
        return And(self.body.formula(self.depth()), self.other.formula(self.depth()), slash), {}


REWRITE_RULES = (
    "rename_bound",
    "weak_extract",
    "extract_conjunction",
    "strong_extract",
    "slash_elim_R",
    "slash_elim_exists",
    "slash_elim_forall",
    "verticalize",
    "swap",
    "drop_existential_slashes",
    "drop_universal_slashes",
)


def check_step(
    step: RewriteStep,
    bounds: SearchBounds,
    config: EvalConfig | None = None,
    registry: QuantifierRegistry | None = None,
) -> Verdict:
    """The Z-equivalence (or entailment) a step claims.

    Checked on the rewritten occurrence, or on the whole formula for rules in
    ``WHOLE_FORMULA_RULES``.
    """
    check = z_equivalent if step.claim == Claim.EQUIVALENCE else entails
    if step.rule in WHOLE_FORMULA_RULES:
        if step.original is None:
            raise LogicError(f"{step.rule} is checked on the whole formula, which the step lacks")
        return check(step.original, step.formula, step.modulus, bounds, config, registry)
    return check(step.source, step.result, step.modulus, bounds, config, registry)


@suite("rewrite_soundness")
def suite_rewrite_soundness(trial: Trial, count: int) -> Verdict:
    """Every rule's claimed Z-equivalence, on ``count`` instances per rule, and prenexify."""
    verdict = trial.verdict
    context = Context(trial.registry, trial.bounds.size)
    instances = _Instances(trial.bounds.seed)
    for rule in REWRITE_RULES:
        applied = 0
        for _ in range(count * 4):
            if applied == count:
                break
            formula, options = getattr(instances, rule)()
            path = options.pop("path", ())
            try:
                step = apply_rule(rule, formula, path, context, **options)
            except RewriteError:
                continue
            applied += 1
            check = check_step(step, trial.bounds, trial.config, trial.registry)
            verdict.absorb(replace(check, notes=[]))
            if not verdict:
                logger.info("rule %s failed on %s", rule, step.source)
                return verdict
        verdict.notes.append(f"{rule}: {applied} instances")
        if applied < count:
            return verdict.fail(reason=f"{rule} applied to {applied} of {count} instances")
    applied = 0
    generator = trial.generator(fragment=Fragment.IF, mostowski=("most",))
    for sentence in generator.sentences(count):
        try:
            rewrite = prenexify(sentence, context)
        except RewriteError:
            continue
        applied += 1
        if not (is_prenex(rewrite.formula) and is_strongly_regular(rewrite.formula)):
            structure = Structure(canonical_domain(1))
            return verdict.fail(
                Counterexample(
                    structure, Team.unit(), (sentence, rewrite.formula), {"prenex": False}
                )
            )
        check = z_equivalent(
            sentence, rewrite.formula, rewrite.modulus, trial.bounds, trial.config, trial.registry
        )
        verdict.absorb(replace(check, notes=[]))
        if not verdict:
            return verdict
    verdict.notes.append(f"prenexify: {applied} sentences")
    return trial.finish()


def swap_pair(
    outer: str | None, inner: str | None, body: Formula, outer_slash=(), inner_slash=()
) -> tuple[Formula, Formula]:
    """(R u/U)(S v/Vu)ψ and (S v/V)(R u/Uv)ψ."""
    before = _quantify(outer, "u", _quantify(inner, "v", body, {"u", *inner_slash}), outer_slash)
    after = _quantify(inner, "v", _quantify(outer, "u", body, {"v", *outer_slash}), inner_slash)
    return before, after


@suite("swap_entailments")
def suite_swap_entailments(trial: Trial, count: int) -> Verdict:
    """One-directional swaps for quantifiers that admit the empty set.

    before ⊨ after whenever the outer quantifier is emptyset-free or the
    inner one nonvoid, and after ⊨ before in the mirrored case.
    """
    verdict = trial.verdict
    context = Context(trial.registry, trial.bounds.size)
    generator = trial.generator(variables=("u", "v", "x"), max_depth=2, mostowski=("most",))
    pairs = list(itertools.product(SWAP_POOL, repeat=2))
    for i in range(count):
        outer, inner = pairs[i % len(pairs)]
        before, after = swap_pair(
            outer,
            inner,
            generator.formula(trial.rng.randint(0, 2)),
            _subset(trial.rng, ("x",)),
            _subset(trial.rng, ("x",)),
        )
        first, second = before, before.body
        checks = []
        if emptyset_free(first, context) or nonvoid(second, context):
            checks.append((before, after))
        if emptyset_free(second, context) or nonvoid(first, context):
            checks.append((after, before))
        for premise, conclusion in checks:
            check = entails(
                premise, conclusion, {"u", "v"}, trial.bounds, trial.config, trial.registry
            )
            verdict.absorb(replace(check, notes=[]))
            if not verdict:
                return verdict
    return trial.finish()


BOUNDED_SWAP_BODIES = (
    Atom("R", (Var("x"), Var("y"))),
    Atom("R", (Var("y"), Var("x"))),
    Atom("R", (Var("x"), Var("y")), negated=True),
    Eq(Var("x"), Var("y")),
)


@suite("bounded_swap")
def suite_bounded_swap(trial: Trial, count: int) -> Verdict:
    """(exactly1 x)(∃y/{x})ψ and ∃y(exactly1 x/{y})ψ must come apart under ⊨ᵇ."""
    verdict = trial.verdict
    generator = trial.generator(
        fragment=Fragment.FIRST_ORDER, variables=("x", "y"), max_depth=1, mostowski=()
    )
    bodies = [*BOUNDED_SWAP_BODIES, *generator.formulas(count)]
    context = Context(trial.registry, trial.bounds.size, bounded=True)
    for body in bodies:
        before = mostowski("exactly1", "x", exists("y", body, {"x"}))
        after = exists("y", mostowski("exactly1", "x", body, {"y"}))
        try:
            swap_quantifiers(before, (), context)
        except RewriteError:
            pass
        else:
            return verdict.fail(reason="swap was offered under bounded semantics")
        trial.registry.link(before)
        trial.registry.link(after)
        for structure in trial.structures(before, after):
            evaluator = trial.evaluator(structure, bounded=True)
            try:
                first = evaluator.satisfies(Team.unit(), before)
                second = evaluator.satisfies(Team.unit(), after)
            except GuardExceeded as error:
                trial.skip(error)
                continue
            verdict.cases += 1
            if first != second:
                verdict.witness = Counterexample(
                    structure, Team.unit(), (before, after), {"left": first, "right": second}
                )
                return trial.finish()
    return verdict.fail(reason="no bounded swap failure found")
