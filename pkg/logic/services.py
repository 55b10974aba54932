"""Glue between Django settings and the engine, shared by the command and the API."""

import logging
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from .exceptions import FragmentError, UnknownQuantifierError, UnsuitableTeamError
from .formats import format_counterexample, format_mostowski, load_quantifiers
from .quantifiers import (
    DEFAULT_FAMILY_SAMPLES,
    QuantifierRegistry,
    cardinality_condition_on,
    is_emptyset_free_on,
    is_monotone_on,
    is_union_closed_on,
    isomorphism_invariant_on,
    permutation_invariant_on,
    quality_condition_on,
    team_monotone_on,
)
from .rewrite import Context
from .search import SearchBounds, Verdict
from .semantics import (
    Bounded,
    EvalConfig,
    MeaningSet,
    Mode,
    eval_bounded,
    eval_tarski,
    eval_team,
    meaning_set,
    sentence_initial_meaning,
)
from .structures import Element, Structure, Team, canonical_domain
from .syntax import Formula, Quant, free_variables

logger = logging.getLogger(__name__)

DEFAULTS = {
    "QUANTIFIERS_FILE": "",
    "EMPTY_FUNCTION_BAN": True,
    "MAX_SPLIT_CLASSES": 10,
    "MAX_CHOICE_FUNCTIONS": 1 << 16,
    "MAX_MEANING_CLASSES": 4,
    "MAX_MEANING_DOMAIN": 4,
    "SEARCH_SIZE": 3,
    "SEARCH_EXTRA": 1,
    "SEARCH_MAX_ROWS": 8,
    "SEARCH_SAMPLES": 64,
    "SEED": 0,
    "CORPUS_SIZE": 0,
    "PRIMALITY_DEPTH": 32,
}


def logic_settings() -> dict:
    return {**DEFAULTS, **getattr(settings, "LOGIC", {})}


def registry(quantifiers_file: str | Path | None = None) -> QuantifierRegistry:
    """Built-ins, then the configured file, then ``quantifiers_file``."""
    configured = logic_settings()["QUANTIFIERS_FILE"] or None
    base = load_quantifiers(configured)
    if quantifiers_file:
        return load_quantifiers(quantifiers_file, base)
    return base


def eval_config(strict: bool = False, bounded: str | None = None) -> EvalConfig:
    options = logic_settings()
    return EvalConfig(
        mode=Mode.STRICT if strict else Mode.LAX,
        bounded=Bounded(bounded or Bounded.UNIFORM),
        empty_function_ban=options["EMPTY_FUNCTION_BAN"],
        max_split_classes=options["MAX_SPLIT_CLASSES"],
        max_choice_functions=options["MAX_CHOICE_FUNCTIONS"],
        max_meaning_classes=options["MAX_MEANING_CLASSES"],
        max_meaning_domain=options["MAX_MEANING_DOMAIN"],
    )


def search_bounds(
    size: int | None = None, extra: int | None = None, seed: int | None = None
) -> SearchBounds:
    options = logic_settings()
    return SearchBounds(
        size=options["SEARCH_SIZE"] if size is None else size,
        extra=options["SEARCH_EXTRA"] if extra is None else extra,
        max_rows=options["SEARCH_MAX_ROWS"],
        samples=options["SEARCH_SAMPLES"],
        seed=options["SEED"] if seed is None else seed,
    )


def rewrite_context(
    quantifiers: QuantifierRegistry, size: int | None = None, bounded: bool = False
) -> Context:
    return Context(quantifiers, logic_settings()["SEARCH_SIZE"] if size is None else size, bounded)


def evaluate(
    structure: Structure,
    team: Team,
    formula: Formula,
    quantifiers: QuantifierRegistry,
    strict: bool = False,
    bounded: str | None = None,
    tarski: bool = False,
) -> bool:
    """Team satisfaction; ``bounded`` selects ⊨ᵇ, ``tarski`` checks every row classically."""
    logger.debug("evaluating on %d rows: strict=%s bounded=%s tarski=%s", len(team), strict, bounded, tarski)
    if tarski:
        return all(eval_tarski(structure, row, formula, quantifiers) for row in team)
    config = eval_config(strict, bounded)
    if bounded:
        return eval_bounded(structure, team, formula, config, quantifiers)
    return eval_team(structure, team, formula, config, quantifiers)


@dataclass(frozen=True)
class Meaning:
    head: Quant
    functions: MeaningSet
    sentence_initial: list[frozenset[Element]] | None = None


def meaning(
    structure: Structure,
    team: Team,
    formula: Formula,
    quantifiers: QuantifierRegistry,
    strict: bool = False,
) -> Meaning:
    """The meaning set of the body of ``formula``'s head quantifier."""
    if not isinstance(formula, Quant):
        raise FragmentError("the meaning set is taken of a formula headed by a quantifier")
    missing = free_variables(formula) - team.variables
    if missing:
        raise UnsuitableTeamError(f"team domain misses free variables {sorted(missing)}")
    config = eval_config(strict)
    functions = meaning_set(
        structure,
        team,
        formula.body,
        formula.variable,
        formula.slash,
        formula.backslash,
        config,
        quantifiers,
    )
    initial = None
    if team == Team.unit() and free_variables(formula.body) <= {formula.variable}:
        initial = sentence_initial_meaning(
            structure, formula.body, formula.variable, config, quantifiers
        )
    return Meaning(formula, functions, initial)


def verdict_lines(label: str, verdict: Verdict) -> list[str]:
    """``<label> HOLDS cases=<k>`` or ``<label> FAILS`` with its counterexample block."""
    if verdict.holds:
        lines = [f"{label} HOLDS cases={verdict.cases}"]
    else:
        lines = [f"{label} FAILS"]
        if verdict.counterexample is not None:
            lines.append(format_counterexample(verdict.counterexample).rstrip("\n"))
        if verdict.reason:
            lines.append(f"# reason: {verdict.reason}")
    if verdict.witness is not None:
        lines.append("# witness")
        lines.extend(
            f"# {line}" for line in format_counterexample(verdict.witness).rstrip("\n").splitlines()
        )
    lines.extend(f"# {note}" for note in verdict.notes)
    return lines


def verdict_payload(verdict: Verdict) -> dict:
    return {
        "name": verdict.name,
        "status": str(verdict.status),
        "cases": verdict.cases,
        "reason": verdict.reason,
        "notes": list(verdict.notes),
        "counterexample": (
            format_counterexample(verdict.counterexample) if verdict.counterexample else None
        ),
        "witness": format_counterexample(verdict.witness) if verdict.witness else None,
    }


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def quantifier_info(name: str, size: int, quantifiers: QuantifierRegistry) -> dict:
    """Localized table and property flags of a named quantifier on a size-``size`` domain.

    Team quantifiers are probed on the full team over one variable.
    """
    structure = Structure(canonical_domain(size))
    try:
        quantifier = quantifiers.mostowski(name)
    except UnknownQuantifierError:
        quantifier = None
    if quantifier is not None:
        return {
            "name": name,
            "kind": "mostowski",
            "size": size,
            "table": format_mostowski(quantifier, size),
            "properties": {
                "monotone": _yes(is_monotone_on(quantifier, structure)),
                "union_closed": _yes(is_union_closed_on(quantifier, structure)),
                "emptyset_free": _yes(is_emptyset_free_on(quantifier, structure)),
            },
        }
    team_quantifier = quantifiers.team(name)
    team = Team.of({"x"}, [{"x": a} for a in structure.domain])
    checks = {
        "team_monotone": team_monotone_on,
        "permutation_invariant": permutation_invariant_on,
        "isomorphism_invariant": isomorphism_invariant_on,
        "cardinality": cardinality_condition_on,
        "quality": quality_condition_on,
    }
    properties = {}
    exhaustive = True
    for label, check in checks.items():
        result = check(team_quantifier, structure, team, DEFAULT_FAMILY_SAMPLES)
        properties[label] = _yes(result.holds)
        exhaustive = exhaustive and result.exhaustive
    return {
        "name": name,
        "kind": "team",
        "size": size,
        "description": team_quantifier.description,
        "exhaustive": exhaustive,
        "properties": properties,
    }


def quantifier_names(quantifiers: QuantifierRegistry) -> dict:
    return {
        "mostowski": quantifiers.mostowski_names(),
        "team": quantifiers.team_names(),
        "parametric": [
            "exactly<k>",
            "atleast<k>",
            "atmost<k>",
            "liftE_<q>",
            "liftB_<q>",
            "liftBprime_<q>",
            "hat_exactly<k>",
            "hat_exactly_nm<k>",
            "hat_exactly_b<k>",
            "count_functions<k>",
            "count_functions_nonempty<k>",
        ],
    }
