"""Rewrite calculus for IF(Q): renaming, regularization, extraction, slash
elimination, quantifier swapping, prenex form and the primality reduction.

Every rule works on the occurrence at ``path`` and returns a ``RewriteStep``
with the whole rewritten formula and the modulus Z of the claimed
Z-equivalence. Side conditions that depend on the quantifier (emptyset-freeness,
nonvoidness) are certified on domains up to ``size`` only.
"""

import logging
from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace
from enum import StrEnum

from .exceptions import FragmentError, RewriteError, RuleNotApplicable
from .quantifiers import QuantifierRegistry, is_emptyset_free_up_to, is_nonvoid_up_to
from .syntax import (
    And,
    Formula,
    Or,
    Path,
    Quant,
    QuantKind,
    ancestors,
    bound_variables,
    format_path,
    format_varset,
    free_variables,
    fresh_variables,
    is_first_order,
    is_prenex,
    is_regular,
    is_sentence,
    is_slash_free,
    map_slash_sets,
    quantifier_nodes,
    replace_occurrence,
    slash_all,
    slash_nonempty,
    slash_sets,
    subformula_at,
    substitute,
    to_text,
    variables,
    walk,
)

logger = logging.getLogger(__name__)

DEFAULT_CERTIFICATION_SIZE = 3
DEFAULT_PRIMALITY_DEPTH = 32
ORACLE_ONLY = "verified by search only, no derivation"
# Equivalence holds for the enclosing formula, not for the occurrence alone.
WHOLE_FORMULA_RULES = frozenset({"drop_existential_slashes"})


class Claim(StrEnum):
    EQUIVALENCE = "equivalence"
    ENTAILMENT = "entailment"


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    path: Path
    source: Formula
    result: Formula
    formula: Formula
    modulus: frozenset[str] = frozenset()
    claim: Claim = Claim.EQUIVALENCE
    note: str = ""
    original: Formula | None = None

    def __post_init__(self):
        clash = self.modulus & (free_variables(self.source) | free_variables(self.result))
        if clash:
            raise RewriteError(
                f"{self.rule}: modulus {format_varset(clash)} meets the free variables"
            )

    def __str__(self):
        line = f"RULE {self.rule} AT {format_path(self.path)} Z={format_varset(self.modulus)}"
        if self.claim == Claim.ENTAILMENT:
            line += " ENTAILS"
        return line


@dataclass(frozen=True)
class Rewrite:
    formula: Formula
    modulus: frozenset[str] = frozenset()
    steps: tuple[RewriteStep, ...] = ()

    def then(self, step: RewriteStep) -> "Rewrite":
        return Rewrite(step.formula, self.modulus | step.modulus, self.steps + (step,))


@dataclass(frozen=True)
class Context:
    """Everything a rule needs besides the formula: quantifier lookup and certification size."""

    registry: QuantifierRegistry = field(default_factory=QuantifierRegistry.builtin)
    size: int = DEFAULT_CERTIFICATION_SIZE
    bounded: bool = False


DEFAULT_CONTEXT = Context()


def _step(
    rule: str,
    formula: Formula,
    path: Path,
    result: Formula,
    modulus: Iterable[str] = (),
    claim: Claim = Claim.EQUIVALENCE,
    note: str = "",
) -> RewriteStep:
    source = subformula_at(formula, path)
    whole = replace_occurrence(formula, path, result)
    step = RewriteStep(
        rule, path, source, result, whole, frozenset(modulus), claim, note, original=formula
    )
    logger.debug("%s: %s => %s", step, to_text(source), to_text(result))
    return step


def _node(formula: Formula, path: Path, kind: type) -> Formula:
    node = subformula_at(formula, path)
    if not isinstance(node, kind):
        raise RuleNotApplicable(f"no {kind.__name__} at {format_path(path)}")
    return node


def _plain_quantifier(node: Formula) -> Quant:
    """A quantifier the calculus can move: no backslash, no team quantifier."""
    if not isinstance(node, Quant):
        raise RuleNotApplicable(f"{to_text(node)} is not a quantifier")
    if node.kind == QuantKind.TEAM or node.backslash:
        raise FragmentError(f"rewrite rules take no team or backslashed quantifiers: {to_text(node)}")
    return node


def _reject_fragment(formula: Formula) -> None:
    for _, node in quantifier_nodes(formula):
        _plain_quantifier(node)


def emptyset_free(node: Quant, context: Context) -> bool:
    match node.kind:
        case QuantKind.EXISTS | QuantKind.FORALL:
            return True
        case QuantKind.MOSTOWSKI:
            return is_emptyset_free_up_to(context.registry.mostowski(node.name), context.size)
    return False


def nonvoid(node: Quant, context: Context) -> bool:
    if node.kind == QuantKind.MOSTOWSKI:
        return is_nonvoid_up_to(context.registry.mostowski(node.name), context.size)
    return True


def _require_extractable(node: Quant, context: Context, slashed: bool) -> None:
    if not nonvoid(node, context):
        raise RuleNotApplicable(
            f"{node.head.symbol} accepts no subset on some domain of size <= {context.size}"
        )
    if slashed and not emptyset_free(node, context):
        raise RuleNotApplicable(
            f"{node.head.symbol} is not emptyset-free; a slashed connective cannot absorb it"
        )


def _split_sides(node: And | Or, side: str) -> tuple[Quant, Formula]:
    if side == "left":
        return _plain_quantifier(node.left), node.right
    if side == "right":
        return _plain_quantifier(node.right), node.left
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def _join(kind: type, quantified: Formula, other: Formula, side: str, slash: frozenset) -> Formula:
    if side == "left":
        return kind(quantified, other, slash)
    return kind(other, quantified, slash)


# --- renaming and regularization ---------------------------------------------


def rename_bound(
    formula: Formula, path: Path, new: str, variant: str | None = None
) -> RewriteStep:
    """(Qx/V)ψ ≡_{xz} (Qz/V)ψ[z/x] when x is not bound in ψ and x ∉ V (variant a),
    (Qx/V)ψ ≡_z (Qz/V)(ψ[z/x]_{/x}) in general (variant b)."""
    node = _plain_quantifier(subformula_at(formula, path))
    old = node.variable
    if new in variables(node):
        raise RuleNotApplicable(f"{new} occurs in {to_text(node)}")
    simple = old not in bound_variables(node.body) and old not in node.slash
    if variant is None:
        variant = "a" if simple else "b"
    if variant == "a":
        if not simple:
            raise RuleNotApplicable(f"{old} is rebound in the body or slashed")
        result = replace(node, variable=new, body=substitute(node.body, old, new))
        return _step("rename_bound_a", formula, path, result, {old, new})
    if variant == "b":
        result = replace(
            node, variable=new, body=slash_all(substitute(node.body, old, new), {old})
        )
        return _step("rename_bound_b", formula, path, result, {new})
    raise ValueError(f"unknown renaming variant {variant!r}")


def strong_regularize(formula: Formula, avoid: Iterable[str] = ()) -> Rewrite:
    """Rename every bound variable apart, innermost first, to v1, v2, …"""
    _reject_fragment(formula)
    rewrite = Rewrite(formula)
    taken = set(variables(formula)) | set(avoid)
    supply = fresh_variables(taken)
    paths = [path for path, _ in quantifier_nodes(formula)]
    for path in reversed(paths):
        current = rewrite.formula
        node = subformula_at(current, path)
        scoped = any(
            isinstance(above, Quant) and above.variable == node.variable
            for _, above in ancestors(current, path)
        )
        variant = (
            "a"
            if node.variable not in free_variables(current)
            and node.variable not in node.slash
            and not scoped
            else "b"
        )
        rewrite = rewrite.then(rename_bound(current, path, next(supply), variant))
    return rewrite


# --- extraction --------------------------------------------------------------


def weak_extract(
    formula: Formula, path: Path, side: str = "left", context: Context = DEFAULT_CONTEXT
) -> RewriteStep:
    """(Qv/V)ψ ∨_{/W} χ ≡_v (Qv/V)(ψ ∨_{/Wv} χ_{/v}) for v not occurring in χ, V, W."""
    node = _node(formula, path, Or)
    quantifier, other = _split_sides(node, side)
    v = quantifier.variable
    if v in variables(other) | quantifier.slash | node.slash:
        raise RuleNotApplicable(f"{v} occurs in the other disjunct or a slash set")
    _require_extractable(quantifier, context, bool(node.slash))
    body = _join(Or, quantifier.body, slash_all(other, {v}), side, node.slash | {v})
    return _step("weak_extract", formula, path, replace(quantifier, body=body), {v})


def extract_conjunction(
    formula: Formula, path: Path, side: str = "left", context: Context = DEFAULT_CONTEXT
) -> RewriteStep:
    """(Qv/V)ψ ∧_{/W} χ ≡_v (Qv/V)(ψ ∧_{/W} χ_{/v}) for emptyset-free Q."""
    node = _node(formula, path, And)
    quantifier, other = _split_sides(node, side)
    v = quantifier.variable
    if v in variables(other) | quantifier.slash | node.slash:
        raise RuleNotApplicable(f"{v} occurs in the other conjunct or a slash set")
    if not emptyset_free(quantifier, context):
        raise RuleNotApplicable(f"{quantifier.head.symbol} is not emptyset-free")
    body = _join(And, quantifier.body, slash_all(other, {v}), side, node.slash)
    return _step(
        "extract_conjunction", formula, path, replace(quantifier, body=body), {v}, note=ORACLE_ONLY
    )


def strong_extract(
    formula: Formula, path: Path, side: str = "left", context: Context = DEFAULT_CONTEXT
) -> RewriteStep:
    """(Qv/V)ψ ∨ χ ≡_v (Qv/V)(ψ ∨ χ|_v); with a first-order node, Z = ∅."""
    node = _node(formula, path, Or)
    if node.slash:
        raise RuleNotApplicable("strong extraction takes an unslashed disjunction")
    quantifier, other = _split_sides(node, side)
    v = quantifier.variable
    if v in variables(other) | quantifier.slash:
        raise RuleNotApplicable(f"{v} occurs in the other disjunct or the slash set")
    _require_extractable(quantifier, context, False)
    body = _join(Or, quantifier.body, slash_nonempty(other, {v}), side, frozenset())
    if is_first_order(node):
        return _step("classical_extract", formula, path, replace(quantifier, body=body))
    return _step("strong_extract", formula, path, replace(quantifier, body=body), {v})


# --- slash elimination -------------------------------------------------------


def _unslash(formula: Formula, v: str) -> Formula | None:
    """χ when ``formula`` is χ_{/v} for some χ without v, otherwise None."""
    if any(v not in slash for _, slash in slash_sets(formula)):
        return None
    stripped = map_slash_sets(formula, lambda slash: slash - {v})
    if v in variables(stripped):
        return None
    return stripped


def _slash_elimination_shape(node: Quant) -> tuple[Or, frozenset[str]]:
    body = node.body
    v = node.variable
    if not isinstance(body, Or) or v not in body.slash:
        raise RuleNotApplicable(f"expected a disjunction slashed by {v} under the quantifier")
    if _unslash(body.right, v) is None:
        raise RuleNotApplicable(f"the right disjunct is not of the form χ_{{/{v}}}")
    return body, body.slash - {v}


def slash_elim_R(formula: Formula, path: Path) -> RewriteStep:
    """(Rv/V)(ψ ∨_{/v} χ_{/v}) ≡_v (Rv/V)(ψ ∨ χ_{/v}) for v not in χ nor V."""
    node = _plain_quantifier(subformula_at(formula, path))
    body, rest = _slash_elimination_shape(node)
    if rest:
        raise RuleNotApplicable("the disjunction is slashed by more than the bound variable")
    if node.variable in node.slash:
        raise RuleNotApplicable(f"{node.variable} occurs in the quantifier's slash set")
    result = replace(node, body=replace(body, slash=frozenset()))
    return _step("slash_elim_R", formula, path, result, {node.variable})


def slash_elim_exists(formula: Formula, path: Path) -> RewriteStep:
    """(∃v/V)(ψ ∨_{/Wv} χ_{/v}) ≡_v (∃v/V)(ψ ∨_{/W} χ_{/v}) for W ⊆ V, v ∉ V."""
    node = _plain_quantifier(subformula_at(formula, path))
    if node.kind != QuantKind.EXISTS:
        raise RuleNotApplicable("slash_elim_exists takes an existential quantifier")
    body, rest = _slash_elimination_shape(node)
    if node.variable in node.slash or not rest <= node.slash:
        raise RuleNotApplicable("needs W ⊆ V and the bound variable outside V")
    result = replace(node, body=replace(body, slash=rest))
    return _step("slash_elim_exists", formula, path, result, {node.variable})


def slash_elim_forall(formula: Formula, path: Path) -> RewriteStep:
    """(∀v/V)(ψ ∨_{/Wv} χ_{/v}) ≡_v (∀v/V)(ψ ∨_{/W} χ_{/v})."""
    node = _plain_quantifier(subformula_at(formula, path))
    if node.kind != QuantKind.FORALL:
        raise RuleNotApplicable("slash_elim_forall takes a universal quantifier")
    body, rest = _slash_elimination_shape(node)
    result = replace(node, body=replace(body, slash=rest))
    return _step("slash_elim_forall", formula, path, result, {node.variable})


def verticalize(formula: Formula, path: Path, v: str) -> RewriteStep:
    """ψ_{/v} ≡ ψ|_v for v not occurring in ψ; applied in whichever direction matches."""
    node = subformula_at(formula, path)
    _reject_fragment(node)
    sets = [slash for _, slash in slash_sets(node)]
    stripped = map_slash_sets(node, lambda slash: slash - {v})
    if v in variables(stripped):
        raise RuleNotApplicable(f"{v} occurs outside the slash sets")
    if sets and all(v in slash for slash in sets):
        result = map_slash_sets(node, lambda slash: frozenset() if slash == {v} else slash)
    elif all(v in slash for slash in sets if slash):
        result = map_slash_sets(node, lambda slash: slash or frozenset({v}))
    else:
        raise RuleNotApplicable(f"the slash sets are neither all nor all-nonempty slashed by {v}")
    return _step("verticalize", formula, path, result)


# --- swapping and slash dropping ---------------------------------------------

_SWAPPABLE = (QuantKind.EXISTS, QuantKind.MOSTOWSKI)


def swap_quantifiers(
    formula: Formula, path: Path, context: Context = DEFAULT_CONTEXT
) -> RewriteStep:
    """(R u/U)(S v/Vu)ψ ≡_{uv} (S v/V)(R u/Uv)ψ.

    The forward entailment needs R emptyset-free or S nonvoid, the backward
    one S emptyset-free or R nonvoid. With only the forward one certified the
    step is kept as an entailment claim (before ⊨ after) and a warning is
    logged. Never offered under bounded semantics.
    """
    if context.bounded:
        raise RuleNotApplicable("quantifier swapping is unsound under bounded semantics")
    outer = _plain_quantifier(subformula_at(formula, path))
    inner = _plain_quantifier(outer.body)
    u, v = outer.variable, inner.variable
    if outer.kind not in _SWAPPABLE or inner.kind not in _SWAPPABLE:
        raise RuleNotApplicable("only existential and Mostowski quantifiers swap")
    if u == v or u not in inner.slash or v in outer.slash:
        raise RuleNotApplicable(f"the inner slash set must contain {u} and {v} must be free of the outer one")
    forward = emptyset_free(outer, context) or nonvoid(inner, context)
    backward = emptyset_free(inner, context) or nonvoid(outer, context)
    if not forward:
        raise RuleNotApplicable(
            f"{outer.head.symbol} admits the empty set and {inner.head.symbol} is void "
            f"on some domain of size <= {context.size}"
        )
    claim = Claim.EQUIVALENCE if backward else Claim.ENTAILMENT
    if claim == Claim.ENTAILMENT:
        logger.warning(
            "swap at %s downgraded to an entailment: %s is not emptyset-free up to size %d",
            format_path(path),
            inner.head.symbol,
            context.size,
        )
    result = replace(
        inner,
        slash=inner.slash - {u},
        body=replace(outer, slash=outer.slash | {v}, body=inner.body),
    )
    return _step("swap", formula, path, result, {u, v}, claim)


def _nearest_binder(formula: Formula, path: Path, variable: str) -> Quant | None:
    for _, above in reversed(ancestors(formula, path)):
        if isinstance(above, Quant) and above.variable == variable:
            return above
    return None


def drop_existential_slashes(formula: Formula, path: Path) -> RewriteStep:
    """Empty a slash set all of whose variables are bound by an enclosing ∃."""
    node = _plain_quantifier(subformula_at(formula, path))
    if not node.slash:
        raise RuleNotApplicable("the slash set is already empty")
    for variable in node.slash:
        binder = _nearest_binder(formula, path, variable)
        if binder is None or binder.kind != QuantKind.EXISTS:
            raise RuleNotApplicable(f"{variable} is not existentially quantified above")
    return _step("drop_existential_slashes", formula, path, replace(node, slash=frozenset()))


def drop_universal_slashes(formula: Formula, path: Path) -> RewriteStep:
    """(∀v/V)ψ ≡ ∀vψ and ψ ∧_{/W} χ ≡ ψ ∧ χ."""
    node = subformula_at(formula, path)
    match node:
        case Quant(kind=QuantKind.FORALL, backslash=False, slash=slash) if slash:
            pass
        case And(slash=slash) if slash:
            pass
        case _:
            raise RuleNotApplicable("expected a slashed universal quantifier or conjunction")
    return _step("drop_universal_slashes", formula, path, replace(node, slash=frozenset()))


# --- normal forms ------------------------------------------------------------


def _first_extraction(formula: Formula) -> tuple[Path, Formula, str] | None:
    for path, node in walk(formula):
        if isinstance(node, (And, Or)):
            for side, child in (("left", node.left), ("right", node.right)):
                if isinstance(child, Quant):
                    return path, node, side
    return None


def prenexify(
    formula: Formula, context: Context = DEFAULT_CONTEXT
) -> Rewrite:
    """Strongly regularize, then pull quantifiers out leftmost-outermost."""
    _reject_fragment(formula)
    rewrite = strong_regularize(formula)
    supply = fresh_variables(variables(formula) | variables(rewrite.formula))
    while (target := _first_extraction(rewrite.formula)) is not None:
        path, node, side = target
        extract = weak_extract if isinstance(node, Or) else extract_conjunction
        try:
            step = extract(rewrite.formula, path, side, context)
        except RuleNotApplicable:
            quantifier, other = _split_sides(node, side)
            if quantifier.variable not in variables(other) | quantifier.slash | node.slash:
                raise
            child = path + ((0,) if side == "left" else (1,))
            rewrite = rewrite.then(rename_bound(rewrite.formula, child, next(supply), "b"))
            continue
        rewrite = rewrite.then(step)
    return rewrite


@dataclass(frozen=True)
class PrimalityOutcome:
    reduced: bool
    formula: Formula
    steps: tuple[RewriteStep, ...] = ()
    explored: int = 0

    @property
    def status(self) -> str:
        return "reduced" if self.reduced else "stuck"


def _primality_moves(formula: Formula, context: Context) -> Iterable[RewriteStep]:
    for path, node in walk(formula):
        if isinstance(node, Quant):
            if node.slash and node.kind != QuantKind.FORALL:
                try:
                    yield drop_existential_slashes(formula, path)
                except RuleNotApplicable:
                    pass
            if not context.bounded and isinstance(node.body, Quant):
                try:
                    step = swap_quantifiers(formula, path, context)
                except RuleNotApplicable:
                    step = None
                if step is not None and step.claim == Claim.EQUIVALENCE:
                    yield step
        if isinstance(node, (Quant, And)) and node.slash:
            try:
                yield drop_universal_slashes(formula, path)
            except RuleNotApplicable:
                pass


def _slashed_count(formula: Formula) -> int:
    return sum(1 for _, slash in slash_sets(formula) if slash)


def primality_reduce(
    formula: Formula,
    context: Context = DEFAULT_CONTEXT,
    depth: int = DEFAULT_PRIMALITY_DEPTH,
) -> PrimalityOutcome:
    """Breadth-first search for a slash-free equivalent using swapping and the two drops."""
    if not (is_regular(formula) and is_prenex(formula) and is_sentence(formula)):
        raise RewriteError("primality reduction takes a regular prenex sentence")
    _reject_fragment(formula)
    queue: deque[tuple[Formula, tuple[RewriteStep, ...]]] = deque([(formula, ())])
    seen = {to_text(formula)}
    best = (formula, ())
    while queue:
        current, steps = queue.popleft()
        if is_slash_free(current):
            logger.debug("primality: reduced after %d steps", len(steps))
            return PrimalityOutcome(True, current, steps, len(seen))
        if _slashed_count(current) < _slashed_count(best[0]):
            best = (current, steps)
        if len(steps) >= depth:
            continue
        for step in _primality_moves(current, context):
            key = to_text(step.formula)
            if key not in seen:
                seen.add(key)
                queue.append((step.formula, steps + (step,)))
    logger.debug("primality: stuck after exploring %d formulas", len(seen))
    return PrimalityOutcome(False, best[0], best[1], len(seen))


# --- dispatch ----------------------------------------------------------------

Rule = Callable[..., RewriteStep]

RULES: dict[str, Rule] = {
    "rename_bound": rename_bound,
    "weak_extract": weak_extract,
    "extract_conjunction": extract_conjunction,
    "strong_extract": strong_extract,
    "slash_elim_R": slash_elim_R,
    "slash_elim_exists": slash_elim_exists,
    "slash_elim_forall": slash_elim_forall,
    "verticalize": verticalize,
    "swap": swap_quantifiers,
    "drop_existential_slashes": drop_existential_slashes,
    "drop_universal_slashes": drop_universal_slashes,
}

_CONTEXT_RULES = {"weak_extract", "extract_conjunction", "strong_extract", "swap"}


def apply_rule(
    name: str,
    formula: Formula,
    path: Path = (),
    context: Context = DEFAULT_CONTEXT,
    **options,
) -> RewriteStep:
    try:
        rule = RULES[name]
    except KeyError:
        raise RewriteError(f"unknown rule {name!r}; known: {', '.join(sorted(RULES))}") from None
    if name in _CONTEXT_RULES:
        options["context"] = context
    return rule(formula, path, **options)
