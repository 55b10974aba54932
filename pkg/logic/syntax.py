"""Abstract syntax of IF*/DF formulas with generalized quantifiers.

Formulas are immutable trees. An occurrence of a subformula is addressed by a
path, the tuple of child indices leading to it from the root (the body of a
quantifier is child 0, the operands of a connective are children 0 and 1).
"""

import itertools
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, replace
from enum import StrEnum

from .exceptions import FormulaError

Path = tuple[int, ...]


class QuantKind(StrEnum):
    EXISTS = "E"
    FORALL = "A"
    MOSTOWSKI = "Q"
    TEAM = "TQ"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return f"#{self.name}"


Term = Var | Const


class Formula:
    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    relation: str
    terms: tuple[Term, ...]
    negated: bool = False


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term
    negated: bool = False


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    slash: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    slash: frozenset[str] = frozenset()


@dataclass(frozen=True)
class QuantHead:
    kind: QuantKind
    variable: str
    slash: frozenset[str] = frozenset()
    backslash: bool = False
    name: str | None = None

    def wrap(self, body: Formula) -> "Quant":
        return Quant(self.kind, self.variable, body, self.slash, self.backslash, self.name)

    @property
    def symbol(self) -> str:
        if self.kind in (QuantKind.MOSTOWSKI, QuantKind.TEAM):
            return f"{self.kind}.{self.name}"
        return str(self.kind)


@dataclass(frozen=True)
class Quant(Formula):
    kind: QuantKind
    variable: str
    body: Formula
    slash: frozenset[str] = frozenset()
    backslash: bool = False
    name: str | None = None

    @property
    def head(self) -> QuantHead:
        return QuantHead(self.kind, self.variable, self.slash, self.backslash, self.name)


Connective = And | Or
Literal = Atom | Eq


def exists(variable, body, slash=(), backslash=False) -> Quant:
    return Quant(QuantKind.EXISTS, variable, body, frozenset(slash), backslash)


def forall(variable, body, slash=(), backslash=False) -> Quant:
    return Quant(QuantKind.FORALL, variable, body, frozenset(slash), backslash)


def mostowski(name, variable, body, slash=(), backslash=False) -> Quant:
    return Quant(QuantKind.MOSTOWSKI, variable, body, frozenset(slash), backslash, name)


def team_quantifier(name, variable, body, slash=()) -> Quant:
    return Quant(QuantKind.TEAM, variable, body, frozenset(slash), False, name)


@dataclass(frozen=True)
class QuantifierPrefix:
    prefix: tuple[QuantHead, ...]
    matrix: Formula

    def build(self) -> Formula:
        formula = self.matrix
        for head in reversed(self.prefix):
            formula = head.wrap(formula)
        return formula


def split_prefix(formula: Formula) -> QuantifierPrefix:
    heads = []
    while isinstance(formula, Quant):
        heads.append(formula.head)
        formula = formula.body
    return QuantifierPrefix(tuple(heads), formula)


# --- traversal -------------------------------------------------------------


def children(formula: Formula) -> tuple[Formula, ...]:
    match formula:
        case And(left, right) | Or(left, right):
            return (left, right)
        case Quant(body=body):
            return (body,)
    return ()


def with_children(formula: Formula, new: tuple[Formula, ...]) -> Formula:
    match formula:
        case And() | Or():
            return replace(formula, left=new[0], right=new[1])
        case Quant():
            return replace(formula, body=new[0])
    return formula


def walk(formula: Formula, path: Path = ()) -> Iterator[tuple[Path, Formula]]:
    """Pre-order traversal yielding every occurrence with its path."""
    yield path, formula
    for index, child in enumerate(children(formula)):
        yield from walk(child, path + (index,))


def subformula_at(formula: Formula, path: Path) -> Formula:
    node = formula
    for index in path:
        kids = children(node)
        if index >= len(kids):
            raise FormulaError(f"path {list(path)} does not address an occurrence")
        node = kids[index]
    return node


def replace_occurrence(formula: Formula, path: Path, replacement: Formula) -> Formula:
    """φ(θ/χ) for the occurrence χ at ``path``."""
    if not path:
        return replacement
    kids = list(children(formula))
    head, *rest = path
    if head >= len(kids):
        raise FormulaError(f"path {list(path)} does not address an occurrence")
    kids[head] = replace_occurrence(kids[head], tuple(rest), replacement)
    return with_children(formula, tuple(kids))


def ancestors(formula: Formula, path: Path) -> list[tuple[Path, Formula]]:
    """Occurrences strictly above ``path``, outermost first."""
    result = []
    node = formula
    for depth, index in enumerate(path):
        result.append((path[:depth], node))
        node = subformula_at(node, (index,))
    return result


# --- variables -------------------------------------------------------------


def term_variables(terms: Iterable[Term]) -> set[str]:
    return {term.name for term in terms if isinstance(term, Var)}


def free_variables(formula: Formula) -> frozenset[str]:
    match formula:
        case Atom(terms=terms):
            return frozenset(term_variables(terms))
        case Eq(left, right):
            return frozenset(term_variables((left, right)))
        case And(left, right, slash) | Or(left, right, slash):
            return free_variables(left) | free_variables(right) | slash
        case Quant(variable=variable, body=body, slash=slash):
            return (free_variables(body) - {variable}) | slash
    raise FormulaError(f"not a formula: {formula!r}")


def variables(formula: Formula) -> frozenset[str]:
    """Every variable occurring anywhere, slash sets included."""
    found: set[str] = set()
    for _, node in walk(formula):
        match node:
            case Atom(terms=terms):
                found |= term_variables(terms)
            case Eq(left, right):
                found |= term_variables((left, right))
            case And(slash=slash) | Or(slash=slash):
                found |= slash
            case Quant(variable=variable, slash=slash):
                found |= slash | {variable}
    return frozenset(found)


def bound_variables(formula: Formula) -> frozenset[str]:
    return frozenset(
        node.variable for _, node in walk(formula) if isinstance(node, Quant)
    )


def quantifier_nodes(formula: Formula) -> Iterator[tuple[Path, Quant]]:
    for path, node in walk(formula):
        if isinstance(node, Quant):
            yield path, node


def constants(formula: Formula) -> frozenset[str]:
    found = set()
    for _, node in walk(formula):
        match node:
            case Atom(terms=terms):
                found |= {t.name for t in terms if isinstance(t, Const)}
            case Eq(left, right):
                found |= {t.name for t in (left, right) if isinstance(t, Const)}
    return frozenset(found)


def relation_arities(formula: Formula) -> dict[str, int]:
    arities: dict[str, int] = {}
    for _, node in walk(formula):
        if isinstance(node, Atom):
            known = arities.setdefault(node.relation, len(node.terms))
            if known != len(node.terms):
                raise FormulaError(f"{node.relation} is used with two arities")
    return arities


def quantifier_names(formula: Formula, kind: QuantKind) -> frozenset[str]:
    return frozenset(
        node.name for _, node in quantifier_nodes(formula) if node.kind == kind
    )


def fresh_variables(avoid: Iterable[str], stem: str = "v") -> Iterator[str]:
    """v1, v2, … skipping everything in ``avoid``."""
    taken = set(avoid)
    for index in itertools.count(1):
        candidate = f"{stem}{index}"
        if candidate not in taken:
            yield candidate


# --- syntactic classes -----------------------------------------------------


def is_first_order(formula: Formula) -> bool:
    for _, node in walk(formula):
        match node:
            case And(slash=slash) | Or(slash=slash) if slash:
                return False
            case Quant(kind=QuantKind.TEAM):
                return False
            case Quant(slash=slash, backslash=backslash) if slash or backslash:
                return False
    return True


def is_sentence(formula: Formula) -> bool:
    return not free_variables(formula)


def has_backslash(formula: Formula) -> bool:
    return any(node.backslash for _, node in quantifier_nodes(formula))


def has_team_quantifier(formula: Formula) -> bool:
    return any(node.kind == QuantKind.TEAM for _, node in quantifier_nodes(formula))


def _rebinds(formula: Formula, scope: frozenset[str]) -> bool:
    match formula:
        case Quant(variable=variable, body=body):
            if variable in scope:
                return True
            return _rebinds(body, scope | {variable})
    return any(_rebinds(child, scope) for child in children(formula))


def is_regular(formula: Formula) -> bool:
    """No variable both bound and free, and no quantifier rebinding a variable in scope."""
    if bound_variables(formula) & free_variables(formula):
        return False
    return not _rebinds(formula, frozenset())


def is_strongly_regular(formula: Formula) -> bool:
    quantified = [node.variable for _, node in quantifier_nodes(formula)]
    return is_regular(formula) and len(quantified) == len(set(quantified))


def is_prenex(formula: Formula) -> bool:
    matrix = split_prefix(formula).matrix
    return not any(isinstance(node, Quant) for _, node in walk(matrix))


def is_slash_free(formula: Formula) -> bool:
    for _, node in walk(formula):
        if isinstance(node, (And, Or, Quant)) and node.slash:
            return False
    return True


# --- transformations -------------------------------------------------------


def _substitute_term(term: Term, old: str, new: str) -> Term:
    if isinstance(term, Var) and term.name == old:
        return Var(new)
    return term


def _substitute_set(names: frozenset[str], old: str, new: str) -> frozenset[str]:
    if old in names:
        return (names - {old}) | {new}
    return names


def _substitute(formula: Formula, old: str, new: str) -> Formula:
    match formula:
        case Atom(terms=terms):
            return replace(formula, terms=tuple(_substitute_term(t, old, new) for t in terms))
        case Eq(left, right):
            return replace(
                formula,
                left=_substitute_term(left, old, new),
                right=_substitute_term(right, old, new),
            )
        case And(left, right, slash) | Or(left, right, slash):
            return replace(
                formula,
                left=_substitute(left, old, new),
                right=_substitute(right, old, new),
                slash=_substitute_set(slash, old, new),
            )
        case Quant(variable=variable, body=body, slash=slash):
            slash = _substitute_set(slash, old, new)
            if variable == old:
                return replace(formula, slash=slash)
            return replace(formula, slash=slash, body=_substitute(body, old, new))
    raise FormulaError(f"not a formula: {formula!r}")


def substitute(formula: Formula, old: str, new: str) -> Formula:
    """ψ[z/x]: replace the free occurrences of ``old``, slash sets included."""
    if new in variables(formula):
        raise FormulaError(f"{new} occurs in the formula")
    return _substitute(formula, old, new)


def _map_slash_sets(formula: Formula, update: Callable[[frozenset], frozenset]) -> Formula:
    match formula:
        case Atom() | Eq():
            return formula
        case And(left, right, slash) | Or(left, right, slash):
            return replace(
                formula,
                left=_map_slash_sets(left, update),
                right=_map_slash_sets(right, update),
                slash=update(slash),
            )
        case Quant(body=body, slash=slash, backslash=backslash):
            # dependence sets of backslashed quantifiers are not slash sets
            return replace(
                formula,
                body=_map_slash_sets(body, update),
                slash=slash if backslash else update(slash),
            )
    raise FormulaError(f"not a formula: {formula!r}")


def slash_all(formula: Formula, extra: Iterable[str]) -> Formula:
    """ψ_{/V}: add V to every slash set."""
    extra = frozenset(extra)
    if not extra:
        return formula
    return _map_slash_sets(formula, lambda slash: slash | extra)


def slash_nonempty(formula: Formula, extra: Iterable[str]) -> Formula:
    """ψ|_V: add V to every nonempty slash set."""
    extra = frozenset(extra)
    if not extra:
        return formula
    return _map_slash_sets(formula, lambda slash: slash | extra if slash else slash)


def map_slash_sets(formula: Formula, update: Callable[[frozenset], frozenset]) -> Formula:
    return _map_slash_sets(formula, update)


def slash_sets(formula: Formula) -> Iterator[tuple[Path, frozenset[str]]]:
    """The slash set of every connective and slashed quantifier occurrence."""
    for path, node in walk(formula):
        if isinstance(node, (And, Or)) or (isinstance(node, Quant) and not node.backslash):
            yield path, node.slash


def retarget_quantifiers(
    formula: Formula, kind: QuantKind, target: Callable[[Quant], Quant]
) -> Formula:
    """Replace every quantifier occurrence of ``kind`` by ``target(occurrence)``."""
    new_children = tuple(retarget_quantifiers(c, kind, target) for c in children(formula))
    rebuilt = with_children(formula, new_children)
    if isinstance(rebuilt, Quant) and rebuilt.kind == kind:
        return target(rebuilt)
    return rebuilt


def negate_quantifier_free(formula: Formula) -> Formula:
    """Push a negation through a quantifier-free first-order formula."""
    match formula:
        case Atom(negated=negated) | Eq(negated=negated):
            return replace(formula, negated=not negated)
        case And(left, right, slash) if not slash:
            return Or(negate_quantifier_free(left), negate_quantifier_free(right))
        case Or(left, right, slash) if not slash:
            return And(negate_quantifier_free(left), negate_quantifier_free(right))
    raise FormulaError("only quantifier-free first-order formulas can be negated")


def biconditional(left: Formula, right: Formula) -> Formula:
    """(α ∧ β) ∨ (¬α ∧ ¬β)."""
    return Or(
        And(left, right),
        And(negate_quantifier_free(left), negate_quantifier_free(right)),
    )


# --- printing --------------------------------------------------------------


def format_varset(names: Iterable[str]) -> str:
    return "{" + ",".join(sorted(names)) + "}"


def to_text(formula: Formula) -> str:
    match formula:
        case Atom(relation, terms, negated):
            text = f"{relation}({','.join(map(str, terms))})"
            return f"~{text}" if negated else text
        case Eq(left, right, negated):
            return f"{left} {'!=' if negated else '='} {right}"
        case And(left, right, slash) | Or(left, right, slash):
            operator = "&" if isinstance(formula, And) else "|"
            if slash:
                operator = f"{operator}/{format_varset(slash)}"
            return f"({to_text(left)} {operator} {to_text(right)})"
        case Quant():
            head = f"{formula.head.symbol} {formula.variable}"
            if formula.backslash:
                head = f"{head}\\{format_varset(formula.slash)}"
            elif formula.slash:
                head = f"{head}/{format_varset(formula.slash)}"
            return f"({head}) {to_text(formula.body)}"
    raise FormulaError(f"not a formula: {formula!r}")


def format_path(path: Path) -> str:
    return ".".join(map(str, path)) if path else "root"


def parse_path(text: str) -> Path:
    if text in ("", "root"):
        return ()
    try:
        return tuple(int(part) for part in text.split("."))
    except ValueError:
        raise FormulaError(f"invalid path {text!r}") from None
