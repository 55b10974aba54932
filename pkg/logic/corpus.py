"""Seeded random formulas for the theorem suites."""

import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

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
    Var,
    exists,
    forall,
    free_variables,
)

DEFAULT_RELATIONS = (("P", 1), ("R", 2))
DEFAULT_CONSTANTS = ("c0",)
DEFAULT_VARIABLES = ("x", "y", "z")
DEFAULT_MOSTOWSKI = ("exactly2", "atleast2", "most")


class Fragment(StrEnum):
    FIRST_ORDER = "fo"
    IF = "if"
    DF = "df"


@dataclass
class FormulaGenerator:
    """Random formulas, stratified by depth.

    ``IF`` draws slashed quantifiers and slashed connectives, ``DF`` draws
    backslashed existential and Mostowski quantifiers with unslashed
    connectives, ``FIRST_ORDER`` draws neither. Team quantifiers only appear
    when ``team`` names some.
    """

    seed: int = 0
    fragment: Fragment = Fragment.IF
    mostowski: Sequence[str] = DEFAULT_MOSTOWSKI
    team: Sequence[str] = ()
    variables: Sequence[str] = DEFAULT_VARIABLES
    relations: Sequence[tuple[str, int]] = DEFAULT_RELATIONS
    constants: Sequence[str] = DEFAULT_CONSTANTS
    max_depth: int = 3
    quantifiers: Sequence[QuantKind] = (QuantKind.EXISTS, QuantKind.FORALL)
    slash_probability: float = 0.4
    constant_probability: float = 0.1
    max_free: int | None = None
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self.fragment = Fragment(self.fragment)
        self._rng = random.Random(self.seed)

    def formulas(self, count: int) -> list[Formula]:
        """``count`` formulas whose depth cycles through 1..max_depth."""
        result = []
        while len(result) < count:
            depth = 1 + len(result) % self.max_depth
            formula = self.formula(depth)
            if self.max_free is None or len(free_variables(formula)) <= self.max_free:
                result.append(formula)
        return result

    def sentences(self, count: int) -> list[Formula]:
        return [self.close(formula) for formula in self.formulas(count)]

    def close(self, formula: Formula) -> Formula:
        """Bind each free variable by a random ∃ or ∀ in front."""
        for variable in sorted(free_variables(formula), reverse=True):
            wrap = exists if self._rng.random() < 0.5 else forall
            formula = wrap(variable, formula)
        return formula

    def formula(self, depth: int) -> Formula:
        if depth <= 0:
            return self.literal()
        if self._rng.random() < 0.55:
            return self.quantified(depth)
        return self.connective(depth)

    def literal(self) -> Formula:
        negated = self._rng.random() < 0.3
        choices = [*self.relations, ("=", 2)]
        name, arity = self._rng.choice(choices)
        terms = tuple(self.term() for _ in range(arity))
        if name == "=":
            return Eq(terms[0], terms[1], negated)
        return Atom(name, terms, negated)

    def term(self) -> Term:
        if self.constants and self._rng.random() < self.constant_probability:
            return Const(self._rng.choice(self.constants))
        return Var(self._rng.choice(self.variables))

    def connective(self, depth: int) -> Formula:
        deep = self.formula(depth - 1)
        shallow = self.formula(self._rng.randint(0, depth - 1))
        left, right = (deep, shallow) if self._rng.random() < 0.5 else (shallow, deep)
        slash = frozenset()
        if self.fragment == Fragment.IF:
            slash = self.slash_set(())
        kind = And if self._rng.random() < 0.5 else Or
        return kind(left, right, slash)

    def quantified(self, depth: int) -> Formula:
        kinds = list(self.quantifiers)
        kinds += [QuantKind.MOSTOWSKI] * bool(self.mostowski)
        kinds += [QuantKind.TEAM] * bool(self.team)
        kind = self._rng.choice(kinds)
        variable = self._rng.choice(self.variables)
        body = self.formula(depth - 1)
        name = None
        if kind == QuantKind.MOSTOWSKI:
            name = self._rng.choice(self.mostowski)
        elif kind == QuantKind.TEAM:
            name = self._rng.choice(self.team)
        slash, backslash = frozenset(), False
        if self.fragment == Fragment.IF:
            slash = self.slash_set((variable,))
        elif self.fragment == Fragment.DF and kind in (QuantKind.EXISTS, QuantKind.MOSTOWSKI):
            backslash = True
            slash = frozenset(
                v for v in self.variables if v != variable and self._rng.random() < 0.5
            )
        return Quant(kind, variable, body, slash, backslash, name)

    def slash_set(self, exclude: Sequence[str]) -> frozenset[str]:
        if self._rng.random() >= self.slash_probability:
            return frozenset()
        pool = [v for v in self.variables if v not in exclude]
        if not pool:
            return frozenset()
        chosen = frozenset(v for v in pool if self._rng.random() < 0.4)
        return chosen or frozenset({self._rng.choice(pool)})
