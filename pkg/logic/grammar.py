"""Concrete syntax: the formula grammar and the quantifier condition grammar."""

from collections.abc import Callable
from dataclasses import replace
from fractions import Fraction
from functools import cache

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .exceptions import FormatError, FormulaSyntaxError, LogicError
from .syntax import (
    And,
    Atom,
    Const,
    Eq,
    Formula,
    Or,
    Quant,
    QuantHead,
    QuantKind,
    Var,
    biconditional,
    is_first_order,
    walk,
)

FORMULA_GRAMMAR = r"""
    ?formula: quantified
            | binary
            | literal
            | "(" formula ")"

    quantified: "(" qhead ")" formula
              | "(" qhead formula ")"

    qhead: quantkind IDENT [slashing]
    ?quantkind: "E"      -> exists
              | "A"      -> forall
              | QNAME    -> mostowski
              | TQNAME   -> team

    slashing: SLASH varset
            | BACKSLASH varset

    binary: "(" formula AND [connslash] formula ")"  -> conjunction
          | "(" formula OR [connslash] formula ")"   -> disjunction
          | "(" formula IFF formula ")"              -> biconditional

    connslash: SLASH varset

    varset: "{" [IDENT ("," IDENT)*] "}"

    ?literal: atom
            | "~" atom   -> negation

    ?atom: IDENT "(" term ("," term)* ")"  -> relation
         | term "=" term                    -> equality
         | term "!=" term                   -> inequality

    ?term: IDENT       -> variable
         | "#" IDENT   -> constant

    QNAME.2: /Q\.[A-Za-z_][A-Za-z0-9_]*/
    TQNAME.2: /TQ\.[A-Za-z_][A-Za-z0-9_]*/
    IDENT: /[A-Za-z_][A-Za-z0-9_]*/
    SLASH: "/"
    BACKSLASH: "\\"
    AND: "&"
    OR: "|"
    IFF: "<->"

    %import common.WS
    %ignore WS
"""

CONDITION_GRAMMAR = r"""
    ?condition: sum COMPARATOR sum

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> subtract

    ?product: unary
            | product "*" unary   -> multiply
            | product "/" unary   -> divide

    ?unary: NUMBER                 -> number
          | "card" "(" "S" ")"     -> card_s
          | "card" "(" "M" ")"     -> card_m
          | "-" unary              -> negate
          | "(" sum ")"

    COMPARATOR: "==" | "!=" | "<=" | ">=" | "<" | ">"

    %import common.INT -> NUMBER
    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class FormulaBuilder(Transformer):
    def variable(self, name):
        return Var(str(name))

    def constant(self, name):
        return Const(str(name))

    def relation(self, name, *terms):
        return Atom(str(name), tuple(terms))

    def equality(self, left, right):
        return Eq(left, right)

    def inequality(self, left, right):
        return Eq(left, right, negated=True)

    def negation(self, atom):
        return replace(atom, negated=not atom.negated)

    def varset(self, *names):
        return frozenset(str(name) for name in names if name is not None)

    def slashing(self, marker, names):
        return (marker.type == "BACKSLASH", names)

    def connslash(self, _marker, names):
        return names

    def exists(self):
        return (QuantKind.EXISTS, None)

    def forall(self):
        return (QuantKind.FORALL, None)

    def mostowski(self, token):
        return (QuantKind.MOSTOWSKI, str(token)[2:])

    def team(self, token):
        return (QuantKind.TEAM, str(token)[3:])

    def qhead(self, kind, variable, slashing):
        backslash, names = slashing if slashing is not None else (False, frozenset())
        return QuantHead(kind[0], str(variable), names, backslash, kind[1])

    def quantified(self, head, body):
        return head.wrap(body)

    def conjunction(self, left, _operator, slash, right):
        return And(left, right, slash or frozenset())

    def disjunction(self, left, _operator, slash, right):
        return Or(left, right, slash or frozenset())

    def biconditional(self, left, _operator, right):
        for side in (left, right):
            if not is_first_order(side) or any(
                isinstance(node, Quant) for _, node in walk(side)
            ):
                raise FormulaSyntaxError(
                    "'<->' only joins quantifier-free first-order formulas"
                )
        return biconditional(left, right)


@v_args(inline=True)
class ConditionBuilder(Transformer):
    """Compiles a condition into a predicate on (card(S), card(M))."""

    def number(self, token):
        value = Fraction(int(token))
        return lambda s, m: value

    def card_s(self):
        return lambda s, m: Fraction(s)

    def card_m(self):
        return lambda s, m: Fraction(m)

    def negate(self, operand):
        return lambda s, m: -operand(s, m)

    def add(self, left, right):
        return lambda s, m: left(s, m) + right(s, m)

    def subtract(self, left, right):
        return lambda s, m: left(s, m) - right(s, m)

    def multiply(self, left, right):
        return lambda s, m: left(s, m) * right(s, m)

    def divide(self, left, right):
        def quotient(s, m):
            denominator = right(s, m)
            if denominator == 0:
                return Fraction(0)
            return left(s, m) / denominator

        return quotient

    def condition(self, left, comparator, right):
        compare = {
            "==": lambda a, b: a == b,
            "!=": lambda a, b: a != b,
            "<=": lambda a, b: a <= b,
            ">=": lambda a, b: a >= b,
            "<": lambda a, b: a < b,
            ">": lambda a, b: a > b,
        }[str(comparator)]
        return lambda s, m: compare(left(s, m), right(s, m))


@cache
def formula_parser() -> Lark:
    return Lark(FORMULA_GRAMMAR, start="formula", parser="lalr", maybe_placeholders=True)


@cache
def condition_parser() -> Lark:
    return Lark(CONDITION_GRAMMAR, start="condition", parser="lalr")


def parse_formula(text: str) -> Formula:
    try:
        tree = formula_parser().parse(text)
    except UnexpectedInput as error:
        raise FormulaSyntaxError(
            f"unexpected input near {text[error.pos_in_stream:error.pos_in_stream + 10]!r}"
            if error.pos_in_stream is not None
            else "unexpected end of input",
            error.line,
            error.column,
        ) from None
    try:
        return FormulaBuilder().transform(tree)
    except VisitError as error:
        if isinstance(error.orig_exc, LogicError):
            raise error.orig_exc from None
        raise


def parse_condition(text: str) -> Callable[[int, int], bool]:
    try:
        tree = condition_parser().parse(text)
    except UnexpectedInput as error:
        raise FormatError(f"cannot parse condition {text!r} (column {error.column})") from None
    return ConditionBuilder().transform(tree)
