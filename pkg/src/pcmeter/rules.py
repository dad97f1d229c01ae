"""Rule DSL for rule-based projection and aggregation.

A rule is a sequence of guarded clauses with an optional default:

    if phi(a1) < 0.5 and phi(a2) < 0.5 then 0
    else 1

phi(name) refers to the projected score of an attribute (or of a dimension
when the rule is attached to a dimension or trace aggregator), val(name) to the
raw numeric attribute value. The first clause whose condition holds wins;
without a matching clause the default applies, without a default the result is Null.
"""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Literal as PyLiteral, NamedTuple

import pyparsing as pp

from pcmeter.errors import RuleParseError, RuleRangeError, UnboundReferenceError
from pcmeter.types import Metric, MetricValue
from pcmeter.utils.utils import tolerant_compare

__all__ = (
    "Reference",
    "Comparison",
    "Not",
    "BoolOp",
    "Condition",
    "Clause",
    "RuleAst",
    "Binding",
    "Bindings",
    "parse_rule",
    "format_rule",
    "evaluate_rule",
)

type RefKind = PyLiteral["phi", "val"]
type ComparisonOperator = PyLiteral["<", "<=", "=", "!=", ">=", ">"]


@dataclass(frozen=True, slots=True)
class Reference:
    kind: RefKind
    name: str


@dataclass(frozen=True, slots=True)
class Comparison:
    reference: Reference
    op: ComparisonOperator
    literal: float


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Condition"


@dataclass(frozen=True, slots=True)
class BoolOp:
    op: PyLiteral["and", "or"]
    left: "Condition"
    right: "Condition"


type Condition = Comparison | Not | BoolOp


@dataclass(frozen=True, slots=True)
class Clause:
    condition: Condition
    result: MetricValue


@dataclass(frozen=True, slots=True)
class RuleAst:
    clauses: tuple[Clause, ...]
    default: Metric | None = None

    def __post_init__(self) -> None:
        if not self.clauses and self.default is None:
            raise ValueError("A rule requires at least one clause or a default.")

    def references(self) -> frozenset[Reference]:
        return frozenset(
            ref for clause in self.clauses for ref in _references(clause.condition)
        )


class Binding(NamedTuple):
    """Evaluation context for one attribute or dimension name.

    `scored` distinguishes an unscored name (phi unbound)
    from a scored name whose projection is Null (phi is None).
    """

    value: float | None = None
    phi: MetricValue = None
    scored: bool = False


type Bindings = Mapping[str, Binding]


_OPERATORS: dict[str, ComparisonOperator] = {
    "<": "<",
    "<=": "<=",
    "≤": "<=",
    "=": "=",
    "==": "=",
    ">=": ">=",
    "≥": ">=",
    ">": ">",
    "!=": "!=",
    "<>": "!=",
    "≠": "!=",
}


class _ParsedClause(NamedTuple):
    condition: Condition
    result: float | str


class _ParsedDefault(NamedTuple):
    value: float


def _not_action(tokens: pp.ParseResults) -> Not:
    return Not(operand=tokens[0][1])


def _bool_op_action(tokens: pp.ParseResults) -> Condition:
    items = tokens[0]
    condition = items[0]
    for op, right in zip(items[1::2], items[2::2]):
        condition = BoolOp(op=op, left=condition, right=right)
    return condition


def _build_grammar() -> pp.ParserElement:
    IF, THEN, ELSE, AND, OR, NOT, PHI, VAL, NULL = map(
        pp.CaselessKeyword, "if then else and or not phi val null".split()
    )
    keyword = IF | THEN | ELSE | AND | OR | NOT | PHI | VAL | NULL

    identifier = ~keyword + pp.Word(pp.alphas + "_", pp.alphanums + "_-")
    identifier.set_name("name")
    number = pp.pyparsing_common.fnumber.copy().set_name("number")

    reference = (PHI | VAL) - pp.Suppress("(") - identifier - pp.Suppress(")")
    reference.set_parse_action(lambda t: Reference(kind=t[0], name=t[1]))

    operator = pp.one_of(list(_OPERATORS)).set_parse_action(lambda t: _OPERATORS[t[0]])

    comparison = reference + operator - number
    comparison.set_parse_action(
        lambda t: Comparison(reference=t[0], op=t[1], literal=float(t[2]))
    )

    condition = pp.infix_notation(
        comparison,
        [
            (NOT, 1, pp.OpAssoc.RIGHT, _not_action),
            (AND, 2, pp.OpAssoc.LEFT, _bool_op_action),
            (OR, 2, pp.OpAssoc.LEFT, _bool_op_action),
        ],
    )

    clause = pp.Suppress(IF) - condition - pp.Suppress(THEN) - (number | NULL)
    clause.set_parse_action(lambda t: _ParsedClause(condition=t[0], result=t[1]))

    default = pp.Suppress(ELSE) - number
    default.set_parse_action(lambda t: _ParsedDefault(value=t[0]))

    return pp.OneOrMore(clause) + pp.Optional(default)


_RULE_GRAMMAR = _build_grammar()


def _checked_result(value: float | str, source: str) -> MetricValue:
    if value == "null":
        return None
    try:
        return Metric(float(value))
    except ValueError as exc:
        msg = f"Rule result {value} in '{source}' outside of [0, 1]."
        raise RuleRangeError(msg) from exc


def _expected_tokens(element: pp.ParserElement | None) -> Iterator[str]:
    """Flatten the failing element into the alternatives it would have accepted."""
    match element:
        case None:
            return
        case pp.MatchFirst() | pp.Or():
            for alternative in element.exprs:
                yield from _expected_tokens(alternative)
        case _:
            yield str(element)


def parse_rule(text: str) -> RuleAst:
    """Parse rule source into a RuleAst.

    Raises RuleParseError with line/column information on malformed input
    and RuleRangeError for clause results outside of [0, 1].
    """
    try:
        parsed = _RULE_GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise RuleParseError(
            exc.msg,
            line=exc.lineno,
            column=exc.column,
            expected=_expected_tokens(exc.parser_element),
        ) from exc

    clauses: list[Clause] = []
    default: MetricValue = None

    for token in parsed:
        match token:
            case _ParsedClause(condition=condition, result=result):
                clauses.append(
                    Clause(condition=condition, result=_checked_result(result, text))
                )
            case _ParsedDefault(value=value):
                default = _checked_result(value, text)

    return RuleAst(clauses=tuple(clauses), default=default)


def _format_number(value: float) -> str:
    return repr(float(value))


def _format_condition(condition: Condition) -> str:
    match condition:
        case Comparison(reference=Reference(kind=kind, name=name), op=op, literal=literal):
            return f"{kind}({name}) {op} {_format_number(literal)}"
        case Not(operand=operand):
            return f"not {_format_condition(operand)}"
        case BoolOp(op=op, left=left, right=right):
            return f"({_format_condition(left)} {op} {_format_condition(right)})"
        case _:  # pragma: no cover
            assert False, "This should never happen."


def format_rule(ast: RuleAst) -> str:
    """Render a RuleAst as rule source; parse_rule(format_rule(ast)) == ast."""
    lines = [
        f"if {_format_condition(clause.condition)} "
        f"then {'null' if clause.result is None else _format_number(clause.result)}"
        for clause in ast.clauses
    ]
    if ast.default is not None:
        lines.append(f"else {_format_number(ast.default)}")
    return "\n".join(lines)


def _references(condition: Condition) -> Iterator[Reference]:
    match condition:
        case Comparison(reference=reference):
            yield reference
        case Not(operand=operand):
            yield from _references(operand)
        case BoolOp(left=left, right=right):
            yield from _references(left)
            yield from _references(right)


def _resolve(reference: Reference, bindings: Bindings) -> float | None:
    binding = bindings.get(reference.name)

    match reference.kind:
        case "phi":
            if binding is None or not binding.scored:
                raise UnboundReferenceError(reference.name, kind="phi")
            return binding.phi
        case "val":
            if binding is None or binding.value is None:
                raise UnboundReferenceError(reference.name, kind="val")
            return binding.value
        case _:  # pragma: no cover
            assert False, "This should never happen."


def _holds(condition: Condition, bindings: Bindings) -> bool:
    match condition:
        case Comparison(reference=reference, op=op, literal=literal):
            operand = _resolve(reference, bindings)
            # comparisons against a Null score never hold
            return operand is not None and tolerant_compare(operand, op, literal)
        case Not(operand=operand):
            return not _holds(operand, bindings)
        case BoolOp(op="and", left=left, right=right):
            return _holds(left, bindings) and _holds(right, bindings)
        case BoolOp(op="or", left=left, right=right):
            return _holds(left, bindings) or _holds(right, bindings)
        case _:  # pragma: no cover
            assert False, "This should never happen."


def evaluate_rule(ast: RuleAst, bindings: Bindings) -> MetricValue:
    """Evaluate a rule with first-match clause semantics."""
    for reference in sorted(ast.references(), key=lambda ref: (ref.name, ref.kind)):
        _resolve(reference, bindings)

    for clause in ast.clauses:
        if _holds(clause.condition, bindings):
            return clause.result

    return ast.default
