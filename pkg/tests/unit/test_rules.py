"""Unit tests for the rule DSL."""

from typing import NamedTuple

from hypothesis import given, settings, strategies as st
import pytest

from pcmeter.rules import (
    BoolOp,
    Binding,
    Clause,
    Comparison,
    Not,
    Reference,
    RuleAst,
    evaluate_rule,
    format_rule,
    parse_rule,
)

BOTH_LOW = "if phi(a1) < 0.5 and phi(a2) < 0.5 then 0 else 1"


def test_parse_both_low_rule():
    ast = parse_rule(BOTH_LOW)

    assert ast == RuleAst(
        clauses=(
            Clause(
                condition=BoolOp(
                    op="and",
                    left=Comparison(Reference("phi", "a1"), "<", 0.5),
                    right=Comparison(Reference("phi", "a2"), "<", 0.5),
                ),
                result=0.0,
            ),
        ),
        default=1.0,
    )


def test_parse_single_clause_without_default():
    ast = parse_rule("if val(x) >= 10 then 1")

    assert len(ast.clauses) == 1
    assert ast.default is None
    assert ast.clauses[0].condition == Comparison(Reference("val", "x"), ">=", 10.0)


class OperatorParams(NamedTuple):
    source: str
    op: str


operator_params = [
    OperatorParams("≤", "<="),
    OperatorParams("≥", ">="),
    OperatorParams("≠", "!="),
    OperatorParams("<>", "!="),
    OperatorParams("==", "="),
    OperatorParams("=", "="),
    OperatorParams(">", ">"),
]


@pytest.mark.parametrize("param", operator_params)
def test_operator_spellings(param):
    ast = parse_rule(f"if phi(a) {param.source} 0.5 then 1")
    assert ast.clauses[0].condition.op == param.op


def test_keywords_are_case_insensitive():
    assert parse_rule("IF phi(a) < 0.5 THEN 0 ELSE 1") == parse_rule("if phi(a) < 0.5 then 0 else 1")


def test_not_and_or_precedence():
    ast = parse_rule("if not phi(a) < 0.5 or phi(b) < 0.5 and phi(c) < 0.5 then 0")
    condition = ast.clauses[0].condition

    assert isinstance(condition, BoolOp) and condition.op == "or"
    assert isinstance(condition.left, Not)
    assert isinstance(condition.right, BoolOp) and condition.right.op == "and"


def test_hyphenated_names():
    ast = parse_rule("if phi(on-time) < 0.5 then 0")
    assert ast.clauses[0].condition.reference == Reference("phi", "on-time")
    assert parse_rule(format_rule(ast)) == ast


def test_null_clause_result():
    ast = parse_rule("if phi(a) < 0.5 then null else 1")
    assert ast.clauses[0].result is None


class EvaluateParams(NamedTuple):
    bindings: dict[str, Binding]
    expected: float | None


evaluate_params = [
    EvaluateParams(
        {"a1": Binding(phi=0.4, scored=True), "a2": Binding(phi=0.3, scored=True)}, 0.0
    ),
    EvaluateParams(
        {"a1": Binding(phi=0.6, scored=True), "a2": Binding(phi=0.3, scored=True)}, 1.0
    ),
    EvaluateParams(
        {"a1": Binding(phi=None, scored=True), "a2": Binding(phi=0.3, scored=True)}, 1.0
    ),
]


@pytest.mark.parametrize("param", evaluate_params)
def test_evaluate_both_low(param):
    assert evaluate_rule(parse_rule(BOTH_LOW), param.bindings) == param.expected


def test_first_matching_clause_wins():
    ast = parse_rule("if val(x) > 5 then 0.2\nif val(x) > 1 then 0.8\nelse 1")

    assert evaluate_rule(ast, {"x": Binding(value=7)}) == 0.2
    assert evaluate_rule(ast, {"x": Binding(value=3)}) == 0.8
    assert evaluate_rule(ast, {"x": Binding(value=0)}) == 1.0


def test_no_match_without_default_is_null():
    assert evaluate_rule(parse_rule("if val(x) >= 10 then 1"), {"x": Binding(value=3)}) is None


def test_format_rule_round_trip():
    ast = parse_rule(BOTH_LOW)
    assert parse_rule(format_rule(ast)) == ast


_names = st.sampled_from(["a1", "a2", "a3", "x_y"])
_literals = st.integers(0, 20).map(lambda i: i / 20)
_comparisons = st.builds(
    Comparison,
    reference=st.builds(Reference, kind=st.sampled_from(["phi", "val"]), name=_names),
    op=st.sampled_from(["<", "<=", "=", "!=", ">=", ">"]),
    literal=_literals,
)
_conditions = st.recursive(
    _comparisons,
    lambda children: st.one_of(
        st.builds(Not, operand=children),
        st.builds(BoolOp, op=st.sampled_from(["and", "or"]), left=children, right=children),
    ),
    max_leaves=6,
)
_rules = st.builds(
    RuleAst,
    clauses=st.lists(
        st.builds(Clause, condition=_conditions, result=st.one_of(st.none(), _literals)),
        min_size=1,
        max_size=4,
    ).map(tuple),
    default=st.one_of(st.none(), _literals),
)


@settings(max_examples=250)
@given(ast=_rules)
def test_parse_format_parse_identity(ast):
    assert parse_rule(format_rule(ast)) == ast
    assert format_rule(parse_rule(format_rule(ast))) == format_rule(ast)


def _naive_holds(condition, bindings) -> bool:
    match condition:
        case Comparison(reference=reference, op=op, literal=literal):
            binding = bindings[reference.name]
            operand = binding.phi if reference.kind == "phi" else binding.value
            if operand is None:
                return False
            return {
                "<": operand < literal - 1e-9,
                "<=": operand <= literal + 1e-9,
                "=": abs(operand - literal) <= 1e-9,
                "!=": abs(operand - literal) > 1e-9,
                ">=": operand >= literal - 1e-9,
                ">": operand > literal + 1e-9,
            }[op]
        case Not(operand=operand):
            return not _naive_holds(operand, bindings)
        case BoolOp(op=op, left=left, right=right):
            results = [_naive_holds(left, bindings), _naive_holds(right, bindings)]
            return all(results) if op == "and" else any(results)


_bindings = st.fixed_dictionaries(
    {
        name: st.builds(
            Binding,
            value=st.integers(0, 20).map(lambda i: i / 20),
            phi=st.one_of(st.none(), _literals),
            scored=st.just(True),
        )
        for name in ["a1", "a2", "a3", "x_y"]
    }
)


@settings(max_examples=200)
@given(ast=_rules, bindings=_bindings)
def test_evaluate_matches_clause_scan(ast, bindings):
    expected = next(
        (clause.result for clause in ast.clauses if _naive_holds(clause.condition, bindings)),
        ast.default,
    )
    assert evaluate_rule(ast, bindings) == expected
