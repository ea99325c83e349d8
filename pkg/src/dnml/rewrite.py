"""Equivalence-preserving algebraic rewrites and plan rendering.

Every rule either shrinks the tree or leaves it alone, so repeated bottom-up
passes reach a fixpoint in at most ``size(e)`` rounds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

from .conditions import And, Const
from .expr import (
    AlgebraExpr,
    Constant,
    Cross,
    Dedup,
    EmptyInstance,
    EmptyNarrative,
    GroupAgg,
    GroupAggAcross,
    OrderBy,
    Project,
    Select,
    SetUnion,
    Source,
    children,
    size,
    with_children,
)
from .syntax import render_condition, render_message, render_specs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewriteRule:
    name: str
    pattern: str
    apply: Callable[[AlgebraExpr], Optional[AlgebraExpr]]


def _select_cascade(e):
    if isinstance(e, Select) and isinstance(e.child, Select):
        return Select(And(e.condition, e.child.condition), e.child.child)


def _select_true(e):
    if isinstance(e, Select) and e.condition == Const(True):
        return e.child


def _cross_neutral(e):
    if isinstance(e, Cross):
        if isinstance(e.right, EmptyNarrative):
            return e.left
        if isinstance(e.left, EmptyNarrative):
            return e.right


def _cross_absorbing(e):
    if isinstance(e, Cross) and (
        isinstance(e.left, EmptyInstance) or isinstance(e.right, EmptyInstance)
    ):
        return EmptyInstance()


def _dedup_idempotent(e):
    if isinstance(e, Dedup) and isinstance(e.child, Dedup):
        return e.child


def _union_idempotent(e):
    if isinstance(e, SetUnion) and e.left == e.right:
        return e.left


RULES = (
    RewriteRule("select-cascade", "select(p, select(q, e)) => select(and(p, q), e)",
                _select_cascade),
    RewriteRule("select-true", "select(true, e) => e", _select_true),
    RewriteRule("cross-neutral", "cross(e, emptydn()) => e, cross(emptydn(), e) => e",
                _cross_neutral),
    RewriteRule("cross-absorbing", "cross(e, emptyset()) => emptyset(), and symmetric",
                _cross_absorbing),
    RewriteRule("dedup-idempotent", "dedup(dedup(e)) => dedup(e)", _dedup_idempotent),
    RewriteRule("union-idempotent", "union(e, e) => e", _union_idempotent),
)


def _pass(e: AlgebraExpr, rules, fired: list) -> AlgebraExpr:
    e = with_children(e, [_pass(c, rules, fired) for c in children(e)])
    for rule in rules:
        out = rule.apply(e)
        if out is not None:
            fired.append(rule.name)
            return out
    return e


def rewrite_trace(e: AlgebraExpr, rules=RULES) -> tuple[AlgebraExpr, list[str]]:
    """Apply ``rules`` bottom-up until nothing fires; also return the rules that fired."""
    log: list[str] = []
    for _ in range(size(e) + 1):
        fired: list[str] = []
        e = _pass(e, rules, fired)
        if not fired:
            break
        logger.debug("rewrite pass fired %s", fired)
        log.extend(fired)
    return e, log


def rewrite(e: AlgebraExpr, rules=RULES) -> AlgebraExpr:
    return rewrite_trace(e, rules)[0]


# -- plans -------------------------------------------------------------------


def _node_text(e: AlgebraExpr) -> str:
    if isinstance(e, Source):
        return f"Source {e.name}"
    if isinstance(e, Constant):
        return f"Constant {render_message(e.message)}"
    if isinstance(e, (Select, Project)):
        return f"{type(e).__name__} {render_condition(e.condition)}"
    if isinstance(e, (GroupAgg, GroupAggAcross, OrderBy)):
        return f"{type(e).__name__} {render_specs(e.specs)}"
    return type(e).__name__


def plan_lines(e: AlgebraExpr, depth: int = 0) -> list[str]:
    lines = ["  " * depth + _node_text(e)]
    for c in children(e):
        lines.extend(plan_lines(c, depth + 1))
    return lines


def render_plan(e: AlgebraExpr) -> str:
    return "\n".join(plan_lines(e))


def explain_plan(e: AlgebraExpr) -> str:
    """Indented plan of ``e`` before and after rewriting."""
    rewritten, fired = rewrite_trace(e)
    out = ["plan:"]
    out += ["  " + line for line in plan_lines(e)]
    out.append("rewritten:" + (f" ({', '.join(fired)})" if fired else " (unchanged)"))
    out += ["  " + line for line in plan_lines(rewritten)]
    return "\n".join(out)
