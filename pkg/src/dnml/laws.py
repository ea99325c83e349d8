"""Algebraic laws as executable checks over randomly generated inputs.

Each law takes a :class:`Generator` and returns True when the law holds on the
values it draws. :func:`check_laws` runs every law on a fixed number of
independently seeded generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable

from .algebra import (
    EMPTY_INSTANCE,
    EMPTY_NARRATIVE_INSTANCE,
    op_concat,
    op_constant,
    op_cross,
    op_dedup,
    op_difference,
    op_group_aggregate,
    op_group_aggregate_across,
    op_intersect,
    op_order_by,
    op_project,
    op_select,
    op_union,
)
from .conditions import And
from .generate import GenConfig, Generator
from .model import validate_instance


def law_closure(g: Generator) -> bool:
    i, j, store = g.instance(), g.instance(), g.store()
    outs = [
        op_constant(g.message()),
        op_select(g.dn_condition(), i, store),
        op_project(g.msg_condition(), i, store),
        op_dedup(i),
        op_group_aggregate(g.agg_specs(), i, store),
        op_group_aggregate_across(g.agg_specs(), i, store),
        op_order_by(g.sort_specs(), i, store),
        op_concat(i),
        op_cross(i, j),
        op_union(i, j),
        op_intersect(i, j),
        op_difference(i, j),
    ]
    return all(validate_instance(o).ok for o in outs)


def law_cross_neutral(g: Generator) -> bool:
    i = g.instance()
    return op_cross(i, EMPTY_NARRATIVE_INSTANCE) == i == op_cross(EMPTY_NARRATIVE_INSTANCE, i)


def law_cross_absorbing(g: Generator) -> bool:
    i = g.instance()
    return op_cross(i, EMPTY_INSTANCE) == EMPTY_INSTANCE == op_cross(EMPTY_INSTANCE, i)


def law_cross_associative(g: Generator) -> bool:
    a, b, c = g.instance(), g.instance(), g.instance()
    return op_cross(op_cross(a, b), c) == op_cross(a, op_cross(b, c))


def law_dedup_idempotent(g: Generator) -> bool:
    once = op_dedup(g.instance())
    return op_dedup(once) == once and all(len(set(n.messages)) == len(n.messages) for n in once)


def law_selection_cascade(g: Generator) -> bool:
    i, store = g.instance(), g.store()
    phi, psi = g.dn_condition(), g.dn_condition()
    both = op_select(And(phi, psi), i, store)
    return both == op_select(phi, op_select(psi, i, store), store) == op_select(
        psi, op_select(phi, i, store), store)


def law_across_is_grouped_concat(g: Generator) -> bool:
    i, store, specs = g.instance(), g.store(), g.agg_specs()
    return op_group_aggregate_across(specs, i, store) == op_group_aggregate(
        specs, op_dedup(op_concat(i)), store)


LAWS: dict[str, Callable[[Generator], bool]] = {
    "closure": law_closure,
    "cross neutral": law_cross_neutral,
    "cross absorbing": law_cross_absorbing,
    "cross associative": law_cross_associative,
    "dedup idempotent": law_dedup_idempotent,
    "selection cascade": law_selection_cascade,
    "across = groupagg . dedup . concat": law_across_is_grouped_concat,
}


def cross_is_not_commutative(a, b) -> bool:
    return op_cross(op_constant(a), op_constant(b)) != op_cross(op_constant(b), op_constant(a))


@dataclass
class LawReport:
    name: str
    cases: int
    failures: list[int]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_laws(cases: int = 1000, seed: int = 0, config: GenConfig | None = None,
               laws=None) -> list[LawReport]:
    """Run each law on ``cases`` generators; failing case seeds are kept for replay."""
    base = config or GenConfig()
    out = []
    for k, (name, law) in enumerate((laws or LAWS).items()):
        rng = random.Random(f"{seed}:{k}")
        failures = []
        for _ in range(cases):
            case_seed = rng.getrandbits(32)
            if not law(Generator(replace(base, seed=case_seed))):
                failures.append(case_seed)
        out.append(LawReport(name, cases, failures))
    return out
