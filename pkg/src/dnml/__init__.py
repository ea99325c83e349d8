"""Data narrative databases and the DNML algebra."""

from .algebra import (
    AggregatorKind,
    ByCharLex,
    ByMeasureLex,
    ByPosition,
    Reversed,
    apply_aggregator,
    apply_sorter,
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
from .conditions import eval_dn_condition, eval_msg_condition
from .errors import DnmlError, QuerySyntaxError
from .expr import Environment, evaluate
from .model import (
    EMPTY_MESSAGE,
    DndbInstance,
    Message,
    Narrative,
    RelationKind,
    RelationStore,
    char_related,
    mk_message,
    msg_related,
    narrative_positions,
    validate_instance,
)
from .rewrite import explain_plan, rewrite
from .storage import load_database, load_fixture
from .syntax import parse_query, render

__version__ = "0.1.0"
