"""
Polymorphism and anti-polymorphism checks for the Polymorphism Circuit Workbench

An operation is applied to k rows of a relation column by column; the
relation is closed under it when every such image is again a row. The
checks accept any relation object exposing `relation()` (a 0/1 matrix), so
single- and multi-output truth tables share them.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from config import MAX_DENSE_ARITY, MAX_POLYMORPHISM_ARITY, OPERATION_PREFERENCE
from truth_table import (
    UNDEF,
    DenseOperation,
    NamedOperation,
    Witness,
    WitnessMode,
    dense_witness_matrix,
)
from workbench_errors import ArityError, WidthMismatchError, WitnessModeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RowSelection:
    """Rows of f• (by index) whose componentwise image falls outside f•."""

    rows: tuple
    image: tuple


@dataclass(frozen=True)
class TrivialClass:
    """Syntactic shape of f itself: constant, (negated) projection or general."""

    kind: str
    index: int = None

    def __str__(self):
        if self.index is None:
            return self.kind
        return f"{self.kind}({self.index})"


def _as_dense(op):
    if isinstance(op, NamedOperation):
        return op.dense()
    if isinstance(op, str):
        return NamedOperation.parse(op).dense()
    return op


def _row_codes(matrix):
    weights = np.left_shift(1, np.arange(matrix.shape[-1] - 1, -1, -1, dtype=np.int64))
    return matrix.astype(np.int64) @ weights


def _images(op, relation, selections):
    """
    Componentwise images of many row selections at once.

    Returns an int8 array (selections, width) with -1 where a partial
    operation is undefined.
    """
    stacked = relation[selections].astype(np.int64)            # (S, k, width)
    weights = np.left_shift(1, np.arange(op.arity - 1, -1, -1, dtype=np.int64))
    indices = np.einsum("skw,k->sw", stacked, weights)
    return op.table_array()[indices]


def _inside(relation, images):
    """Which images are rows of the relation (undefined images count as outside)."""
    defined = np.all(images >= 0, axis=1)
    codes = _row_codes(np.where(images < 0, 0, images))
    return defined & np.isin(codes, _row_codes(relation))


def apply_componentwise(op, rows):
    """
    Apply a k-ary operation to k tuples position by position.

    Args:
        op: DenseOperation or NamedOperation of arity k
        rows: k tuples of equal width m

    Returns:
        tuple: output[i] = op(rows[0][i], ..., rows[k-1][i]); UNDEF where a partial op is undefined
    """
    op = _as_dense(op)
    rows = [tuple(int(b) for b in row) for row in rows]
    if len(rows) != op.arity:
        raise ArityError(f"a {op.arity}-ary operation needs {op.arity} tuples, got {len(rows)}")
    if len({len(row) for row in rows}) > 1:
        raise WidthMismatchError(f"tuples of different widths: {[len(row) for row in rows]}")
    if not rows:
        return (op.table[0],)
    return tuple(op(*column) for column in zip(*rows))


def is_polymorphism(op, table, max_arity=MAX_POLYMORPHISM_ARITY):
    """
    Check whether the relation is closed under a total operation.

    Brute force over all (rows)^k selections, repetitions included.
    """
    op = _as_dense(op)
    if not op.is_total:
        raise WitnessModeError("use is_partial_polymorphism for partial operations")
    if not 1 <= op.arity <= max_arity:
        raise ArityError(f"generic polymorphism checks support arities 1..{max_arity}")
    relation = table.relation()
    selections = np.array(list(itertools.product(range(len(relation)), repeat=op.arity)))
    return bool(np.all(_inside(relation, _images(op, relation, selections))))


def is_partial_polymorphism(op, table, max_arity=MAX_POLYMORPHISM_ARITY):
    """Closure under a partial operation: images with an undefined coordinate are exempt."""
    op = _as_dense(op)
    if not 1 <= op.arity <= max_arity:
        raise ArityError(f"generic polymorphism checks support arities 1..{max_arity}")
    relation = table.relation()
    selections = np.array(list(itertools.product(range(len(relation)), repeat=op.arity)))
    images = _images(op, relation, selections)
    exempt = np.any(images < 0, axis=1)
    return bool(np.all(exempt | _inside(relation, images)))


def polymorphism_witnesses(op, table):
    """
    All selections of k distinct rows whose image is not a row of the relation.

    Rows are chosen in increasing index order, so each unordered selection
    appears once.
    """
    op = _as_dense(op)
    relation = table.relation()
    combos = list(itertools.combinations(range(len(relation)), op.arity))
    if not combos:
        return []
    selections = np.array(combos)
    images = _images(op, relation, selections)
    outside = ~_inside(relation, images)
    return [
        RowSelection(tuple(int(r) for r in selections[i]), tuple(int(b) for b in images[i]))
        for i in np.flatnonzero(outside)
    ]


def is_closed_under(table, op):
    """
    Closure under one of the four named operations.

    They are idempotent and symmetric, so selections with repeated rows
    always land back in the relation and distinct unordered ones suffice.
    """
    return not polymorphism_witnesses(NamedOperation.parse(op) if isinstance(op, str) else op, table)


def detect_nontrivial_polymorphisms(table):
    """The named operations f• is closed under, in CLI preference order."""
    found = tuple(
        NamedOperation(name) for name in OPERATION_PREFERENCE
        if is_closed_under(table, NamedOperation(name))
    )
    logger.debug("table %s closed under %s", getattr(table, "bits", "?"), [op.value for op in found])
    return found


def _witness_values(w, columns, allow_undef):
    if isinstance(w, DenseOperation):
        values = [w.on_column(c) for c in columns]
    elif allow_undef:
        values = [w.get(c) for c in columns]
    else:
        values = [w[c] for c in columns]
    if not allow_undef and UNDEF in values:
        raise WitnessModeError("total membership needs a value on every column of f•")
    return values


def _image_leaves_table(table, values):
    return table.value(values[:-1]) != values[-1]


def is_total_anti_polymorphism(w, table):
    """
    Does w map the columns of f• to a tuple outside f•?

    Args:
        w: Witness defined on every column of f•, or a total DenseOperation of arity 2^n
        table: TruthTable

    Returns:
        bool: True iff w(x_{n+1}) != f(w(x_1), ..., w(x_n))
    """
    if isinstance(w, DenseOperation) and w.arity != table.row_count:
        raise ArityError(f"dense witnesses for arity {table.arity} take {table.row_count} arguments")
    return _image_leaves_table(table, _witness_values(w, table.columns(), allow_undef=False))


def is_partial_anti_polymorphism(w, table):
    """A partial witness is an anti-polymorphism when defined on all of f• and the image leaves f•."""
    if isinstance(w, DenseOperation) and w.arity != table.row_count:
        raise ArityError(f"dense witnesses for arity {table.arity} take {table.row_count} arguments")
    values = _witness_values(w, table.columns(), allow_undef=True)
    if UNDEF in values:
        return False
    return _image_leaves_table(table, values)


def classify_trivial(table):
    """Classify f as constant, projection(i), negated_projection(i) or general."""
    result = table.result_column
    if len(set(result.bits)) == 1:
        return TrivialClass("constant")
    for i, column in enumerate(table.input_columns(), start=1):
        if result == column:
            return TrivialClass("projection", i)
        if result == column.complement():
            return TrivialClass("negated_projection", i)
    return TrivialClass("general")


def projection_flip_witness(table, row=0, columns=()):
    """
    Projection onto `row` everywhere except the result column, which is negated.

    It is an anti-polymorphism whenever the result column is not an input
    column, and consistent with every gate that does not touch the result column.
    """
    result = table.result_column
    assignment = {c: c[row] for c in dict.fromkeys((*table.columns(), *columns))}
    assignment[result] = 1 - result[row]
    return Witness(assignment, WitnessMode.TOTAL)


def dense_anti_polymorphism_mask(table):
    """
    Membership of every dense total witness of arity 2^n (n <= 2), vectorized.

    Entry `code` corresponds to row `code` of dense_witness_matrix(n).
    """
    if table.arity > MAX_DENSE_ARITY:
        raise ArityError(f"dense enumeration is limited to n <= {MAX_DENSE_ARITY}")
    witnesses = dense_witness_matrix(table.arity)
    values = [witnesses[:, c.as_index()].astype(np.int64) for c in table.columns()]
    z = np.zeros(len(witnesses), dtype=np.int64)
    for v in values[:-1]:
        z = (z << 1) | v
    outputs = np.array(table.outputs, dtype=np.int64)
    return outputs[z] != values[-1]


def membership_of_fixtures(table, witnesses):
    """Total anti-polymorphism membership for each dense fixture, keyed by position (w1, w2, ...)."""
    return {
        f"w{i}": is_total_anti_polymorphism(w, table)
        for i, w in enumerate(witnesses, start=1)
    }
