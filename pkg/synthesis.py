"""
Linear-size circuits from a non-trivial polymorphism

f is evaluated on the all-0 and all-1 inputs and on the 2n inputs with a
single 1 or a single 0. Closure of f• under the operation then rebuilds f(x)
from those 2n+2 boundary bits, one input at a time. Every step is a
multiplexer on x_i whose data inputs are known constants, so it folds to at
most one XOR.
"""

import logging
from dataclasses import dataclass

import numpy as np

from circuits import ProgramBuilder, constant, program_table
from polymorphisms import detect_nontrivial_polymorphisms, is_closed_under
from truth_table import NamedOperation, TruthTable, _coerce_bits, bits_to_index, index_to_bits
from workbench_errors import (
    PatchError,
    PolymorphismRequiredError,
    TableFormatError,
    WidthMismatchError,
)

logger = logging.getLogger(__name__)


def _unit(n, i, bit):
    """Input with `bit` at position i (1-based) and the opposite bit elsewhere."""
    return tuple(bit if j == i else 1 - bit for j in range(1, n + 1))


@dataclass(frozen=True)
class BoundaryBits:
    """The 2n+2 values of f the constructions hard-wire."""

    arity: int
    unique_one: tuple      # t_1..t_n
    unique_zero: tuple     # t_{n+1}..t_{2n}
    all_zero: int          # t_{2n+1}
    all_one: int           # t_{2n+2}

    @classmethod
    def from_table(cls, table):
        n = table.arity
        return cls(
            arity=n,
            unique_one=tuple(table.value(_unit(n, i, 1)) for i in range(1, n + 1)),
            unique_zero=tuple(table.value(_unit(n, i, 0)) for i in range(1, n + 1)),
            all_zero=table.value((0,) * n),
            all_one=table.value((1,) * n),
        )

    def as_tuple(self):
        """t_1..t_{2n+2} in order."""
        return self.unique_one + self.unique_zero + (self.all_zero, self.all_one)

    def __str__(self):
        return "".join(str(t) for t in self.as_tuple())


def boundary_bits_of_program(program):
    return BoundaryBits.from_table(program_table(program))


@dataclass(frozen=True)
class MultiTable:
    """
    An n-input, m-output function; its relation has n + m columns.

    Args:
        arity: n
        outputs: m output vectors, each of length 2^n
    """

    arity: int
    outputs: tuple

    def __post_init__(self):
        outputs = tuple(_coerce_bits(column) for column in self.outputs)
        if self.arity < 1:
            raise TableFormatError(f"arity must be at least 1, got {self.arity}")
        if not outputs:
            raise TableFormatError("a multi-output table needs at least one output")
        for column in outputs:
            if len(column) != 2 ** self.arity:
                raise TableFormatError(
                    f"arity {self.arity} needs {2 ** self.arity} outputs per column, got {len(column)}"
                )
        object.__setattr__(self, "outputs", outputs)

    @classmethod
    def from_tables(cls, tables):
        tables = tuple(tables)
        if len({t.arity for t in tables}) != 1:
            raise WidthMismatchError("output tables of different arities")
        return cls(tables[0].arity, tuple(t.outputs for t in tables))

    @property
    def output_count(self):
        return len(self.outputs)

    @property
    def row_count(self):
        return 2 ** self.arity

    def output_tables(self):
        return tuple(TruthTable(self.arity, column) for column in self.outputs)

    def value(self, x):
        index = bits_to_index(x)
        return tuple(column[index] for column in self.outputs)

    def relation(self):
        """The (2^n, n+m) uint8 matrix of inputs followed by every output."""
        inputs = np.array([index_to_bits(r, self.arity) for r in range(self.row_count)], dtype=np.uint8)
        return np.hstack([inputs, np.array(self.outputs, dtype=np.uint8).T])

    def __str__(self):
        return " ".join("".join(str(b) for b in column) for column in self.outputs)


def _as_operation(op):
    return op if isinstance(op, NamedOperation) else NamedOperation.parse(op)


def _require_closure(table, op):
    if not is_closed_under(table, op):
        raise PolymorphismRequiredError(f"the relation of {table} is not closed under {op.value}")


def _boundary_signal(builder, table, op):
    """Fold the construction for `op` into a Signal of the builder."""
    t = BoundaryBits.from_table(table)
    n = table.arity

    if op is NamedOperation.OR:
        # r := f(0..0); for x_i = 1: r := r or t_i
        r = constant(t.all_zero)
        for i in range(1, n + 1):
            update = builder.or_(r, constant(t.unique_one[i - 1]))
            r = builder.select(builder.input(i), update, r)
    elif op is NamedOperation.AND:
        # r := f(1..1); for x_i = 0: r := r and t_{n+i}
        r = constant(t.all_one)
        for i in range(1, n + 1):
            update = builder.and_(r, constant(t.unique_zero[i - 1]))
            r = builder.select(builder.input(i), r, update)
    elif op is NamedOperation.AFF:
        # r := f(0..0); for x_i = 1: r := t_{2n+1} xor r xor t_i
        r = constant(t.all_zero)
        for i in range(1, n + 1):
            update = builder.xor(builder.xor(constant(t.all_zero), r), constant(t.unique_one[i - 1]))
            r = builder.select(builder.input(i), update, r)
    else:
        # r := f(1..1); for x_i = 0: r := maj(t_{2n+1}, r, t_{n+i})
        r = constant(t.all_one)
        for i in range(1, n + 1):
            update = builder.majority(constant(t.all_zero), r, constant(t.unique_zero[i - 1]))
            r = builder.select(builder.input(i), r, update)
    return r


def synthesize_from_polymorphism(table, op):
    """
    Build a program for f from one of the four named polymorphisms of f•.

    Args:
        table: TruthTable of f
        op: NamedOperation (or its name) under which f• is closed

    Returns:
        Program: computes f with at most 5n + 2 gates
    """
    op = _as_operation(op)
    _require_closure(table, op)
    builder = ProgramBuilder(table.arity)
    program = builder.build([_boundary_signal(builder, table, op)])
    logger.debug("synthesized %s via %s: %d gates", table.bits, op.value, program.size)
    return program


def synthesize_multi_output(table, op):
    """One shared builder, one construction per output column; at most m(5n + 2) gates."""
    op = _as_operation(op)
    _require_closure(table, op)
    builder = ProgramBuilder(table.arity)
    signals = [_boundary_signal(builder, column, op) for column in table.output_tables()]
    return builder.build(signals)


def patch_points(f, g):
    """Inputs (in row order) where two tables disagree."""
    if f.arity != g.arity:
        raise WidthMismatchError(f"tables of arity {f.arity} and {g.arity}")
    return tuple(
        index_to_bits(r, f.arity) for r in range(f.row_count) if f.outputs[r] != g.outputs[r]
    )


def _point_matches(builder, point):
    literals = [builder.input(i) if bit else ~builder.input(i) for i, bit in enumerate(point, start=1)]
    match = literals[0]
    for literal in literals[1:]:
        match = builder.and_(match, literal)
    return match


def synthesize_patched(f, g, op, patch=None):
    """
    Program for f built from a closed neighbour g plus hard-wired exceptions.

    Each patch point gets an equality comparator on x whose hit overrides
    g's construction with the stored f(x).

    Args:
        f: TruthTable to compute
        g: TruthTable closed under op, agreeing with f outside the patch
        op: NamedOperation of g•
        patch: Inputs where f and g may differ; defaults to patch_points(f, g)

    Returns:
        Program: computes f within 5n + 2 + 3n|patch| gates
    """
    op = _as_operation(op)
    if f.arity != g.arity:
        raise WidthMismatchError(f"tables of arity {f.arity} and {g.arity}")
    n = f.arity
    points = patch_points(f, g) if patch is None else tuple(sorted({tuple(int(b) for b in p) for p in patch}))
    for point in points:
        if len(point) != n or any(b not in (0, 1) for b in point):
            raise PatchError(f"patch point {point} is not an input of an {n}-ary function", point)
    for point in patch_points(f, g):
        if point not in points:
            raise PatchError(f"f and g differ at {point}, which is outside the patch", point)
    _require_closure(g, op)

    builder = ProgramBuilder(n)
    r = _boundary_signal(builder, g, op)
    for point in points:
        r = builder.select(_point_matches(builder, point), constant(f.value(point)), r)
    program = builder.build([r])
    logger.debug("patched %s from %s at %d points: %d gates", f.bits, g.bits, len(points), program.size)
    return program


def preferred_operation(table):
    """First detected polymorphism in the CLI preference order, or None."""
    found = detect_nontrivial_polymorphisms(table)
    return found[0] if found else None


