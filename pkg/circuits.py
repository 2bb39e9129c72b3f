"""
Straight-line programs for the Polymorphism Circuit Workbench

A program over n inputs is a gate sequence g_{n+1}..g_t; references 1..n are
the inputs. Viewed column-wise, every gate is a 2^n-row matrix whose output
column is its operation applied row by row to its input columns.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from config import DEFAULT_MAX_SIZE, GATE_BASIS
from truth_table import (
    UNDEF,
    Column,
    TruthTable,
    dense_witness_matrix,
    index_to_bits,
    input_column,
)
from workbench_errors import (
    ArityError,
    FormatError,
    ProgramStructureError,
    WidthMismatchError,
    WitnessModeError,
)

logger = logging.getLogger(__name__)


class GateKind(Enum):
    AND = "and"
    OR = "or"
    NOT = "not"

    @classmethod
    def parse(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise FormatError(f"unknown gate kind {name!r} (expected AND, OR or NOT)") from None

    @property
    def arity(self):
        return 1 if self is GateKind.NOT else 2

    def apply(self, *args):
        """Evaluate on bits or on equally shaped numpy bit arrays."""
        if len(args) != self.arity:
            raise ArityError(f"{self.name} takes {self.arity} inputs, got {len(args)}")
        if self is GateKind.AND:
            return args[0] & args[1]
        if self is GateKind.OR:
            return args[0] | args[1]
        return args[0] ^ 1


def parse_basis(basis):
    """Gate kinds from names such as 'and,or,not'; only the AND/OR/NOT basis exists."""
    if isinstance(basis, str):
        basis = [part for part in basis.split(",") if part.strip()]
    kinds = tuple(kind if isinstance(kind, GateKind) else GateKind.parse(kind) for kind in basis)
    if not kinds:
        raise FormatError("empty gate basis")
    return kinds


_BASIS_ORDER = {kind: position for position, kind in enumerate(GateKind)}


@dataclass(frozen=True)
class Gate:
    """One program gate; inputs are 1-based references to earlier wires."""

    kind: GateKind
    inputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "inputs", tuple(int(i) for i in self.inputs))
        if len(self.inputs) != self.kind.arity:
            raise ProgramStructureError(
                f"{self.kind.name} gate needs {self.kind.arity} inputs, got {len(self.inputs)}"
            )


@dataclass(frozen=True)
class Program:
    """
    A topologically ordered straight-line program.

    `outputs` lists the designated output wires; it defaults to the last
    wire t. Single-output callers use `output`, the first designated wire.
    """

    arity: int
    gates: tuple
    outputs: tuple = None

    def __post_init__(self):
        if self.arity < 1:
            raise ProgramStructureError(f"a program needs at least one input, got arity {self.arity}")
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        for position, gate in enumerate(gates):
            index = self.arity + position + 1
            for ref in gate.inputs:
                if not 1 <= ref < index:
                    raise ProgramStructureError(
                        f"gate g{index} reads g{ref}, which does not precede it"
                    )
        wires = self.arity + len(gates)
        outputs = (wires,) if self.outputs is None else tuple(int(o) for o in self.outputs)
        if not outputs:
            raise ProgramStructureError("a program needs at least one output wire")
        for ref in outputs:
            if not 1 <= ref <= wires:
                raise ProgramStructureError(f"output g{ref} does not exist (program has {wires} wires)")
        object.__setattr__(self, "outputs", outputs)

    @property
    def size(self):
        """Gate count, inputs excluded."""
        return len(self.gates)

    @property
    def wire_count(self):
        return self.arity + len(self.gates)

    @property
    def output(self):
        return self.outputs[0]

    def with_outputs(self, outputs):
        return Program(self.arity, self.gates, tuple(outputs))


# ============================================================================
# EVALUATION
# ============================================================================

def _trace(program, x):
    x = tuple(int(b) for b in x)
    if len(x) != program.arity:
        raise WidthMismatchError(f"expected {program.arity} input bits, got {len(x)}")
    trace = list(x)
    for gate in program.gates:
        trace.append(gate.kind.apply(*(trace[ref - 1] for ref in gate.inputs)))
    return tuple(trace)


def evaluate(program, x):
    """
    Run a program on one input.

    Args:
        program: Program
        x: n input bits

    Returns:
        tuple: (output bit, trace u) with u_1..u_n = x and u_i the value of gate g_i
    """
    trace = _trace(program, x)
    return trace[program.output - 1], trace


def evaluate_outputs(program, x):
    trace = _trace(program, x)
    return tuple(trace[ref - 1] for ref in program.outputs)


def column_arrays(program):
    """All wires evaluated on every row at once: a (t, 2^n) uint8 matrix."""
    n = program.arity
    matrix = np.zeros((program.wire_count, 2 ** n), dtype=np.uint8)
    for i in range(1, n + 1):
        matrix[i - 1] = input_column(i, n).to_array()
    for position, gate in enumerate(program.gates):
        matrix[n + position] = gate.kind.apply(*(matrix[ref - 1] for ref in gate.inputs))
    return matrix


def gate_columns(program):
    return tuple(Column.from_array(row) for row in column_arrays(program))


def gate_column(program, index):
    """Column of wire g_index; for index <= n this is input_column(index, n)."""
    if not 1 <= index <= program.wire_count:
        raise ArityError(f"g{index} out of range 1..{program.wire_count}")
    return gate_columns(program)[index - 1]


def program_table(program, output=None):
    """The function computed at one output wire (default: the first designated output)."""
    output = program.output if output is None else output
    return TruthTable(program.arity, tuple(int(b) for b in column_arrays(program)[output - 1]))


def find_disagreement(program, table):
    """First input (in row order) where the program's output differs from f, or None."""
    if program.arity != table.arity:
        raise WidthMismatchError(f"program has {program.arity} inputs, table has {table.arity}")
    computed = column_arrays(program)[program.output - 1]
    wrong = np.flatnonzero(computed != np.array(table.outputs, dtype=np.uint8))
    if len(wrong) == 0:
        return None
    return index_to_bits(int(wrong[0]), program.arity)


def computes(program, table):
    return find_disagreement(program, table) is None


def is_consistent(w, program):
    """
    Check w(g_i1) o_i w(g_i2) = w(g_i) for every gate.

    Every row of the program matrix is a computation, so row-selector
    witnesses are always consistent; an anti-polymorphism of f• never is
    when the program computes f.
    """
    columns = gate_columns(program)
    for position, gate in enumerate(program.gates):
        out = columns[program.arity + position]
        values = [w[columns[ref - 1]] for ref in gate.inputs] + [w[out]]
        if UNDEF in values:
            raise WitnessModeError("consistency is defined for total witnesses only")
        if gate.kind.apply(*values[:-1]) != values[-1]:
            return False
    return True


def dense_consistency_mask(program):
    """Consistency of every dense total witness (n <= 2) with the program, vectorized."""
    witnesses = dense_witness_matrix(program.arity)
    indices = [column.as_index() for column in gate_columns(program)]
    consistent = np.ones(len(witnesses), dtype=bool)
    for position, gate in enumerate(program.gates):
        values = [witnesses[:, indices[ref - 1]] for ref in gate.inputs]
        consistent &= gate.kind.apply(*values) == witnesses[:, indices[program.arity + position]]
    return consistent


# ============================================================================
# PROGRAM BUILDER
# ============================================================================

class Signal(NamedTuple):
    """A wire reference with a pending negation; ref 0 is the constant 0 (or 1 if inverted)."""

    ref: int
    inverted: bool = False

    @property
    def is_constant(self):
        return self.ref == 0

    def __invert__(self):
        return Signal(self.ref, not self.inverted)


FALSE = Signal(0, False)
TRUE = Signal(0, True)


def constant(bit):
    return TRUE if bit else FALSE


class ProgramBuilder:
    """
    Emits gates with constant folding, lazy negation and structural hashing.

    Signals carry negation symbolically; a NOT gate is only emitted when an
    inverted signal is wired into a gate or an output.
    """

    def __init__(self, arity):
        if arity < 1:
            raise ArityError(f"a program needs at least one input, got arity {arity}")
        self.arity = arity
        self.gates = []
        self._memo = {}
        self._negated_from = {}

    def input(self, i):
        if not 1 <= i <= self.arity:
            raise ArityError(f"input x{i} out of range for arity {self.arity}")
        return Signal(i)

    @property
    def size(self):
        return len(self.gates)

    def gate(self, kind, *refs):
        """Emit (or reuse) a gate over wire references and return its reference."""
        kind = GateKind(kind)
        if kind is not GateKind.NOT:
            refs = tuple(sorted(refs))
        key = (kind, refs)
        if key not in self._memo:
            self.gates.append(Gate(kind, refs))
            ref = self.arity + len(self.gates)
            self._memo[key] = ref
            if kind is GateKind.NOT:
                self._negated_from[ref] = refs[0]
        return self._memo[key]

    def wire(self, signal):
        """Reference of a wire carrying the signal, emitting gates if needed."""
        if signal.is_constant:
            x1 = self.input(1)
            if signal.inverted:
                return self.wire(self.or_(x1, ~x1, fold=False))
            return self.wire(self.and_(x1, ~x1, fold=False))
        if not signal.inverted:
            return signal.ref
        if signal.ref in self._negated_from:
            return self._negated_from[signal.ref]
        return self.gate(GateKind.NOT, signal.ref)

    def and_(self, a, b, fold=True):
        if fold:
            if a == FALSE or b == FALSE or a == ~b:
                return FALSE
            if a == TRUE or a == b:
                return b
            if b == TRUE:
                return a
            if a.inverted and b.inverted:
                return ~self.or_(~a, ~b)
        return Signal(self.gate(GateKind.AND, self.wire(a), self.wire(b)))

    def or_(self, a, b, fold=True):
        if fold:
            if a == TRUE or b == TRUE or a == ~b:
                return TRUE
            if a == FALSE or a == b:
                return b
            if b == FALSE:
                return a
            if a.inverted and b.inverted:
                return ~self.and_(~a, ~b)
        return Signal(self.gate(GateKind.OR, self.wire(a), self.wire(b)))

    def xor(self, a, b):
        """a xor b as (a or b) and not (a and b): four gates unless it folds."""
        if a.is_constant:
            return ~b if a.inverted else b
        if b.is_constant:
            return ~a if b.inverted else a
        if a == b:
            return FALSE
        if a == ~b:
            return TRUE
        flip = a.inverted != b.inverted
        a, b = Signal(a.ref), Signal(b.ref)
        either = self.or_(a, b)
        both = self.and_(a, b)
        result = self.and_(either, ~both)
        return ~result if flip else result

    def select(self, s, hi, lo):
        """s ? hi : lo, folded whenever an operand is constant or related to another."""
        if hi == lo:
            return hi
        if s.is_constant:
            return hi if s.inverted else lo
        if hi == TRUE or hi == s:
            return self.or_(s, lo)
        if hi == FALSE or hi == ~s:
            return self.and_(~s, lo)
        if lo == TRUE or lo == ~s:
            return self.or_(~s, hi)
        if lo == FALSE or lo == s:
            return self.and_(s, hi)
        if hi == ~lo:
            return self.xor(s, lo)
        return self.or_(self.and_(s, hi), self.and_(~s, lo))

    def majority(self, a, b, c):
        if a == b or a == c:
            return a
        if b == c:
            return b
        if a == ~b:
            return c
        if a == ~c:
            return b
        if b == ~c:
            return a
        return self.or_(self.and_(a, b), self.and_(c, self.or_(a, b)))

    def build(self, outputs):
        """Freeze the emitted gates into a Program with the given output signals."""
        refs = tuple(self.wire(signal) for signal in outputs)
        return Program(self.arity, tuple(self.gates), refs)


# ============================================================================
# OPTIMAL CIRCUIT ORACLE
# ============================================================================

def _chains(n, size, basis, target=None):
    """
    Canonical duplicate-free gate chains of exactly `size` gates.

    Columns are ints (row 0 most significant). No gate repeats a realized
    column, and a gate independent of its predecessor must have a strictly
    larger (kind, input columns) key, so each chain is produced once per
    dependency order. With a target, only the last gate may realize it, and
    a prefix is dropped once its unread gates outnumber what the remaining
    gates could still read.
    """
    full = (1 << (2 ** n)) - 1
    values = [input_column(i, n).as_index() for i in range(1, n + 1)]
    realized = set(values)
    unread = [False] * n
    gates = []
    keys = []
    kinds = sorted(basis, key=_BASIS_ORDER.get)

    def candidates():
        last = len(values) - 1
        for kind in kinds:
            if kind is GateKind.NOT:
                pairs = ((a,) for a in range(len(values)))
            else:
                pairs = ((a, b) for a in range(len(values)) for b in range(a + 1, len(values)))
            for inputs in pairs:
                operands = [values[i] for i in inputs]
                if kind is GateKind.NOT:
                    value = operands[0] ^ full
                else:
                    value = kind.apply(*operands)
                if value in realized:
                    continue
                key = (_BASIS_ORDER[kind], tuple(sorted(operands)))
                if keys and last not in inputs and key <= keys[-1]:
                    continue
                yield kind, inputs, value, key

    def extend(remaining):
        if remaining == 0:
            yield tuple(Gate(kind, tuple(i + 1 for i in inputs)) for kind, inputs in gates)
            return
        for kind, inputs, value, key in candidates():
            if target is not None and (value == target) != (remaining == 1):
                continue
            was_unread = [unread[i] for i in inputs]
            for i in inputs:
                unread[i] = False
            values.append(value)
            realized.add(value)
            unread.append(True)
            gates.append((kind, inputs))
            keys.append(key)
            # each later gate reads at most two wires and all but the output must be read
            if target is None or sum(unread) <= remaining:
                yield from extend(remaining - 1)
            values.pop()
            realized.discard(value)
            unread.pop()
            for i, flag in zip(inputs, was_unread):
                unread[i] = flag
            gates.pop()
            keys.pop()

    yield from extend(size)


def enumerate_programs(n, size, basis=GATE_BASIS):
    """Every canonical duplicate-free program with exactly `size` gates, output = last gate."""
    for gates in _chains(n, size, parse_basis(basis)):
        yield Program(n, gates)


def optimal_circuit(table, max_size=DEFAULT_MAX_SIZE, basis=GATE_BASIS):
    """
    Minimum-size program computing f, by iterative deepening on gate count.

    Args:
        table: TruthTable of f
        max_size: Largest gate count to try
        basis: Gate kinds allowed (names or GateKind)

    Returns:
        Program or None: None when no program within max_size computes f
    """
    kinds = parse_basis(basis)
    n = table.arity
    target = table.result_column.as_index()
    for i in range(1, n + 1):
        if input_column(i, n).as_index() == target:
            return Program(n, (), (i,))
    for size in range(1, max_size + 1):
        logger.debug("searching size %d for %s", size, table.bits)
        for gates in _chains(n, size, kinds, target=target):
            return Program(n, gates)
    logger.info("no circuit of size <= %d computes %s", max_size, table.bits)
    return None


# ============================================================================
# RANDOM PROGRAMS AND DEDUPLICATION
# ============================================================================

def random_program(n, size, rng, basis=GATE_BASIS):
    """A random program of `size` gates drawn with a numpy Generator; output = last gate."""
    kinds = parse_basis(basis)
    gates = []
    for position in range(size):
        wires = n + position
        kind = kinds[int(rng.integers(len(kinds)))]
        if wires < 2:
            kind = GateKind.NOT
        if kind is GateKind.NOT:
            inputs = (int(rng.integers(wires)) + 1,)
        else:
            inputs = tuple(int(i) + 1 for i in rng.choice(wires, size=2, replace=False))
        gates.append(Gate(kind, inputs))
    return Program(n, tuple(gates))


def deduplicate_program(program):
    """
    Rewire every column to its first producer and drop gates no output needs.

    The result computes the same outputs, no two of its gates realize the
    same column, no gate realizes an input column, and (single output) the
    output column feeds no gate.
    """
    n = program.arity
    columns = [column.as_index() for column in gate_columns(program)]
    producer = {}
    alias = {}
    for ref in range(1, n + 1):
        producer.setdefault(columns[ref - 1], ref)
        alias[ref] = producer[columns[ref - 1]]
    kept = {}
    for position, gate in enumerate(program.gates):
        ref = n + position + 1
        if columns[ref - 1] in producer:
            alias[ref] = producer[columns[ref - 1]]
            continue
        producer[columns[ref - 1]] = ref
        alias[ref] = ref
        kept[ref] = Gate(gate.kind, tuple(alias[i] for i in gate.inputs))

    needed = set()
    stack = [alias[ref] for ref in program.outputs]
    while stack:
        ref = stack.pop()
        if ref in needed or ref <= n:
            continue
        needed.add(ref)
        stack.extend(kept[ref].inputs)

    renumber = {ref: ref for ref in range(1, n + 1)}
    gates = []
    for ref in sorted(needed):
        gate = kept[ref]
        gates.append(Gate(gate.kind, tuple(renumber[i] for i in gate.inputs)))
        renumber[ref] = n + len(gates)
    outputs = tuple(renumber[alias[ref]] for ref in program.outputs)
    return Program(n, tuple(gates), outputs)
